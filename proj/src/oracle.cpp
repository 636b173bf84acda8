// Copyright 2026 The FTMS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftms/oracle.hpp"

#include <algorithm>
#include <random>
#include <tuple>

namespace ftms::oracle {

std::vector<std::string> Network::atoms() const {
  std::vector<std::string> out;
  auto note = [&](const std::string& name) {
    if (name == kFalsity) return;
    if (std::find(assumptions.begin(), assumptions.end(), name) != assumptions.end()) return;
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  for (const NetJustification& j : justifications) {
    for (const std::string& a : j.antecedents) note(a);
    note(j.consequent);
  }
  return out;
}

namespace {

struct Tuple {
  std::set<int> env;
  std::set<std::string> used;
  double c;
  double cr;

  friend bool operator<(const Tuple& a, const Tuple& b) {
    return std::tie(a.env, a.used, a.c, a.cr) < std::tie(b.env, b.used, b.c, b.cr);
  }
};

bool proper_subset(const std::set<int>& a, const std::set<int>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool subset(const std::set<int>& a, const std::set<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

State oracle_closure(const Network& net, double alpha, double beta) {
  const std::size_t n_assumptions = net.assumptions.size();
  if (n_assumptions > kMaxAssumptions) throw OracleLimit("too many assumptions for the oracle");

  std::map<std::string, std::set<Tuple>> derived;
  for (std::size_t i = 0; i < n_assumptions; ++i) {
    const std::string& a = net.assumptions[i];
    derived[a].insert(Tuple{{static_cast<int>(i)}, {a}, 1.0, 1.0});
  }
  derived[kFalsity];
  for (const std::string& atom : net.atoms()) derived[atom];

  // Naive fixpoint: refire every justification on every combination until
  // no new tuple appears.
  bool grew = true;
  while (grew) {
    grew = false;
    for (const NetJustification& j : net.justifications) {
      std::vector<std::vector<Tuple>> pools;
      for (const std::string& a : j.antecedents)
        pools.emplace_back(derived[a].begin(), derived[a].end());
      if (std::any_of(pools.begin(), pools.end(), [](const auto& p) { return p.empty(); }))
        continue;
      std::vector<std::size_t> pick(pools.size(), 0);
      while (true) {
        Tuple t{{}, {j.consequent}, 0, 0};
        bool ok = true;
        std::vector<Confidence> cs;
        std::vector<std::pair<ResolutionConfidence, Confidence>> crs;
        for (std::size_t p = 0; p < pools.size(); ++p) {
          const Tuple& in = pools[p][pick[p]];
          if (in.used.count(j.consequent)) ok = false;
          t.env.insert(in.env.begin(), in.env.end());
          t.used.insert(in.used.begin(), in.used.end());
          cs.emplace_back(in.c);
          crs.emplace_back(ResolutionConfidence(in.cr), Confidence(in.c));
        }
        if (ok) {
          if (j.weight) {
            try {
              t.c = propagate_confidence(*j.weight, cs).value();
              t.cr = propagate_resolution_confidence(crs).value();
            } catch (const RuleNotApplicable&) {
              ok = false;
            }
          } else {
            t.c = j.c;
            t.cr = j.cr;
          }
        }
        if (ok && derived[j.consequent].insert(t).second) grew = true;

        std::size_t p = 0;
        for (; p < pools.size(); ++p) {
          if (++pick[p] < pools[p].size()) break;
          pick[p] = 0;
        }
        if (p == pools.size()) break;
      }
    }
  }

  std::vector<std::set<int>> universe;
  for (std::uint32_t mask = 0; mask < (1u << n_assumptions); ++mask) {
    std::set<int> e;
    for (std::size_t i = 0; i < n_assumptions; ++i)
      if (mask & (1u << i)) e.insert(static_cast<int>(i));
    universe.push_back(std::move(e));
  }
  auto names = [&](const std::set<int>& e) {
    std::vector<std::string> out;
    for (int i : e) out.push_back(net.assumptions[i]);
    return out;
  };

  State state;

  // cs(E) = -max c_r(falsity) derivable within E.
  const auto& falsity = derived[kFalsity];
  std::map<std::set<int>, double> cs_of;
  for (const auto& e : universe) {
    double worst = -1.0;
    for (const Tuple& t : falsity)
      if (subset(t.env, e)) worst = std::max(worst, t.cr);
    double cs = worst < 0 ? 1.0 : (worst == 0.0 ? 0.0 : -worst);
    cs_of[e] = cs;
    state.consistency[names(e)] = cs;
  }

  std::vector<std::set<int>> ordered = universe;  // lexicographic member order
  std::sort(ordered.begin(), ordered.end());
  for (const auto& e : ordered) {
    double best = -1.0;
    for (const Tuple& t : falsity)
      if (t.env == e) best = std::max(best, t.cr);
    if (best < 0) continue;
    bool minimal = true;
    for (const Tuple& t : falsity)
      if (proper_subset(t.env, e) && t.cr >= best - kTolerance) minimal = false;
    if (minimal) state.medb.push_back({names(e), best == 0.0 ? 0.0 : -best});
  }

  for (const auto& [node, tuples] : derived) {
    std::vector<std::pair<std::set<int>, Entry>> entries;
    for (const auto& e : universe) {
      const Tuple* best = nullptr;
      for (const Tuple& t : tuples) {
        if (t.env != e || t.cr < beta - kTolerance) continue;
        if (best == nullptr) {
          best = &t;
          continue;
        }
        double a = t.c * t.cr, b = best->c * best->cr;
        if (a > b || (a == b && (t.cr > best->cr || (t.cr == best->cr && t.c > best->c))))
          best = &t;
      }
      if (best == nullptr) continue;
      double value = best->c * best->cr;
      bool dominated = false;
      for (const Tuple& t : tuples)
        if (t.cr >= beta - kTolerance && proper_subset(t.env, e) &&
            t.c * t.cr >= value - kTolerance)
          dominated = true;
      if (dominated) continue;
      if (cs_of[e] < alpha - kTolerance) continue;
      entries.push_back({e, Entry{names(e), best->c, best->cr, value == 0.0 ? 0.0 : value,
                                  cs_of[e]}});
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& out = state.labels[node];
    for (auto& [e, entry] : entries) out.push_back(std::move(entry));
  }
  return state;
}

Network generate_random_network(std::uint64_t seed, const GeneratorOptions& options) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  // Multiples of 0.05 in [lo, hi].
  auto grid = [&](int lo, int hi) { return uniform_int(lo, hi) * 0.05; };

  Network net;
  for (int i = 0; i < options.assumptions; ++i) net.assumptions.push_back("p" + std::to_string(i));
  std::vector<std::string> atoms;
  for (int i = 0; i < options.atoms; ++i) atoms.push_back("a" + std::to_string(i));

  std::set<std::pair<int, int>> fact_pairs;
  for (int i = 0; i < options.facts && options.assumptions > 0 && options.atoms > 0; ++i) {
    int atom = uniform_int(0, options.atoms - 1);
    int source = uniform_int(0, options.assumptions - 1);
    if (!fact_pairs.insert({atom, source}).second) continue;
    NetJustification f;
    f.name = "f" + std::to_string(i);
    f.antecedents = {net.assumptions[source]};
    f.consequent = atoms[atom];
    f.truth = TruthValue(grid(0, 20));
    f.c = truth_to_confidence(*f.truth).value();
    f.cr = 1.0;
    net.justifications.push_back(std::move(f));
  }

  for (int i = 0; i < options.rules && options.atoms > 0; ++i) {
    NetJustification r;
    r.name = "r" + std::to_string(i);
    bool contradiction = chance(options.contradiction_fraction);
    bool cyclic = !contradiction && chance(options.cycle_fraction);
    int consequent = -1;
    if (!contradiction && !cyclic) {
      if (options.atoms < 2) continue;
      consequent = uniform_int(1, options.atoms - 1);
    }
    // Acyclic rules draw antecedents strictly below the consequent.
    int limit = (contradiction || cyclic) ? options.atoms : consequent;
    int arity = std::min(uniform_int(1, std::max(1, options.max_antecedents)), limit);
    std::vector<int> pool;
    for (int a = 0; a < limit; ++a) pool.push_back(a);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> chosen(pool.begin(), pool.begin() + arity);
    std::sort(chosen.begin(), chosen.end());
    if (cyclic) {
      std::vector<int> rest;
      for (int a = 0; a < options.atoms; ++a)
        if (std::find(chosen.begin(), chosen.end(), a) == chosen.end()) rest.push_back(a);
      if (rest.empty()) continue;
      consequent = rest[uniform_int(0, static_cast<int>(rest.size()) - 1)];
    }
    for (int a : chosen) r.antecedents.push_back(atoms[a]);
    r.consequent = contradiction ? kFalsity : atoms[consequent];
    if (chance(options.asserted_fraction)) {
      r.c = grid(-20, 20);
      r.cr = grid(0, 20);
    } else {
      int w = uniform_int(1, 20) * (chance(0.5) ? 1 : -1);
      r.weight = RuleWeight(w * 0.05);
    }
    net.justifications.push_back(std::move(r));
  }
  return net;
}

std::vector<SaturatedAtom> oracle_saturate(const std::vector<OracleRule>& rules,
                                           const std::vector<OracleFact>& facts) {
  struct Value {
    double c;
    double cr;
    std::vector<std::set<std::string>> antecedent_support;
  };
  using Key = std::pair<std::string, std::set<std::string>>;

  auto fact_id = [](const OracleFact& f) { return f.atom + "@" + f.source; };
  std::map<std::string, std::string> concludes;  // item id -> atom
  for (const OracleFact& f : facts) concludes[fact_id(f)] = f.atom;
  for (const OracleRule& r : rules) concludes[r.id] = r.consequent;

  auto better = [](const Value& a, const Value& b) {
    double x = a.c * a.cr, y = b.c * b.cr;
    if (x != y) return x > y;
    if (a.cr != b.cr) return a.cr > b.cr;
    if (a.c != b.c) return a.c > b.c;
    return a.antecedent_support < b.antecedent_support;
  };

  std::map<Key, Value> state;
  while (true) {
    std::map<Key, Value> next;
    auto offer = [&](Key key, Value v) {
      auto it = next.find(key);
      if (it == next.end()) next.emplace(std::move(key), std::move(v));
      else if (better(v, it->second)) it->second = std::move(v);
    };
    for (const OracleFact& f : facts)
      offer({f.atom, {fact_id(f)}}, {truth_to_confidence(f.truth).value(), 1.0, {}});

    for (const OracleRule& r : rules) {
      std::vector<std::vector<const std::pair<const Key, Value>*>> pools;
      for (const std::string& a : r.antecedents) {
        pools.emplace_back();
        for (const auto& kv : state)
          if (kv.first.first == a) pools.back().push_back(&kv);
      }
      if (std::any_of(pools.begin(), pools.end(), [](const auto& p) { return p.empty(); }))
        continue;
      std::vector<std::size_t> pick(pools.size(), 0);
      while (true) {
        bool ok = true;
        std::set<std::string> support{r.id};
        Value v{0, 0, {}};
        std::vector<Confidence> cs;
        std::vector<std::pair<ResolutionConfidence, Confidence>> crs;
        for (std::size_t p = 0; p < pools.size(); ++p) {
          const auto& [key, val] = *pools[p][pick[p]];
          for (const std::string& item : key.second)
            if (item == r.id || concludes[item] == r.consequent) ok = false;
          support.insert(key.second.begin(), key.second.end());
          v.antecedent_support.push_back(key.second);
          cs.emplace_back(val.c);
          crs.emplace_back(ResolutionConfidence(val.cr), Confidence(val.c));
        }
        if (ok) {
          try {
            v.c = propagate_confidence(r.weight, cs).value();
            v.cr = propagate_resolution_confidence(crs).value();
            offer({r.consequent, std::move(support)}, std::move(v));
          } catch (const RuleNotApplicable&) {
          }
        }
        std::size_t p = 0;
        for (; p < pools.size(); ++p) {
          if (++pick[p] < pools[p].size()) break;
          pick[p] = 0;
        }
        if (p == pools.size()) break;
      }
    }

    bool same = next.size() == state.size() &&
                std::equal(next.begin(), next.end(), state.begin(), [](const auto& a, const auto& b) {
                  return a.first == b.first && a.second.c == b.second.c && a.second.cr == b.second.cr;
                });
    state = std::move(next);
    if (same) break;
  }

  std::vector<SaturatedAtom> out;
  for (const auto& [key, v] : state) out.push_back({key.first, key.second, v.c, v.cr});
  return out;
}

}  // namespace ftms::oracle
