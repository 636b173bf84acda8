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

// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit status
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "ftms/cli.hpp"
#include "ftms/engine.hpp"
#include "ftms/inference.hpp"
#include "ftms/netfmt.hpp"
#include "ftms/oracle.hpp"
#include "support.hpp"

using namespace ftms;

namespace {

// Pinned tolerances and budgets.
constexpr double kExact = 1e-9;
constexpr double kCrcExact = 1e-12;
constexpr double kFastBudgetSeconds = 1.0;
constexpr double kPropertyBudgetSeconds = 60.0;
constexpr int kLeePairs = 10000;
constexpr std::uint64_t kOracleNetworks = 200;
constexpr std::uint64_t kShuffledNetworks = 20;
constexpr int kShuffles = 20;

using Names = std::vector<std::string>;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
  void near(double got, double want, const std::string& what, double tol = kExact) {
    std::ostringstream s;
    s << what << ": got " << got << ", want " << want;
    expect(std::fabs(got - want) <= tol, s.str());
  }
};

std::vector<Names> envs(const Engine& e, NodeId n) {
  std::vector<Names> out;
  for (const auto& x : e.label(n)) out.push_back(testing::env_names(e, x.env));
  return out;
}

std::vector<Names> envs(const Engine& e, const std::string& node) {
  return envs(e, *e.find_node(node));
}

const LabelEntry* entry(const Engine& e, const std::string& node, const Names& env) {
  for (const auto& x : e.label(*e.find_node(node)))
    if (testing::env_names(e, x.env) == env) return &x;
  return nullptr;
}

std::string show(const std::vector<Names>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + testing::join(v[i]);
  return out + "}";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Single-source chaining, exact values; r3 never applicable.
Check chaining() {
  Check c;
  inference::Engine solver;
  solver.add_fact({"A", TruthValue(0.8), "s"});
  solver.add_rule({"r1", {"A"}, "B", RuleWeight(0.3)});
  solver.add_rule({"r2", {"B"}, "C", RuleWeight(-0.4)});
  solver.add_rule({"r3", {"A"}, "D", RuleWeight(-0.7)});
  solver.add_rule({"r4", {"D"}, "C", RuleWeight(0.1)});
  auto out = solver.saturate();
  auto get = [&](const std::string& atom) -> const inference::DerivedAtom* {
    for (const auto& d : out)
      if (d.atom == atom) return &d;
    return nullptr;
  };
  const auto *a = get("A"), *b = get("B"), *cc = get("C");
  c.expect(a && b && cc, "missing derivation");
  if (!c.ok) return c;
  c.near(a->c.value(), 0.6, "c(A)");
  c.near(a->cr.value(), 1.0, "cr(A)");
  c.near(b->c.value(), 0.5, "c(B)");
  c.near(b->cr.value(), 0.6, "cr(B)");
  c.near(cc->c.value(), -0.8, "c(C)");
  c.near(confidence_to_truth(cc->c).value(), 0.1, "[C]");
  c.near(cc->cr.value(), 0.5, "cr(C)");
  c.expect(get("D") == nullptr, "r3 fired");
  for (const auto& j : solver.emit_justifications()) c.expect(j.id != "r3", "r3 emitted");
  c.expect(out.size() == 3, "unexpected extra derivations");
  return c;
}

// 2. Weighted confidences of the four-assumption network.
Check weighted() {
  Check c;
  Engine e;
  testing::load(e, testing::weighted_network());
  struct Want {
    const char* label;
    const char* node;
    Names env;
    double c;
  };
  const Want wants[] = {{"J5 c(E)", "E", {"pi", "rho"}, 0.5},
                        {"J6 c(F)", "F", {"pi", "sigma"}, 0.75},
                        {"J7 c(H)", "H", {"pi", "rho", "sigma"}, 0.8},
                        {"J8 c(F)", "F", {"sigma", "tau"}, 1.0},
                        {"J9 c(E)", "E", {"rho", "sigma", "tau"}, 0.75},
                        {"J10 c(FALSE)", "FALSE", {"rho", "sigma"}, 0.5}};
  for (const auto& w : wants) {
    const LabelEntry* x = entry(e, w.node, w.env);
    c.expect(x != nullptr, std::string(w.label) + " missing");
    if (x) c.near(x->c.value(), w.c, w.label);
  }
  // With the two later rules present the second contradiction rule still
  // never applies: min(c(D), c(E)) <= 0.4 < 0.5.
  Engine full;
  testing::load(full, testing::weighted_network(2));
  JustificationId r14 = *full.find_justification("r14");
  for (const LabelEntry& x : full.label(full.falsity()))
    c.expect(!x.supports.contains(r14), "r14 fired");
  std::string d = testing::diff(full, oracle::oracle_closure(testing::weighted_network(2)),
                                full.thresholds());
  c.expect(d.empty(), d);
  return c;
}

// 3. Replay with pre-annotated confidences.
Check replay() {
  Check c;
  auto net = testing::replay_network();
  Engine e;
  testing::load(e, net);
  for (auto [node, a] : std::vector<std::pair<const char*, const char*>>{
           {"A", "pi"}, {"B", "rho"}, {"C", "sigma"}, {"D", "tau"}}) {
    c.expect(envs(e, node) == std::vector<Names>{{a}}, std::string("L_") + node);
    if (const LabelEntry* x = entry(e, node, {a})) c.near(x->cs, 1.0, std::string("cs L_") + node);
  }
  c.expect(envs(e, "F") == std::vector<Names>{{"pi", "sigma"}, {"sigma", "tau"}},
           "L_F = " + show(envs(e, "F")));
  for (const LabelEntry& x : e.label(*e.find_node("F"))) c.near(x.cs, 1.0, "cs L_F");
  c.expect(envs(e, "G") == std::vector<Names>{{"pi", "rho", "sigma"}, {"sigma", "tau"}},
           "L_G = " + show(envs(e, "G")));
  if (auto* x = entry(e, "G", {"pi", "rho", "sigma"})) c.near(x->cs, -0.5, "cs G(pi,rho,sigma)");
  if (auto* x = entry(e, "G", {"sigma", "tau"})) c.near(x->cs, 1.0, "cs G(sigma,tau)");
  c.expect(e.medb().size() == 1, "MEDB size");
  if (e.medb().size() == 1) {
    c.expect(testing::env_names(e, e.medb()[0].env) == Names{"rho", "sigma"}, "MEDB env");
    c.near(e.medb()[0].cs, -0.5, "MEDB cs");
  }
  // L_E against the brute-force closure.
  auto oracle = oracle::oracle_closure(net);
  std::vector<Names> want;
  for (const auto& x : oracle.labels.at("E")) want.push_back(x.env);
  c.expect(envs(e, "E") == want, "L_E = " + show(envs(e, "E")) + ", oracle " + show(want));
  std::string d = testing::diff(e, oracle, e.thresholds());
  c.expect(d.empty(), d);
  if (c.ok) c.why << "L_E = " << show(want) << " (oracle)";
  return c;
}

// 4. The two later justifications.
Check revision() {
  Check c;
  auto net = testing::replay_network(2);
  Engine e;
  testing::load(e, testing::prefix(net, 12));

  testing::add(e, net.justifications[12]);
  const LabelEntry* st = entry(e, "E", {"sigma", "tau"});
  c.expect(st != nullptr, "L_E lacks (sigma,tau) after J13");
  if (st) c.near(st->cs, 1.0, "cs E(sigma,tau)");
  std::string d13 = testing::diff(e, oracle::oracle_closure(testing::prefix(net, 13)), e.thresholds());
  c.expect(d13.empty(), d13);

  auto before = e.medb();
  UpdateReport r = testing::add(e, net.justifications[13]);
  c.expect(r.medb_changed, "MEDB unchanged after J14");
  std::vector<std::pair<Names, double>> medb;
  for (const auto& x : e.medb()) medb.push_back({testing::env_names(e, x.env), x.cs});
  std::vector<std::pair<Names, double>> want{
      {{"pi", "rho", "tau"}, -0.4}, {{"rho", "sigma"}, -0.5}, {{"sigma", "tau"}, -0.4}};
  c.expect(medb.size() == want.size(), "MEDB size " + std::to_string(medb.size()));
  for (std::size_t i = 0; i < std::min(medb.size(), want.size()); ++i) {
    c.expect(medb[i].first == want[i].first, "MEDB env " + testing::join(medb[i].first));
    c.near(medb[i].second, want[i].second, "MEDB cs " + testing::join(medb[i].first));
  }
  Environment sigma_tau, rho_sigma;
  sigma_tau.insert(*e.find_assumption("sigma"));
  sigma_tau.insert(*e.find_assumption("tau"));
  rho_sigma.insert(*e.find_assumption("rho"));
  rho_sigma.insert(*e.find_assumption("sigma"));
  int flipped = 0;
  for (NodeId n : e.nodes())
    for (const auto& x : e.label(n)) {
      if (!sigma_tau.subset_of(x.env)) continue;
      double expect = rho_sigma.subset_of(x.env) ? -0.5 : -0.4;
      c.near(x.cs, expect, e.name(n) + " " + testing::join(testing::env_names(e, x.env)));
      ++flipped;
    }
  c.expect(flipped > 0, "no (sigma,tau) superset entries");
  std::string d14 = testing::diff(e, oracle::oracle_closure(net), e.thresholds());
  c.expect(d14.empty(), d14);
  if (c.ok) c.why << flipped << " (sigma,tau)-superset entries checked";
  return c;
}

// 5. Property suite.
Check properties() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();

  // (a) Lee bound.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int lee_checked = 0;
  for (int trial = 0; trial < kLeePairs; ++trial) {
    std::map<std::string, TruthValue> v{{"x", TruthValue(unit(rng))}};
    auto clause = [&](bool pos, const char* prefix) {
      std::vector<Literal> lits{{"x", pos}};
      int extra = static_cast<int>(rng() % 4);
      for (int i = 0; i < extra; ++i) {
        std::string atom = prefix + std::to_string(i);
        v.insert_or_assign(atom, TruthValue(unit(rng)));
        lits.push_back({atom, rng() % 2 == 0});
      }
      return lits;
    };
    auto l1 = clause(true, "a");
    auto l2 = clause(false, "b");
    FuzzyClause s1(l1, v), s2(l2, v);
    double lo = std::min(s1.truth().value(), s2.truth().value());
    double hi = std::max(s1.truth().value(), s2.truth().value());
    if (lo <= 0.5) continue;
    ++lee_checked;
    double r = resolve_clauses(s1, s2, "x").clause.truth().value();
    c.expect(r >= lo - kExact && r <= hi + kExact, "Lee bound violated");
  }

  // (b) + (d) oracle equivalence and label properties after every update.
  std::size_t updates = 0;
  for (std::uint64_t seed = 0; seed < kOracleNetworks && c.ok; ++seed) {
    auto net = oracle::generate_random_network(seed, testing::property_options(seed));
    c.expect(net.assumptions.size() <= 8 && net.justifications.size() <= 25, "network too large");
    Engine e;
    testing::declare(e, net);
    for (std::size_t i = 0; i < net.justifications.size(); ++i) {
      testing::add(e, net.justifications[i]);
      auto expected = oracle::oracle_closure(testing::prefix(net, i + 1));
      std::string p = testing::label_properties(e, expected, e.thresholds());
      c.expect(p.empty(), "seed " + std::to_string(seed) + ": " + p);
      ++updates;
    }
    std::string d = testing::diff(e, oracle::oracle_closure(net), e.thresholds());
    c.expect(d.empty(), "seed " + std::to_string(seed) + ": " + d);
    for (NodeId n : e.nodes())
      for (const auto& x : e.label(n))
        c.expect(std::fabs(x.crc - x.c.value() * x.cr.value()) <= kCrcExact, "crc != c*cr");
  }

  // (c) order independence.
  for (std::uint64_t seed = 0; seed < kShuffledNetworks && c.ok; ++seed) {
    auto net = oracle::generate_random_network(seed, testing::property_options(seed));
    Engine ref;
    testing::load(ref, net);
    std::string want = netfmt::serialize_state(ref);
    std::vector<std::size_t> order(net.justifications.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int s = 0; s < kShuffles; ++s) {
      std::shuffle(order.begin(), order.end(), rng);
      Engine e;
      testing::load(e, net, order);
      c.expect(netfmt::serialize_state(e) == want, "shuffle differs, seed " + std::to_string(seed));
    }
  }

  // (e) retract / re-add round trip.
  for (std::uint64_t seed = 0; seed < kShuffledNetworks && c.ok; ++seed) {
    auto net = oracle::generate_random_network(seed, testing::property_options(seed));
    Engine e;
    testing::load(e, net);
    std::string original = netfmt::serialize_state(e);
    for (const auto& j : net.justifications) {
      e.retract_justification(*e.find_justification(j.name));
      testing::add(e, j);
      c.expect(netfmt::serialize_state(e) == original, "round trip differs at " + j.name);
    }
  }

  double elapsed = seconds_since(t0);
  c.expect(lee_checked > 1000, "too few Lee pairs qualified");
  c.expect(elapsed < kPropertyBudgetSeconds, "over the time budget");
  if (c.ok)
    c.why << lee_checked << " Lee pairs, " << kOracleNetworks << " networks / " << updates
          << " updates, " << kShuffledNetworks << "x" << kShuffles << " shuffles, "
          << elapsed << " s";
  return c;
}

// 6. Corpora, determinism of the json report, parse-error corpus.
Check corpora() {
  Check c;
  const std::filesystem::path dir = FTMS_CORPUS_DIR;
  for (const char* name : {"fig1a.ftms", "fig1b.ftms"}) {
    c.expect(std::filesystem::exists(dir / name), std::string(name) + " missing");
    cli::Options o;
    o.format = cli::Format::json;
    o.quiet = true;
    o.replay = std::string(name) == "fig1b.ftms";
    std::ostringstream out1, out2, err;
    int s1 = cli::run_batch((dir / name).string(), o, out1, err);
    int s2 = cli::run_batch((dir / name).string(), o, out2, err);
    c.expect(s1 == 0 && s2 == 0, std::string(name) + " failed: " + err.str());
    c.expect(out1.str() == out2.str() && !out1.str().empty(), std::string(name) + " not stable");
  }
  int files = 0;
  for (const auto& f : std::filesystem::directory_iterator(dir / "parse_errors")) {
    std::ifstream in(f.path());
    std::string first;
    std::getline(in, first);
    int line = std::stoi(first.substr(first.find(':') + 1));
    std::ostringstream out, err;
    int status = cli::run_batch(f.path().string(), {}, out, err);
    c.expect(status == cli::kExitSyntax, f.path().filename().string() + " exit " + std::to_string(status));
    c.expect(err.str().find(":" + std::to_string(line) + ":") != std::string::npos,
             f.path().filename().string() + " diagnostic: " + err.str());
    ++files;
  }
  c.expect(files > 0, "empty parse-error corpus");
  if (c.ok) c.why << files << " parse-error files";
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Check()> run;
    double budget;
  };
  const Criterion criteria[] = {
      {1, "single-source chaining values", chaining, kFastBudgetSeconds},
      {2, "weighted confidences of the rule network", weighted, kFastBudgetSeconds},
      {3, "replay labels and MEDB", replay, kFastBudgetSeconds},
      {4, "revision by two later justifications", revision, kFastBudgetSeconds},
      {5, "property suite", properties, kPropertyBudgetSeconds},
      {6, "corpora, stable json, parse-error diagnostics", corpora, kFastBudgetSeconds},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.why << "exception: " << e.what();
    }
    double t = seconds_since(t0);
    if (t > cr.budget) {
      c.ok = false;
      c.why << " (took " << t << " s)";
    }
    failed += c.ok ? 0 : 1;
    std::cout << (c.ok ? "PASS" : "FAIL") << "  criterion " << cr.id << ": " << cr.title;
    std::string why = c.why.str();
    if (!why.empty()) std::cout << " -- " << why;
    std::cout << "\n";
  }
  return failed == 0 ? 0 : 1;
}
