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

#ifndef FTMS_TESTS_SUPPORT_HPP_
#define FTMS_TESTS_SUPPORT_HPP_

// Shared between the doctest suites and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ftms/engine.hpp"
#include "ftms/oracle.hpp"

namespace ftms::testing {

inline constexpr double kValueTolerance = 1e-9;

inline std::vector<NodeId> resolve(Engine& engine, const std::vector<std::string>& names) {
  std::vector<NodeId> out;
  for (const auto& n : names) out.push_back(engine.intern(n));
  return out;
}

inline UpdateReport add(Engine& engine, const oracle::NetJustification& j) {
  if (j.weight)
    return engine.justify(j.name, resolve(engine, j.antecedents), engine.intern(j.consequent),
                          *j.weight);
  return engine.justify_given(j.name, resolve(engine, j.antecedents),
                              engine.intern(j.consequent), Confidence(j.c),
                              ResolutionConfidence(j.cr));
}

/// Creates the assumptions and interns every atom in network order, so node
/// ids do not depend on the order justifications arrive in.
inline void declare(Engine& engine, const oracle::Network& net) {
  for (const auto& a : net.assumptions) engine.create_assumption(a);
  for (const auto& atom : net.atoms()) engine.intern(atom);
}

/// Loads a network; `order` permutes the justifications when non-empty.
inline void load(Engine& engine, const oracle::Network& net, std::vector<std::size_t> order = {}) {
  declare(engine, net);
  if (order.empty()) {
    order.resize(net.justifications.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  for (std::size_t i : order) add(engine, net.justifications[i]);
}

inline oracle::Network prefix(const oracle::Network& net, std::size_t n) {
  oracle::Network out;
  out.assumptions = net.assumptions;
  out.justifications.assign(net.justifications.begin(),
                            net.justifications.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

inline std::vector<std::string> env_names(const Engine& engine, const Environment& env) {
  std::vector<std::string> out;
  for (AssumptionId a : env.ids()) out.push_back(engine.name(a));
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out + ")";
}

inline bool close(double a, double b) { return std::fabs(a - b) <= kValueTolerance; }

/// Describes the first difference between the engine's reported state and
/// the oracle's; empty when they agree.
inline std::string diff(const Engine& engine, const oracle::State& expected, Thresholds t) {
  std::ostringstream os;
  for (NodeId n : engine.nodes()) {
    const std::string& name = engine.name(n);
    auto it = expected.labels.find(name);
    std::vector<oracle::Entry> want;
    if (it != expected.labels.end()) want = it->second;
    std::vector<LabelEntry> got = engine.label(n, t);
    if (got.size() != want.size()) {
      os << "label " << name << ": engine has " << got.size() << " entries, oracle " << want.size()
         << " [";
      for (const auto& e : got) os << join(env_names(engine, e.env)) << " ";
      os << "| ";
      for (const auto& e : want) os << join(e.env) << " ";
      os << "]";
      return os.str();
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& g = got[i];
      const auto& w = want[i];
      if (env_names(engine, g.env) != w.env || !close(g.c.value(), w.c) ||
          !close(g.cr.value(), w.cr) || !close(g.crc, w.crc) || !close(g.cs, w.cs)) {
        os << "label " << name << " entry " << i << ": engine " << join(env_names(engine, g.env))
           << " c=" << g.c.value() << " cr=" << g.cr.value() << " cs=" << g.cs << ", oracle "
           << join(w.env) << " c=" << w.c << " cr=" << w.cr << " cs=" << w.cs;
        return os.str();
      }
    }
  }
  const auto& medb = engine.medb();
  if (medb.size() != expected.medb.size()) {
    os << "MEDB size " << medb.size() << " vs oracle " << expected.medb.size();
    return os.str();
  }
  for (std::size_t i = 0; i < medb.size(); ++i) {
    if (env_names(engine, medb[i].env) != expected.medb[i].env ||
        !close(medb[i].cs, expected.medb[i].cs)) {
      os << "MEDB record " << i << ": " << join(env_names(engine, medb[i].env)) << " "
         << medb[i].cs << " vs " << join(expected.medb[i].env) << " " << expected.medb[i].cs;
      return os.str();
    }
  }
  for (const auto& [names, cs] : expected.consistency) {
    Environment env;
    for (const auto& a : names) env.insert(*engine.find_assumption(a));
    if (!close(engine.consistency(env), cs)) {
      os << "consistency " << join(names) << ": " << engine.consistency(env) << " vs " << cs;
      return os.str();
    }
  }
  return {};
}

/// The four label properties, checked on the engine's own output:
/// alpha-consistency, beta-soundness, alpha-beta-completeness against the
/// oracle's frontier, and minimality.
inline std::string label_properties(const Engine& engine, const oracle::State& expected,
                                    Thresholds t) {
  std::ostringstream os;
  for (NodeId n : engine.nodes()) {
    const std::string& name = engine.name(n);
    std::vector<LabelEntry> got = engine.label(n, t);
    for (const auto& e : got) {
      if (engine.consistency(e.env) < t.alpha - kValueTolerance || !close(engine.consistency(e.env), e.cs))
        os << name << " " << join(env_names(engine, e.env)) << " violates alpha-consistency; ";
      if (e.cr.value() < t.beta - kValueTolerance)
        os << name << " " << join(env_names(engine, e.env)) << " violates beta-soundness; ";
      if (std::fabs(e.crc - e.c.value() * e.cr.value()) > 1e-12)
        os << name << " crc mismatch; ";
    }
    for (const auto& a : got)
      for (const auto& b : got)
        if (&a != &b && a.env.subset_of(b.env) && !(a.env == b.env) &&
            b.crc <= a.crc + kValueTolerance)
          os << name << " " << join(env_names(engine, b.env)) << " is not minimal; ";
    auto it = expected.labels.find(name);
    if (it == expected.labels.end()) continue;
    for (const auto& w : it->second) {
      bool covered = false;
      for (const auto& e : got) {
        auto names = env_names(engine, e.env);
        covered = covered || std::includes(w.env.begin(), w.env.end(), names.begin(), names.end(),
                                           [&](const std::string& x, const std::string& y) {
                                             return *engine.find_assumption(x) <
                                                    *engine.find_assumption(y);
                                           });
      }
      if (!covered) os << name << " " << join(w.env) << " not covered (completeness); ";
    }
  }
  return os.str();
}

/// The four-assumption example network with pre-annotated confidences.
/// \p extra picks how many of the two later justifications are included.
inline oracle::Network replay_network(int extra = 0) {
  oracle::Network net;
  net.assumptions = {"pi", "rho", "sigma", "tau"};
  auto j = [&](std::string name, std::vector<std::string> ants, std::string cons, double c,
               double cr) {
    oracle::NetJustification x;
    x.name = std::move(name);
    x.antecedents = std::move(ants);
    x.consequent = std::move(cons);
    x.c = c;
    x.cr = cr;
    net.justifications.push_back(std::move(x));
  };
  j("J1", {"pi"}, "A", 0.6, 1);
  j("J2", {"rho"}, "B", 0.4, 1);
  j("J3", {"sigma"}, "C", 0.4, 1);
  j("J4", {"tau"}, "D", 0.4, 1);
  j("J5", {"A", "B"}, "E", 0.5, 0.5);
  j("J6", {"A", "C"}, "F", 0.75, 0.75);
  j("J7", {"E", "F"}, "H", 0.8, 0.8);
  j("J8", {"C", "D"}, "F", 1, 1);
  j("J9", {"B", "F"}, "E", 0.75, 0.75);
  j("J10", {"C", "B"}, "FALSE", 0.5, 0.5);
  j("J11", {"F", "D"}, "G", 0.75, 0.75);
  j("J12", {"A", "H"}, "G", 0.76, 0.53);
  if (extra >= 1) j("J13", {"F", "G"}, "E", 0.8, 0.75);
  if (extra >= 2) j("J14", {"D", "E"}, "FALSE", 0.4, 0.4);
  return net;
}

/// Same structure, but the rule weights are given and the engine computes
/// every confidence itself. \p extra adds the two later rules.
inline oracle::Network weighted_network(int extra = 0) {
  oracle::Network net;
  net.assumptions = {"pi", "rho", "sigma", "tau"};
  auto fact = [&](std::string name, std::string source, std::string atom, double tv) {
    oracle::NetJustification x;
    x.name = std::move(name);
    x.antecedents = {std::move(source)};
    x.consequent = std::move(atom);
    x.truth = TruthValue(tv);
    x.c = truth_to_confidence(*x.truth).value();
    x.cr = 1.0;
    net.justifications.push_back(std::move(x));
  };
  auto rule = [&](std::string name, std::vector<std::string> ants, std::string cons, double w) {
    oracle::NetJustification x;
    x.name = std::move(name);
    x.antecedents = std::move(ants);
    x.consequent = std::move(cons);
    x.weight = RuleWeight(w);
    net.justifications.push_back(std::move(x));
  };
  fact("A@pi", "pi", "A", 0.8);
  fact("B@rho", "rho", "B", 0.7);
  fact("C@sigma", "sigma", "C", 0.7);
  fact("D@tau", "tau", "D", 0.7);
  rule("r5", {"A", "B"}, "E", 0.2);
  rule("r6", {"A", "C"}, "F", 0.3);
  rule("r7", {"E", "F"}, "H", 0.4);
  rule("r8", {"C", "D"}, "F", 0.4);
  rule("r9", {"B", "F"}, "E", 0.3);
  rule("r10", {"C", "B"}, "FALSE", 0.2);
  rule("r11", {"F", "D"}, "G", 0.2);
  rule("r12", {"A", "H"}, "G", 0.4);
  if (extra >= 1) rule("r13", {"F", "G"}, "E", 0.4);
  if (extra >= 2) rule("r14", {"D", "E"}, "FALSE", 0.5);
  return net;
}

/// Sizes for the seeded property runs: up to 8 assumptions and 25
/// justifications; even seeds are acyclic, every third seed has no
/// contradiction rules.
inline oracle::GeneratorOptions property_options(std::uint64_t seed) {
  oracle::GeneratorOptions o;
  o.assumptions = 3 + static_cast<int>(seed % 6);
  o.atoms = 4 + static_cast<int>(seed % 4);
  o.facts = 4 + static_cast<int>(seed % 5);
  o.rules = 25 - o.facts - static_cast<int>(seed % 7);
  o.max_antecedents = 1 + static_cast<int>(seed % 3);
  o.contradiction_fraction = seed % 3 == 0 ? 0.0 : 0.2;
  o.cycle_fraction = seed % 2 == 0 ? 0.0 : 0.3;
  o.asserted_fraction = 0.25;
  return o;
}

}  // namespace ftms::testing

#endif  // FTMS_TESTS_SUPPORT_HPP_
