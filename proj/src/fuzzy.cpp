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

#include "ftms/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ftms {

namespace {

bool in_range(double v, double lo, double hi) {
  return std::isfinite(v) && v >= lo && v <= hi;
}

std::string describe(const char* what, double v) {
  std::ostringstream os;
  os << what << " out of range: " << v;
  return os.str();
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

TruthValue::TruthValue(double value) : value_(value) {
  if (!in_range(value, 0.0, 1.0)) throw FuzzyError(describe("truth value", value));
}

Confidence::Confidence(double value) : value_(value) {
  if (!in_range(value, -1.0, 1.0)) throw FuzzyError(describe("confidence", value));
}

ResolutionConfidence::ResolutionConfidence(double value) : value_(value) {
  if (!in_range(value, 0.0, 1.0))
    throw FuzzyError(describe("confidence of resolution", value));
}

RuleWeight::RuleWeight(double value) : value_(value) {
  if (!in_range(value, -1.0, 1.0)) throw FuzzyError(describe("rule weight", value));
  if (value == 0.0) throw FuzzyError("rule weight must be nonzero");
}

RuleNotApplicable::RuleNotApplicable(RuleWeight weight, Confidence premise)
    : FuzzyError([&] {
        std::ostringstream os;
        os << "rule with weight " << weight.value()
           << " is not applicable to premise confidence " << premise.value();
        return os.str();
      }()),
      weight_(weight),
      premise_(premise) {}

Confidence truth_to_confidence(TruthValue t) {
  return Confidence(clamp_unit((t.value() - 0.5) * 2.0));
}

TruthValue confidence_to_truth(Confidence c) {
  return TruthValue(std::clamp(c.value() / 2.0 + 0.5, 0.0, 1.0));
}

TruthValue fuzzy_not(TruthValue t) { return TruthValue(1.0 - t.value()); }

TruthValue fuzzy_and(TruthValue a, TruthValue b) {
  return TruthValue(std::min(a.value(), b.value()));
}

TruthValue fuzzy_or(TruthValue a, TruthValue b) {
  return TruthValue(std::max(a.value(), b.value()));
}

TruthValue fuzzy_implies(TruthValue a, TruthValue b) {
  return TruthValue(std::max(1.0 - a.value(), b.value()));
}

FuzzyClause::FuzzyClause(std::vector<Literal> literals,
                         std::map<std::string, TruthValue> assignment)
    : literals_(std::move(literals)), assignment_(std::move(assignment)) {
  if (literals_.empty()) throw FuzzyError("clause needs at least one literal");
}

FuzzyClause FuzzyClause::empty(std::map<std::string, TruthValue> assignment) {
  FuzzyClause clause;
  clause.assignment_ = std::move(assignment);
  return clause;
}

TruthValue FuzzyClause::truth_of(const std::string& atom) const {
  auto it = assignment_.find(atom);
  if (it == assignment_.end()) throw FuzzyError("no truth value for atom " + atom);
  return it->second;
}

TruthValue FuzzyClause::truth() const {
  double best = 0.0;
  for (const Literal& lit : literals_) {
    TruthValue t = truth_of(lit.atom);
    best = std::max(best, lit.positive ? t.value() : 1.0 - t.value());
  }
  return TruthValue(best);
}

Resolvent resolve_clauses(const FuzzyClause& s1, const FuzzyClause& s2,
                          const std::string& key) {
  auto polarity_of = [&](const FuzzyClause& s) -> int {
    int mask = 0;
    for (const Literal& lit : s.literals())
      if (lit.atom == key) mask |= lit.positive ? 1 : 2;
    return mask;
  };
  int p1 = polarity_of(s1);
  int p2 = polarity_of(s2);
  bool s1_positive;
  if (p1 == 1 && (p2 & 2)) {
    s1_positive = true;
  } else if (p1 == 2 && (p2 & 1)) {
    s1_positive = false;
  } else {
    throw ResolutionError("key " + key +
                          " must occur with opposite polarity in the two clauses");
  }

  std::map<std::string, TruthValue> merged = s1.assignment();
  for (const auto& [atom, t] : s2.assignment()) {
    auto [it, inserted] = merged.emplace(atom, t);
    if (!inserted && !(it->second == t))
      throw ResolutionError("clauses disagree on the truth value of " + atom);
  }

  std::vector<Literal> literals;
  auto keep = [&](const FuzzyClause& s, bool drop_positive) {
    for (const Literal& lit : s.literals()) {
      if (lit.atom == key && lit.positive == drop_positive) continue;
      if (std::find(literals.begin(), literals.end(), lit) == literals.end())
        literals.push_back(lit);
    }
  };
  keep(s1, s1_positive);
  keep(s2, !s1_positive);

  auto key_truth = merged.find(key);
  if (key_truth == merged.end()) throw ResolutionError("no truth value for key " + key);
  ResolutionConfidence cr(truth_to_confidence(key_truth->second).magnitude());

  if (literals.empty()) return {FuzzyClause::empty(std::move(merged)), cr};
  return {FuzzyClause(std::move(literals), std::move(merged)), cr};
}

RuleWeight weight_of_rule(Confidence premise, Confidence conclusion) {
  double w = premise.value() * conclusion.value();
  if (w == 0.0) throw FuzzyError("weight of rule is zero");
  return RuleWeight(w);
}

bool applicable(RuleWeight w, Confidence premise) {
  return premise.magnitude() > 0.0 && w.magnitude() <= premise.magnitude() + kTolerance;
}

Confidence propagate_confidence(RuleWeight w, std::span<const Confidence> antecedents) {
  if (antecedents.empty()) throw FuzzyError("rule needs at least one antecedent");
  Confidence premise = *std::min_element(
      antecedents.begin(), antecedents.end(),
      [](Confidence a, Confidence b) { return a.value() < b.value(); });
  if (!applicable(w, premise)) throw RuleNotApplicable(w, premise);
  return Confidence(clamp_unit(w.value() / premise.value()));
}

ResolutionConfidence propagate_resolution_confidence(
    std::span<const std::pair<ResolutionConfidence, Confidence>> antecedents) {
  if (antecedents.empty()) throw FuzzyError("no antecedents to chain c_r through");
  double result = 1.0;
  for (const auto& [cr, c] : antecedents)
    result = std::min({result, cr.value(), c.magnitude()});
  return ResolutionConfidence(result);
}

double crc(Confidence c, ResolutionConfidence cr) { return c.value() * cr.value(); }

}  // namespace ftms
