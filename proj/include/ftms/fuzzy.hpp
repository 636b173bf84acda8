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

#ifndef FTMS_FUZZY_HPP_
#define FTMS_FUZZY_HPP_

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/// Value-level fuzzy calculus: Lee's truth-functional connectives and
/// resolution, and Mukaidono's confidence / weight-of-rule arithmetic.
///
/// Truth values live in [0,1]; confidences are the affine image
/// c = 2t - 1 in [-1,1]. A rule R -w-> S carries w = c(R) * c(S), and can
/// be used forward only when |w| <= |c(R)|, in which case c(S) = w / c(R).
namespace ftms {

/// Absolute tolerance used for every real comparison in the library.
inline constexpr double kTolerance = 1e-9;

class FuzzyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Degree of truth [S] in [0,1].
class TruthValue {
 public:
  explicit TruthValue(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(TruthValue, TruthValue) = default;

 private:
  double value_;
};

/// Signed confidence c(S) in [-1,1]; positive leans true.
class Confidence {
 public:
  explicit Confidence(double value);
  double value() const noexcept { return value_; }
  double magnitude() const noexcept { return value_ < 0 ? -value_ : value_; }
  friend bool operator==(Confidence, Confidence) = default;

 private:
  double value_;
};

/// Confidence of resolution c_r in [0,1]: degree of derivability.
class ResolutionConfidence {
 public:
  explicit ResolutionConfidence(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(ResolutionConfidence, ResolutionConfidence) = default;

 private:
  double value_;
};

/// Weight of an implication, 0 < |w| <= 1.
class RuleWeight {
 public:
  explicit RuleWeight(double value);
  double value() const noexcept { return value_; }
  double magnitude() const noexcept { return value_ < 0 ? -value_ : value_; }
  friend bool operator==(RuleWeight, RuleWeight) = default;

 private:
  double value_;
};

/// Raised by propagate_confidence when |w| > |c(premise)| or c(premise) = 0.
class RuleNotApplicable : public FuzzyError {
 public:
  RuleNotApplicable(RuleWeight weight, Confidence premise);
  RuleWeight weight() const noexcept { return weight_; }
  Confidence premise() const noexcept { return premise_; }

 private:
  RuleWeight weight_;
  Confidence premise_;
};

class ResolutionError : public FuzzyError {
 public:
  using FuzzyError::FuzzyError;
};

Confidence truth_to_confidence(TruthValue t);
TruthValue confidence_to_truth(Confidence c);

TruthValue fuzzy_not(TruthValue t);
TruthValue fuzzy_and(TruthValue a, TruthValue b);
TruthValue fuzzy_or(TruthValue a, TruthValue b);
TruthValue fuzzy_implies(TruthValue a, TruthValue b);

struct Literal {
  std::string atom;
  bool positive = true;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A disjunction of literals together with the truth assignment of its atoms.
/// The empty clause (the resolvent of x and not-x) has truth value 0.
class FuzzyClause {
 public:
  FuzzyClause(std::vector<Literal> literals,
              std::map<std::string, TruthValue> assignment);

  static FuzzyClause empty(std::map<std::string, TruthValue> assignment = {});

  const std::vector<Literal>& literals() const noexcept { return literals_; }
  const std::map<std::string, TruthValue>& assignment() const noexcept {
    return assignment_;
  }
  bool is_empty() const noexcept { return literals_.empty(); }

  /// max over literals of [l], where [not a] = 1 - [a].
  TruthValue truth() const;
  TruthValue truth_of(const std::string& atom) const;

 private:
  FuzzyClause() = default;
  std::vector<Literal> literals_;
  std::map<std::string, TruthValue> assignment_;
};

struct Resolvent {
  FuzzyClause clause;
  ResolutionConfidence confidence;
};

/// Resolves s1 and s2 on `key`, which must occur with opposite polarity in
/// the two clauses. The assignments are merged and must agree on shared
/// atoms. c_r of the resolvent is |c(key)|.
Resolvent resolve_clauses(const FuzzyClause& s1, const FuzzyClause& s2,
                          const std::string& key);

RuleWeight weight_of_rule(Confidence premise, Confidence conclusion);

bool applicable(RuleWeight w, Confidence premise);

/// c(S) = w / min_i c(R_i). Throws RuleNotApplicable.
Confidence propagate_confidence(RuleWeight w,
                                std::span<const Confidence> antecedents);

/// min_i min(c_r(x_i), |c(x_i)|). An asserted fact enters with c_r = 1.
ResolutionConfidence propagate_resolution_confidence(
    std::span<const std::pair<ResolutionConfidence, Confidence>> antecedents);

/// Confidence of resolved consequence.
double crc(Confidence c, ResolutionConfidence cr);

}  // namespace ftms

#endif  // FTMS_FUZZY_HPP_
