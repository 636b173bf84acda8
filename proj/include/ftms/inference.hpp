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

#ifndef FTMS_INFERENCE_HPP_
#define FTMS_INFERENCE_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftms/fuzzy.hpp"
#include "ftms/idset.hpp"

/// Forward-chaining problem solver over weighted propositional Horn rules.
///
/// Derivations are tracked per (atom, support set), where the support set
/// holds the ids of every rule and fact used. A rule fires on every
/// combination of antecedent derivations whose minimum confidence admits
/// its weight. A derivation never uses its own conclusion, so the support
/// set of a consequent strictly contains those of its antecedents and
/// saturation terminates.
namespace ftms::inference {

/// Consequent spelling for contradiction rules.
inline constexpr const char* kFalsity = "FALSE";

class InferenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Rule {
  std::string id;
  std::vector<std::string> antecedents;
  std::string consequent;  // kFalsity for a contradiction rule
  RuleWeight weight;

  bool concludes_falsity() const { return consequent == kFalsity; }
};

struct Fact {
  std::string atom;
  TruthValue truth;
  std::string source;  // the assumption this fact is attached to

  /// "atom@source"; unique per engine.
  std::string id() const { return atom + "@" + source; }
};

struct DerivedAtom {
  std::string atom;
  Confidence c;
  ResolutionConfidence cr;
  std::vector<std::string> support;  // rule and fact ids, insertion order
  std::vector<std::string> sources;  // assumptions of the facts used, sorted

  double crc() const { return ftms::crc(c, cr); }
};

/// One justification triple <x1..xm -> n, c(n), c_r(n)>.
struct EmittedJustification {
  std::string id;  // rule id, or fact id for facts
  std::vector<std::string> antecedents;  // the source assumption for facts
  std::string consequent;
  Confidence c;
  ResolutionConfidence cr;
  std::optional<RuleWeight> weight;  // absent for facts
  std::vector<std::vector<std::string>> antecedent_support;  // per antecedent

  bool is_fact() const { return !weight.has_value(); }
};

class Engine {
 public:
  void add_rule(Rule rule);
  void add_fact(Fact fact);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const std::vector<Fact>& facts() const noexcept { return facts_; }

  /// Runs to fixpoint and returns every derivation, sorted by atom then by
  /// support sequence. Re-running after more rules or facts restarts from
  /// scratch.
  std::vector<DerivedAtom> saturate();

  /// Facts first (insertion order), then fired rule instances ordered by
  /// rule id and antecedent support. Requires saturate().
  std::vector<EmittedJustification> emit_justifications() const;

  bool saturated() const noexcept { return saturated_; }

 private:
  struct SupportTag;
  using Support = IdSet<SupportTag>;

  struct Derivation {
    int atom = 0;
    Support support;
    double c = 0;
    double cr = 0;
    int item = 0;  // index into items_
    std::vector<Support> antecedent_support;
  };

  // A fact or rule, in insertion order; indexes the support bit vector.
  struct Item {
    bool is_fact = false;
    std::size_t index = 0;  // into facts_ or rules_
  };

  int atom_index(const std::string& name);
  bool uses_atom(const Support& support, int atom) const;
  std::vector<std::string> support_names(const Support& support) const;
  std::vector<std::string> support_sources(const Support& support) const;

  std::vector<Rule> rules_;
  std::vector<Fact> facts_;
  std::vector<Item> items_;
  std::vector<std::string> atoms_;
  std::map<std::string, int> atom_ids_;
  std::vector<int> item_conclusion_;  // atom concluded by each item

  bool saturated_ = false;
  std::vector<Derivation> derivations_;  // finalized, in finalization order
};

}  // namespace ftms::inference

#endif  // FTMS_INFERENCE_HPP_
