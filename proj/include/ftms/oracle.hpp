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

#ifndef FTMS_ORACLE_HPP_
#define FTMS_ORACLE_HPP_

// Brute-force reference semantics used by the test suites. Nothing here is
// shared with the incremental engine except the fuzzy value functions.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftms/fuzzy.hpp"

namespace ftms::oracle {

inline constexpr const char* kFalsity = "FALSE";

struct NetJustification {
  std::string name;
  std::vector<std::string> antecedents;
  std::string consequent;
  std::optional<RuleWeight> weight;  // weighted when set, asserted otherwise
  double c = 0;
  double cr = 0;
  std::optional<TruthValue> truth;  // set for facts (one assumption antecedent)
};

struct Network {
  std::vector<std::string> assumptions;
  std::vector<NetJustification> justifications;

  std::vector<std::string> atoms() const;  // first-appearance order
};

struct Entry {
  std::vector<std::string> env;  // assumption order
  double c = 0;
  double cr = 0;
  double crc = 0;
  double cs = 1;
};

struct Nogood {
  std::vector<std::string> env;
  double cs = 0;
};

struct State {
  std::map<std::string, std::vector<Entry>> labels;  // every node, incl. FALSE
  std::vector<Nogood> medb;
  std::map<std::vector<std::string>, double> consistency;  // every environment
};

class OracleLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxAssumptions = 16;

/// Enumerates every derivation (no node used below itself), then reads
/// labels, consistencies and the MEDB off the definitions by visiting all
/// 2^A environments.
State oracle_closure(const Network& net, double alpha = -1.0, double beta = 0.0);

struct GeneratorOptions {
  int assumptions = 4;
  int atoms = 5;
  int facts = 6;
  int rules = 10;
  int max_antecedents = 2;
  double contradiction_fraction = 0.15;
  double cycle_fraction = 0.0;
  double asserted_fraction = 0.25;
};

/// Reproducible network: facts attach atoms to assumptions, rules connect
/// atoms. Values are drawn on a 0.05 grid so ties occur. With
/// cycle_fraction = 0 every rule concludes an atom of higher index than all
/// of its antecedents.
Network generate_random_network(std::uint64_t seed, const GeneratorOptions& options);

/// Naive reference for the forward-chaining solver: Jacobi iteration of
/// "best derivation per (atom, support set)" until nothing changes.
struct SaturatedAtom {
  std::string atom;
  std::set<std::string> support;
  double c = 0;
  double cr = 0;
};

struct OracleRule {
  std::string id;
  std::vector<std::string> antecedents;
  std::string consequent;
  RuleWeight weight;
};

struct OracleFact {
  std::string atom;
  TruthValue truth;
  std::string source;
};

std::vector<SaturatedAtom> oracle_saturate(const std::vector<OracleRule>& rules,
                                           const std::vector<OracleFact>& facts);

}  // namespace ftms::oracle

#endif  // FTMS_ORACLE_HPP_
