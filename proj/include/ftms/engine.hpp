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

#ifndef FTMS_ENGINE_HPP_
#define FTMS_ENGINE_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ftms/fuzzy.hpp"
#include "ftms/idset.hpp"

namespace ftms {

/// Datum of the distinguished falsity node.
inline constexpr std::string_view kFalsityName = "FALSE";

enum class NodeKind { assumption, derived, falsity };

/// c(n) = w / min c(x_i), c_r(n) = min(c_r(x_i), |c(x_i)|).
struct Weighted {
  RuleWeight weight;
  friend bool operator==(const Weighted&, const Weighted&) = default;
};

/// (c, c_r) computed by the problem solver and trusted verbatim.
struct Asserted {
  Confidence c;
  ResolutionConfidence cr;
  friend bool operator==(const Asserted&, const Asserted&) = default;
};

using JustificationMode = std::variant<Weighted, Asserted>;

struct Justification {
  JustificationId id;
  std::string name;
  std::vector<NodeId> antecedents;
  NodeId consequent;
  JustificationMode mode;
  bool active = true;
};

/// alpha bounds environment consistency, beta bounds derivability.
struct Thresholds {
  double alpha = -1.0;
  double beta = 0.0;
};

struct LabelEntry {
  Environment env;
  Confidence c;
  ResolutionConfidence cr;
  double crc = 0;
  double cs = 1;
  JustificationSet supports;

  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

struct NogoodRecord {
  Environment env;
  double cs = 0;
  friend bool operator==(const NogoodRecord&, const NogoodRecord&) = default;
};

struct UpdateReport {
  std::optional<JustificationId> justification;
  std::vector<NodeId> changed;  // reported label differs; ascending
  bool medb_changed = false;

  bool empty() const { return changed.empty() && !medb_changed; }
};

class EngineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownNode : public EngineError {
 public:
  using EngineError::EngineError;
};

class UnknownJustification : public EngineError {
 public:
  using EngineError::EngineError;
};

/// Incremental fuzzy ATMS.
///
/// Every node carries a set of derivation records (environment, nodes used,
/// c, c_r, supporting justifications). A record is dropped only when another
/// record of the same node has the same (c, c_r) and uses a subset of its
/// assumptions and of its nodes, so no query or downstream firing can tell
/// them apart. Labels, the nogood database and consistencies are views
/// over these records:
///
///   * a label holds, per environment E, the best-crc record whose
///     assumptions are exactly E and whose c_r >= beta, provided no proper
///     subset of E reaches the same crc; entries with cs(E) < alpha are
///     hidden but kept;
///   * the MEDB holds falsity environments whose c_r(falsity) is not
///     reached by any proper subset, with cs = -c_r(falsity);
///   * cs(E) is the minimum cs over MEDB records contained in E, else 1.
///
/// A derivation never uses its own conclusion, which bounds cycles.
/// Mutations are single-writer; const queries may run concurrently between
/// mutations.
class Engine {
 public:
  Engine();

  NodeId falsity() const noexcept { return NodeId{0}; }

  AssumptionId create_assumption(const std::string& name);

  /// Finds or creates the derived node for `datum`. "FALSE" is the falsity
  /// node.
  NodeId intern(const std::string& datum);

  std::optional<NodeId> find_node(std::string_view name) const;
  std::optional<AssumptionId> find_assumption(std::string_view name) const;
  std::optional<JustificationId> find_justification(std::string_view name) const;

  NodeId node_of(AssumptionId a) const;
  std::optional<AssumptionId> assumption_of(NodeId n) const;
  const std::string& name(NodeId n) const;
  const std::string& name(AssumptionId a) const;
  NodeKind kind(NodeId n) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t assumption_count() const noexcept { return assumptions_.size(); }
  std::vector<NodeId> nodes() const;
  std::vector<AssumptionId> assumptions() const;

  const Justification& justification(JustificationId j) const;
  /// Active justifications, ascending id.
  std::vector<JustificationId> justifications() const;

  UpdateReport justify(std::string name, std::vector<NodeId> antecedents,
                       NodeId consequent, RuleWeight w);
  UpdateReport justify_given(std::string name, std::vector<NodeId> antecedents,
                             NodeId consequent, Confidence c,
                             ResolutionConfidence cr);
  UpdateReport retract_justification(JustificationId j);

  /// Replaces the weight or asserted values of an active justification and
  /// re-evaluates everything downstream of it.
  UpdateReport revise_justification(JustificationId j, JustificationMode mode);

  /// Re-asserts c(node) on every active asserted justification concluding
  /// at `node`.
  UpdateReport revise_confidence(NodeId node, Confidence c);

  void set_thresholds(Thresholds t);
  Thresholds thresholds() const noexcept { return thresholds_; }

  /// Label under the current thresholds, ordered by environment.
  const std::vector<LabelEntry>& label(NodeId n) const;
  std::vector<LabelEntry> label(NodeId n, Thresholds t) const;

  /// Best-crc entry of the current label; ties go to the smaller
  /// environment, then the higher cs.
  std::optional<LabelEntry> summary(NodeId n) const;

  double consistency(const Environment& env) const;
  std::vector<NodeId> context(const Environment& env) const;
  const std::vector<NogoodRecord>& medb() const noexcept { return medb_; }

  /// Number of internal derivation records; diagnostics only.
  std::size_t record_count() const;

 private:
  struct Record {
    Environment env;
    NodeSet used;
    double c = 0;
    double cr = 0;
    JustificationSet supports;
    std::uint64_t serial = 0;
  };

  struct Node {
    std::string name;
    NodeKind kind = NodeKind::derived;
    std::optional<AssumptionId> assumption;
    std::vector<Record> records;
    std::vector<JustificationId> consumers;  // active and retracted
    std::vector<LabelEntry> view;
  };

  struct Pending {
    NodeId node;
    std::uint64_t serial;
  };

  void check_node(NodeId n) const;
  UpdateReport add_justification(std::string name, std::vector<NodeId> antecedents,
                                 NodeId consequent, JustificationMode mode);
  UpdateReport withdraw(JustificationId j, std::optional<JustificationMode> revised);

  bool insert(NodeId n, Record candidate);
  void fire(JustificationId j, std::optional<Pending> fixed);
  void propagate();
  UpdateReport finish(bool all_views);
  std::vector<NogoodRecord> compute_medb() const;

  std::vector<Node> nodes_;
  std::vector<NodeId> assumptions_;  // AssumptionId -> node
  std::map<std::string, NodeId, std::less<>> node_names_;
  std::vector<Justification> justifications_;
  std::map<std::string, JustificationId, std::less<>> justification_names_;
  Thresholds thresholds_;
  std::vector<NogoodRecord> medb_;

  std::uint64_t next_serial_ = 1;
  std::deque<Pending> queue_;
  NodeSet touched_;
};

}  // namespace ftms

#endif  // FTMS_ENGINE_HPP_
