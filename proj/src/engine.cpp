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

#include "ftms/engine.hpp"

#include <algorithm>
#include <set>

namespace ftms {

namespace {

// Same values and no more assumptions or nodes: `a` can stand in for `b`
// everywhere.
template <class R>
bool dominates(const R& a, const R& b) {
  return a.c == b.c && a.cr == b.cr && a.env.subset_of(b.env) && a.used.subset_of(b.used);
}

template <class R>
bool equivalent(const R& a, const R& b) {
  return a.c == b.c && a.cr == b.cr && a.env == b.env && a.used == b.used;
}

double normalize_zero(double v) { return v == 0.0 ? 0.0 : v; }

// Supports are provenance only; which of two equal-valued derivations is
// kept may depend on arrival order.
bool same_values(const std::vector<LabelEntry>& a, const std::vector<LabelEntry>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const LabelEntry& x, const LabelEntry& y) {
                      return x.env == y.env && x.c == y.c && x.cr == y.cr && x.cs == y.cs;
                    });
}

}  // namespace

Engine::Engine() {
  Node falsity;
  falsity.name = std::string(kFalsityName);
  falsity.kind = NodeKind::falsity;
  nodes_.push_back(std::move(falsity));
  node_names_.emplace(std::string(kFalsityName), NodeId{0});
}

void Engine::check_node(NodeId n) const {
  if (n.value >= nodes_.size())
    throw UnknownNode("unknown node #" + std::to_string(n.value));
}

AssumptionId Engine::create_assumption(const std::string& name) {
  if (name.empty()) throw EngineError("assumption name must not be empty");
  if (node_names_.count(name)) throw EngineError("duplicate node name " + name);
  AssumptionId a{static_cast<std::uint32_t>(assumptions_.size())};
  NodeId n{static_cast<std::uint32_t>(nodes_.size())};

  Node node;
  node.name = name;
  node.kind = NodeKind::assumption;
  node.assumption = a;
  Record self;
  self.env.insert(a);
  self.used.insert(n);
  self.c = 1.0;
  self.cr = 1.0;
  self.serial = next_serial_++;
  node.records.push_back(std::move(self));
  nodes_.push_back(std::move(node));
  assumptions_.push_back(n);
  node_names_.emplace(name, n);
  nodes_[n.value].view = label(n, thresholds_);
  return a;
}

NodeId Engine::intern(const std::string& datum) {
  if (datum.empty()) throw EngineError("node name must not be empty");
  if (auto it = node_names_.find(datum); it != node_names_.end()) return it->second;
  NodeId n{static_cast<std::uint32_t>(nodes_.size())};
  Node node;
  node.name = datum;
  nodes_.push_back(std::move(node));
  node_names_.emplace(datum, n);
  return n;
}

std::optional<NodeId> Engine::find_node(std::string_view name) const {
  if (auto it = node_names_.find(name); it != node_names_.end()) return it->second;
  return std::nullopt;
}

std::optional<AssumptionId> Engine::find_assumption(std::string_view name) const {
  if (auto n = find_node(name)) return nodes_[n->value].assumption;
  return std::nullopt;
}

std::optional<JustificationId> Engine::find_justification(std::string_view name) const {
  if (auto it = justification_names_.find(name); it != justification_names_.end())
    return it->second;
  return std::nullopt;
}

NodeId Engine::node_of(AssumptionId a) const {
  if (a.value >= assumptions_.size())
    throw UnknownNode("unknown assumption #" + std::to_string(a.value));
  return assumptions_[a.value];
}

std::optional<AssumptionId> Engine::assumption_of(NodeId n) const {
  check_node(n);
  return nodes_[n.value].assumption;
}

const std::string& Engine::name(NodeId n) const {
  check_node(n);
  return nodes_[n.value].name;
}

const std::string& Engine::name(AssumptionId a) const { return name(node_of(a)); }

NodeKind Engine::kind(NodeId n) const {
  check_node(n);
  return nodes_[n.value].kind;
}

std::vector<NodeId> Engine::nodes() const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) out.push_back(NodeId{i});
  return out;
}

std::vector<AssumptionId> Engine::assumptions() const {
  std::vector<AssumptionId> out;
  for (std::uint32_t i = 0; i < assumptions_.size(); ++i) out.push_back(AssumptionId{i});
  return out;
}

const Justification& Engine::justification(JustificationId j) const {
  if (j.value >= justifications_.size())
    throw UnknownJustification("unknown justification #" + std::to_string(j.value));
  return justifications_[j.value];
}

std::vector<JustificationId> Engine::justifications() const {
  std::vector<JustificationId> out;
  for (const Justification& j : justifications_)
    if (j.active) out.push_back(j.id);
  return out;
}

UpdateReport Engine::justify(std::string name, std::vector<NodeId> antecedents,
                             NodeId consequent, RuleWeight w) {
  return add_justification(std::move(name), std::move(antecedents), consequent, Weighted{w});
}

UpdateReport Engine::justify_given(std::string name, std::vector<NodeId> antecedents,
                                   NodeId consequent, Confidence c,
                                   ResolutionConfidence cr) {
  return add_justification(std::move(name), std::move(antecedents), consequent,
                           Asserted{c, cr});
}

UpdateReport Engine::add_justification(std::string name, std::vector<NodeId> antecedents,
                                       NodeId consequent, JustificationMode mode) {
  check_node(consequent);
  for (NodeId a : antecedents) check_node(a);
  if (antecedents.empty()) throw EngineError("justification needs antecedents");
  if (nodes_[consequent.value].kind == NodeKind::assumption)
    throw EngineError("assumption " + nodes_[consequent.value].name +
                      " cannot be the consequent of a justification");
  std::set<NodeId> seen;
  for (NodeId a : antecedents) {
    if (a == falsity()) throw EngineError("falsity cannot be an antecedent");
    if (a == consequent)
      throw EngineError("justification for " + nodes_[consequent.value].name +
                        " supports itself");
    if (!seen.insert(a).second)
      throw EngineError("repeated antecedent " + nodes_[a.value].name);
  }

  JustificationId id{static_cast<std::uint32_t>(justifications_.size())};
  if (name.empty()) name = "j" + std::to_string(id.value);
  if (auto existing = find_justification(name)) {
    Justification& old = justifications_[existing->value];
    if (old.active) throw EngineError("duplicate justification name " + name);
    // Re-adding a retracted justification keeps its id.
    id = old.id;
    for (NodeId a : old.antecedents) std::erase(nodes_[a.value].consumers, id);
    old.antecedents = std::move(antecedents);
    old.consequent = consequent;
    old.mode = mode;
    old.active = true;
  } else {
    justifications_.push_back({id, name, std::move(antecedents), consequent, mode, true});
    justification_names_.emplace(name, id);
  }
  for (NodeId a : justifications_[id.value].antecedents) nodes_[a.value].consumers.push_back(id);

  fire(id, std::nullopt);
  propagate();
  UpdateReport report = finish(false);
  report.justification = id;
  return report;
}

UpdateReport Engine::retract_justification(JustificationId j) {
  if (!justification(j).active)
    throw UnknownJustification("justification " + justifications_[j.value].name +
                               " is already retracted");
  justifications_[j.value].active = false;
  return withdraw(j, std::nullopt);
}

UpdateReport Engine::revise_justification(JustificationId j, JustificationMode mode) {
  if (!justification(j).active)
    throw UnknownJustification("justification " + justifications_[j.value].name +
                               " is retracted");
  return withdraw(j, mode);
}

UpdateReport Engine::revise_confidence(NodeId node, Confidence c) {
  check_node(node);
  std::vector<JustificationId> targets;
  for (const Justification& j : justifications_)
    if (j.active && j.consequent == node && std::holds_alternative<Asserted>(j.mode))
      targets.push_back(j.id);
  if (targets.empty())
    throw EngineError("node " + nodes_[node.value].name +
                      " has no asserted justification to revise");
  UpdateReport merged;
  std::set<NodeId> changed;
  for (JustificationId j : targets) {
    Asserted a = std::get<Asserted>(justifications_[j.value].mode);
    a.c = c;
    UpdateReport r = withdraw(j, a);
    changed.insert(r.changed.begin(), r.changed.end());
    merged.medb_changed |= r.medb_changed;
  }
  merged.changed.assign(changed.begin(), changed.end());
  return merged;
}

UpdateReport Engine::withdraw(JustificationId j, std::optional<JustificationMode> revised) {
  NodeSet affected;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    auto& records = nodes_[i].records;
    auto removed = std::erase_if(records, [&](const Record& r) { return r.supports.contains(j); });
    if (removed > 0) affected.insert(NodeId{i});
  }
  touched_ |= affected;
  if (revised) justifications_[j.value].mode = *revised;

  // Records that were shadowed by the removed ones come back by re-firing
  // everything that concludes at an affected node.
  for (const Justification& k : justifications_) {
    if (!k.active) continue;
    if (affected.contains(k.consequent) || (revised && k.id == j)) fire(k.id, std::nullopt);
  }
  propagate();
  UpdateReport report = finish(false);
  report.justification = j;
  return report;
}

bool Engine::insert(NodeId n, Record candidate) {
  auto& records = nodes_[n.value].records;
  for (const Record& r : records) {
    if (!dominates(r, candidate)) continue;
    if (equivalent(r, candidate) && candidate.supports < r.supports) continue;
    return false;
  }
  std::erase_if(records, [&](const Record& r) { return dominates(candidate, r); });
  candidate.serial = next_serial_++;
  queue_.push_back({n, candidate.serial});
  records.push_back(std::move(candidate));
  touched_.insert(n);
  return true;
}

void Engine::fire(JustificationId jid, std::optional<Pending> fixed) {
  const Justification& j = justifications_[jid.value];
  const std::size_t arity = j.antecedents.size();

  std::vector<const std::vector<Record>*> choices(arity);
  std::size_t fixed_pos = arity;
  const Record* fixed_record = nullptr;
  for (std::size_t p = 0; p < arity; ++p) {
    const auto& records = nodes_[j.antecedents[p].value].records;
    if (records.empty()) return;
    choices[p] = &records;
    if (fixed && j.antecedents[p] == fixed->node) {
      fixed_pos = p;
      for (const Record& r : records)
        if (r.serial == fixed->serial) fixed_record = &r;
      if (fixed_record == nullptr) return;
    }
  }
  if (fixed && fixed_record == nullptr) return;

  // Candidates are collected first: inserting may reorder the consequent's
  // records but never an antecedent's.
  std::vector<Record> candidates;
  std::vector<std::size_t> cursor(arity, 0);
  std::vector<Confidence> cs;
  std::vector<std::pair<ResolutionConfidence, Confidence>> crs;
  while (true) {
    Record cand;
    bool self_reference = false;
    cs.clear();
    crs.clear();
    for (std::size_t p = 0; p < arity; ++p) {
      const Record& r = p == fixed_pos ? *fixed_record : (*choices[p])[cursor[p]];
      if (r.used.contains(j.consequent)) self_reference = true;
      cand.env |= r.env;
      cand.used |= r.used;
      cand.supports |= r.supports;
      cs.emplace_back(r.c);
      crs.emplace_back(ResolutionConfidence(r.cr), Confidence(r.c));
    }

    if (!self_reference) {
      bool fires = true;
      if (const auto* w = std::get_if<Weighted>(&j.mode)) {
        Confidence premise = *std::min_element(
            cs.begin(), cs.end(), [](Confidence a, Confidence b) { return a.value() < b.value(); });
        if (applicable(w->weight, premise)) {
          cand.c = propagate_confidence(w->weight, cs).value();
          cand.cr = propagate_resolution_confidence(crs).value();
        } else {
          fires = false;
        }
      } else {
        const auto& a = std::get<Asserted>(j.mode);
        cand.c = a.c.value();
        cand.cr = a.cr.value();
      }
      if (fires) {
        cand.used.insert(j.consequent);
        cand.supports.insert(jid);
        candidates.push_back(std::move(cand));
      }
    }

    std::size_t p = 0;
    for (; p < arity; ++p) {
      if (p == fixed_pos) continue;
      if (++cursor[p] < choices[p]->size()) break;
      cursor[p] = 0;
    }
    if (p == arity) break;
  }

  for (Record& cand : candidates) insert(j.consequent, std::move(cand));
}

void Engine::propagate() {
  while (!queue_.empty()) {
    Pending p = queue_.front();
    queue_.pop_front();
    const auto& records = nodes_[p.node.value].records;
    bool alive = std::any_of(records.begin(), records.end(),
                             [&](const Record& r) { return r.serial == p.serial; });
    if (!alive) continue;
    // Copy: firing may append consumers' records but never this list.
    std::vector<JustificationId> consumers = nodes_[p.node.value].consumers;
    for (JustificationId k : consumers)
      if (justifications_[k.value].active) fire(k, p);
  }
}

std::vector<NogoodRecord> Engine::compute_medb() const {
  // Best c_r(falsity) per exact environment.
  std::map<Environment, double> best;
  for (const Record& r : nodes_[falsity().value].records) {
    auto [it, inserted] = best.emplace(r.env, r.cr);
    if (!inserted) it->second = std::max(it->second, r.cr);
  }
  std::vector<NogoodRecord> out;
  for (const auto& [env, cr] : best) {
    bool subsumed = false;
    for (const auto& [other, other_cr] : best)
      if (other != env && other.subset_of(env) && other_cr >= cr - kTolerance) subsumed = true;
    if (!subsumed) out.push_back({env, normalize_zero(-cr)});
  }
  return out;
}

UpdateReport Engine::finish(bool all_views) {
  UpdateReport report;
  if (touched_.contains(falsity())) {
    auto fresh = compute_medb();
    if (fresh != medb_) {
      medb_ = std::move(fresh);
      report.medb_changed = true;
      all_views = true;
    }
  }
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    NodeId n{i};
    if (!all_views && !touched_.contains(n)) continue;
    auto fresh = label(n, thresholds_);
    if (!same_values(fresh, nodes_[i].view)) report.changed.push_back(n);
    nodes_[i].view = std::move(fresh);
  }
  touched_ = NodeSet{};
  return report;
}

void Engine::set_thresholds(Thresholds t) {
  if (!(t.alpha >= -1.0 && t.alpha <= 1.0)) throw EngineError("alpha must lie in [-1,1]");
  if (!(t.beta >= 0.0 && t.beta <= 1.0)) throw EngineError("beta must lie in [0,1]");
  thresholds_ = t;
  finish(true);
}

const std::vector<LabelEntry>& Engine::label(NodeId n) const {
  check_node(n);
  return nodes_[n.value].view;
}

std::vector<LabelEntry> Engine::label(NodeId n, Thresholds t) const {
  check_node(n);
  const auto& records = nodes_[n.value].records;

  // Best record per exact environment among those passing beta.
  std::map<Environment, const Record*> best;
  for (const Record& r : records) {
    if (r.cr < t.beta - kTolerance) continue;
    auto [it, inserted] = best.emplace(r.env, &r);
    if (inserted) continue;
    const Record& cur = *it->second;
    double a = r.c * r.cr, b = cur.c * cur.cr;
    bool better = a != b         ? a > b
                  : r.cr != cur.cr ? r.cr > cur.cr
                  : r.c != cur.c   ? r.c > cur.c
                                   : r.supports < cur.supports;
    if (better) it->second = &r;
  }

  std::vector<LabelEntry> out;
  for (const auto& [env, rec] : best) {
    double value = rec->c * rec->cr;
    bool dominated = false;
    for (const auto& [other, other_rec] : best)
      if (other != env && other.subset_of(env) &&
          other_rec->c * other_rec->cr >= value - kTolerance)
        dominated = true;
    if (dominated) continue;
    double cs = consistency(env);
    if (cs < t.alpha - kTolerance) continue;
    out.push_back({env, Confidence(rec->c), ResolutionConfidence(rec->cr),
                   normalize_zero(value), cs, rec->supports});
  }
  return out;
}

std::optional<LabelEntry> Engine::summary(NodeId n) const {
  const auto& entries = label(n);
  if (entries.empty()) return std::nullopt;
  const LabelEntry* best = &entries.front();
  // Entries are sorted by environment, so the first maximum is the smallest.
  for (const LabelEntry& e : entries)
    if (e.crc > best->crc) best = &e;
  return *best;
}

double Engine::consistency(const Environment& env) const {
  double cs = 1.0;
  for (const NogoodRecord& nogood : medb_)
    if (nogood.env.subset_of(env)) cs = std::min(cs, nogood.cs);
  return cs;
}

std::vector<NodeId> Engine::context(const Environment& env) const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    bool in = node.assumption ? env.contains(*node.assumption)
                              : std::any_of(node.view.begin(), node.view.end(),
                                            [&](const LabelEntry& e) { return e.env.subset_of(env); });
    if (in) out.push_back(NodeId{i});
  }
  return out;
}

std::size_t Engine::record_count() const {
  std::size_t n = 0;
  for (const Node& node : nodes_) n += node.records.size();
  return n;
}

}  // namespace ftms
