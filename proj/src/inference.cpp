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

#include "ftms/inference.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace ftms::inference {

int Engine::atom_index(const std::string& name) {
  auto [it, inserted] = atom_ids_.emplace(name, static_cast<int>(atoms_.size()));
  if (inserted) atoms_.push_back(name);
  return it->second;
}

void Engine::add_rule(Rule rule) {
  if (rule.id.empty()) throw InferenceError("rule id must not be empty");
  for (const Rule& r : rules_)
    if (r.id == rule.id) throw InferenceError("duplicate rule id " + rule.id);
  if (rule.antecedents.empty())
    throw InferenceError("rule " + rule.id + " has no antecedents");
  std::set<std::string> seen;
  for (const std::string& a : rule.antecedents) {
    if (a == kFalsity)
      throw InferenceError("rule " + rule.id + " uses falsity as an antecedent");
    if (!seen.insert(a).second)
      throw InferenceError("rule " + rule.id + " repeats antecedent " + a);
  }
  if (seen.count(rule.consequent))
    throw InferenceError("rule " + rule.id + " concludes one of its antecedents");

  for (const std::string& a : rule.antecedents) atom_index(a);
  item_conclusion_.push_back(atom_index(rule.consequent));
  items_.push_back({false, rules_.size()});
  rules_.push_back(std::move(rule));
  saturated_ = false;
}

void Engine::add_fact(Fact fact) {
  if (fact.atom == kFalsity) throw InferenceError("falsity cannot be asserted as a fact");
  for (const Fact& f : facts_)
    if (f.atom == fact.atom && f.source == fact.source)
      throw InferenceError("duplicate fact " + fact.id());
  item_conclusion_.push_back(atom_index(fact.atom));
  items_.push_back({true, facts_.size()});
  facts_.push_back(std::move(fact));
  saturated_ = false;
}

bool Engine::uses_atom(const Support& support, int atom) const {
  for (auto id : support.ids())
    if (item_conclusion_[id.value] == atom) return true;
  return false;
}

std::vector<std::string> Engine::support_names(const Support& support) const {
  std::vector<std::string> out;
  for (auto id : support.ids()) {
    const Item& item = items_[id.value];
    out.push_back(item.is_fact ? facts_[item.index].id() : rules_[item.index].id);
  }
  return out;
}

std::vector<std::string> Engine::support_sources(const Support& support) const {
  std::set<std::string> sources;
  for (auto id : support.ids()) {
    const Item& item = items_[id.value];
    if (item.is_fact) sources.insert(facts_[item.index].source);
  }
  return {sources.begin(), sources.end()};
}

namespace {

// Higher crc wins, then higher cr, then higher c; identical values fall back
// to the smaller antecedent support sequence.
template <class D>
bool better(const D& a, const D& b) {
  double ca = a.c * a.cr, cb = b.c * b.cr;
  if (ca != cb) return ca > cb;
  if (a.cr != b.cr) return a.cr > b.cr;
  if (a.c != b.c) return a.c > b.c;
  return a.antecedent_support < b.antecedent_support;
}

}  // namespace

std::vector<DerivedAtom> Engine::saturate() {
  derivations_.clear();

  using Key = std::tuple<std::size_t, int, Support>;  // |support|, atom, support
  std::map<Key, Derivation> pending;
  std::map<std::pair<int, Support>, std::size_t> finalized;  // -> derivations_
  std::vector<std::vector<std::size_t>> by_atom(atoms_.size());

  auto offer = [&](Derivation d) {
    Key key{d.support.size(), d.atom, d.support};
    auto it = pending.find(key);
    if (it == pending.end())
      pending.emplace(std::move(key), std::move(d));
    else if (better(d, it->second))
      it->second = std::move(d);
  };

  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!items_[i].is_fact) continue;
    const Fact& f = facts_[items_[i].index];
    Derivation d;
    d.atom = item_conclusion_[i];
    d.support.insert({static_cast<std::uint32_t>(i)});
    d.c = truth_to_confidence(f.truth).value();
    d.cr = 1.0;
    d.item = static_cast<int>(i);
    offer(std::move(d));
  }

  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    Derivation done = std::move(node.mapped());
    std::size_t done_index = derivations_.size();
    finalized.emplace(std::make_pair(done.atom, done.support), done_index);
    by_atom[done.atom].push_back(done_index);
    derivations_.push_back(std::move(done));
    const Derivation& fresh = derivations_.back();

    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].is_fact) continue;
      const Rule& rule = rules_[items_[i].index];
      std::vector<int> positions;
      for (const std::string& a : rule.antecedents) positions.push_back(atom_ids_.at(a));
      auto fixed = std::find(positions.begin(), positions.end(), fresh.atom);
      if (fixed == positions.end()) continue;
      std::size_t fixed_pos = static_cast<std::size_t>(fixed - positions.begin());
      int consequent = item_conclusion_[i];

      // Odometer over the finalized derivations of the other antecedents.
      std::vector<const std::vector<std::size_t>*> choices;
      for (std::size_t p = 0; p < positions.size(); ++p)
        choices.push_back(p == fixed_pos ? nullptr : &by_atom[positions[p]]);
      bool empty_choice = false;
      for (std::size_t p = 0; p < positions.size(); ++p)
        if (p != fixed_pos && choices[p]->empty()) empty_choice = true;
      if (empty_choice) continue;

      std::vector<std::size_t> cursor(positions.size(), 0);
      while (true) {
        std::vector<const Derivation*> combo;
        for (std::size_t p = 0; p < positions.size(); ++p)
          combo.push_back(p == fixed_pos ? &derivations_[done_index]
                                         : &derivations_[(*choices[p])[cursor[p]]]);

        bool self_reference = false;
        for (const Derivation* d : combo)
          if (d->support.contains({static_cast<std::uint32_t>(i)}) ||
              uses_atom(d->support, consequent))
            self_reference = true;

        if (!self_reference) {
          std::vector<Confidence> cs;
          std::vector<std::pair<ResolutionConfidence, Confidence>> crs;
          for (const Derivation* d : combo) {
            cs.emplace_back(d->c);
            crs.emplace_back(ResolutionConfidence(d->cr), Confidence(d->c));
          }
          Confidence premise = *std::min_element(
              cs.begin(), cs.end(), [](Confidence a, Confidence b) { return a.value() < b.value(); });
          if (applicable(rule.weight, premise)) {
            Derivation d;
            d.atom = consequent;
            d.support.insert({static_cast<std::uint32_t>(i)});
            for (const Derivation* a : combo) {
              d.support |= a->support;
              d.antecedent_support.push_back(a->support);
            }
            d.c = propagate_confidence(rule.weight, cs).value();
            d.cr = propagate_resolution_confidence(crs).value();
            d.item = static_cast<int>(i);
            offer(std::move(d));
          }
        }

        std::size_t p = 0;
        for (; p < positions.size(); ++p) {
          if (p == fixed_pos) continue;
          if (++cursor[p] < choices[p]->size()) break;
          cursor[p] = 0;
        }
        if (p == positions.size()) break;
      }
    }
  }

  saturated_ = true;

  std::vector<DerivedAtom> out;
  std::vector<std::size_t> order(derivations_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Derivation& x = derivations_[a];
    const Derivation& y = derivations_[b];
    if (atoms_[x.atom] != atoms_[y.atom]) return atoms_[x.atom] < atoms_[y.atom];
    return x.support < y.support;
  });
  for (std::size_t i : order) {
    const Derivation& d = derivations_[i];
    out.push_back({atoms_[d.atom], Confidence(d.c), ResolutionConfidence(d.cr),
                   support_names(d.support), support_sources(d.support)});
  }
  return out;
}

std::vector<EmittedJustification> Engine::emit_justifications() const {
  if (!saturated_) throw InferenceError("emit_justifications requires saturate()");
  std::vector<EmittedJustification> out;
  for (const Fact& f : facts_)
    out.push_back({f.id(), {f.source}, f.atom, truth_to_confidence(f.truth),
                   ResolutionConfidence(1.0), std::nullopt, {}});

  std::vector<const Derivation*> fired;
  for (const Derivation& d : derivations_)
    if (!items_[d.item].is_fact) fired.push_back(&d);
  std::sort(fired.begin(), fired.end(), [&](const Derivation* a, const Derivation* b) {
    const std::string& ra = rules_[items_[a->item].index].id;
    const std::string& rb = rules_[items_[b->item].index].id;
    if (ra != rb) return ra < rb;
    return a->antecedent_support < b->antecedent_support;
  });
  for (const Derivation* d : fired) {
    const Rule& rule = rules_[items_[d->item].index];
    EmittedJustification j{rule.id, rule.antecedents, rule.consequent, Confidence(d->c),
                           ResolutionConfidence(d->cr), rule.weight, {}};
    for (const Support& s : d->antecedent_support)
      j.antecedent_support.push_back(support_names(s));
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ftms::inference
