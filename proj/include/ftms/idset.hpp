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

#ifndef FTMS_IDSET_HPP_
#define FTMS_IDSET_HPP_

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace ftms {

/// Dense, never-reused identifier. The tag keeps node, assumption and
/// justification ids apart.
template <class Tag>
struct Id {
  std::uint32_t value = 0;
  friend auto operator<=>(Id, Id) = default;
};

struct NodeTag;
struct AssumptionTag;
struct JustificationTag;
using NodeId = Id<NodeTag>;
using AssumptionId = Id<AssumptionTag>;
using JustificationId = Id<JustificationTag>;

/// Growable bit vector over a dense id universe. Trailing zero words are
/// trimmed so that equal sets compare equal word-for-word.
template <class Tag>
class IdSet {
 public:
  using value_type = Id<Tag>;

  IdSet() = default;
  IdSet(std::initializer_list<value_type> ids) {
    for (value_type id : ids) insert(id);
  }

  static IdSet singleton(value_type id) {
    IdSet s;
    s.insert(id);
    return s;
  }

  void insert(value_type id) {
    std::size_t w = id.value / 64;
    if (words_.size() <= w) words_.resize(w + 1, 0);
    words_[w] |= bit(id.value);
  }

  void erase(value_type id) {
    std::size_t w = id.value / 64;
    if (w >= words_.size()) return;
    words_[w] &= ~bit(id.value);
    trim();
  }

  bool contains(value_type id) const {
    std::size_t w = id.value / 64;
    return w < words_.size() && (words_[w] & bit(id.value)) != 0;
  }

  bool empty() const noexcept { return words_.empty(); }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool subset_of(const IdSet& other) const noexcept {
    if (words_.size() > other.words_.size()) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }

  bool intersects(const IdSet& other) const noexcept {
    std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  IdSet& operator|=(const IdSet& other) {
    if (words_.size() < other.words_.size()) words_.resize(other.words_.size(), 0);
    for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  friend IdSet operator|(IdSet a, const IdSet& b) { return a |= b; }

  /// Members in ascending order.
  std::vector<value_type> ids() const {
    std::vector<value_type> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        int b = std::countr_zero(w);
        out.push_back(value_type{static_cast<std::uint32_t>(i * 64 + b)});
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const IdSet&, const IdSet&) = default;

  /// Lexicographic order of the ascending member sequences.
  friend std::strong_ordering operator<=>(const IdSet& a, const IdSet& b) {
    std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t x = a.word(i) ^ b.word(i);
      if (x == 0) continue;
      int p = std::countr_zero(x);
      // The set holding bit p continues with p; the other continues with
      // something larger, or ends and is therefore a prefix.
      bool a_has = (a.word(i) >> p) & 1;
      const IdSet& other = a_has ? b : a;
      bool other_continues = other.has_member_above(i, p);
      if (a_has) return other_continues ? std::strong_ordering::less
                                        : std::strong_ordering::greater;
      return other_continues ? std::strong_ordering::greater
                             : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ull;
    return h;
  }

 private:
  static std::uint64_t bit(std::uint32_t v) { return std::uint64_t{1} << (v % 64); }
  std::uint64_t word(std::size_t i) const { return i < words_.size() ? words_[i] : 0; }

  bool has_member_above(std::size_t word_index, int bit_index) const {
    std::uint64_t w = word(word_index);
    if (bit_index < 63 && (w >> (bit_index + 1)) != 0) return true;
    for (std::size_t i = word_index + 1; i < words_.size(); ++i)
      if (words_[i] != 0) return true;
    return false;
  }

  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<std::uint64_t> words_;
};

/// A conjunction of assumptions.
using Environment = IdSet<AssumptionTag>;
using NodeSet = IdSet<NodeTag>;
using JustificationSet = IdSet<JustificationTag>;

}  // namespace ftms

#endif  // FTMS_IDSET_HPP_
