// Copyright 2026 The qsgap Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <unordered_map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qsgap/universe.hpp"

namespace qsgap {

// Open interval (lo, hi) over the universe; endpoints may be infinite.
struct Interval {
  Bound lo;
  Bound hi;

  Interval() : lo(Bound::neg_inf()), hi(Bound::pos_inf()) {}
  Interval(Bound l, Bound h) : lo(std::move(l)), hi(std::move(h)) {
    if (compare(lo, hi) >= 0) {
      throw InvalidInterval("(" + lo.str() + ", " + hi.str() + ")");
    }
  }

  bool contains(const Item& x) const {
    return compare(lo, x) < 0 && compare(x, hi) < 0;
  }

  std::string str() const { return "(" + lo.str() + ", " + hi.str() + ")"; }
};

namespace detail {

// Sorted multiset of distinct items split into chunks; keeps appends and rank
// queries near O(sqrt(n)), which is plenty at harness scale.
class ChunkedOrder {
 public:
  void insert(const Item& x) {
    if (chunks_.empty()) {
      chunks_.push_back({x});
      ++size_;
      cum_dirty_ = true;
      return;
    }
    std::size_t ci = chunk_for(x);
    auto& chunk = chunks_[ci];
    auto it = std::lower_bound(chunk.begin(), chunk.end(), x);
    chunk.insert(it, x);
    ++size_;
    cum_dirty_ = true;
    if (chunk.size() > 2 * kTargetChunk) split(ci);
  }

  std::int64_t size() const { return size_; }

  // Number of stored items strictly smaller than b.
  std::int64_t count_less(const Bound& b) const {
    if (b.kind() == Bound::kNegInf || size_ == 0) return 0;
    if (b.kind() == Bound::kPosInf) return size_;
    const Item& x = b.item();
    const std::size_t ci = chunk_for(x);
    const auto& chunk = chunks_[ci];
    return before_chunk(ci) +
           (std::lower_bound(chunk.begin(), chunk.end(), x) - chunk.begin());
  }

  // Number of stored items less than or equal to b.
  std::int64_t count_leq(const Bound& b) const {
    if (b.kind() == Bound::kNegInf || size_ == 0) return 0;
    if (b.kind() == Bound::kPosInf) return size_;
    const Item& x = b.item();
    // first chunk whose last element is > x, else the final chunk
    std::size_t lo = 0, hi = chunks_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (chunks_[mid].back() <= x) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == chunks_.size()) return size_;
    const auto& chunk = chunks_[lo];
    return before_chunk(lo) +
           (std::upper_bound(chunk.begin(), chunk.end(), x) - chunk.begin());
  }

  bool contains(const Item& x) const {
    if (size_ == 0) return false;
    std::size_t ci = chunk_for(x);
    const auto& chunk = chunks_[ci];
    auto it = std::lower_bound(chunk.begin(), chunk.end(), x);
    return it != chunk.end() && *it == x;
  }

  // 1-based selection; r must be in [1, size].
  const Item& select(std::int64_t r) const {
    if (r < 1 || r > size_) throw Error("select out of range");
    if (cum_dirty_) refresh_cum();
    const std::size_t ci =
        std::lower_bound(cum_.begin(), cum_.end(), r) - cum_.begin();
    return chunks_[ci][static_cast<std::size_t>(r - before_chunk(ci) - 1)];
  }

  std::vector<Item> to_vector() const {
    std::vector<Item> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (const auto& chunk : chunks_) out.insert(out.end(), chunk.begin(), chunk.end());
    return out;
  }

  // Visits stored items strictly inside (lo, hi) in ascending order.
  template <class Fn>
  void visit_range(const Bound& lo, const Bound& hi, Fn&& fn) const {
    for (const auto& chunk : chunks_) {
      if (compare(chunk.back(), lo) <= 0) continue;
      if (compare(chunk.front(), hi) >= 0) break;
      auto first = chunk.begin();
      auto last = chunk.end();
      if (lo.is_finite()) first = std::upper_bound(chunk.begin(), chunk.end(), lo.item());
      if (hi.is_finite()) last = std::lower_bound(first, chunk.end(), hi.item());
      for (auto it = first; it != last; ++it) fn(*it);
    }
  }

 private:
  static constexpr std::size_t kTargetChunk = 128;

  // Index of the chunk that should hold x: the first chunk whose last element
  // is >= x, else the final chunk.
  std::size_t chunk_for(const Item& x) const {
    std::size_t lo = 0, hi = chunks_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (chunks_[mid].back() < x) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo == chunks_.size() ? chunks_.size() - 1 : lo;
  }

  void split(std::size_t ci) {
    auto& chunk = chunks_[ci];
    std::vector<Item> tail(chunk.begin() + static_cast<std::ptrdiff_t>(chunk.size() / 2),
                           chunk.end());
    chunk.resize(chunk.size() / 2);
    chunks_.insert(chunks_.begin() + static_cast<std::ptrdiff_t>(ci) + 1, std::move(tail));
    cum_dirty_ = true;
  }

  std::int64_t before_chunk(std::size_t ci) const {
    if (cum_dirty_) refresh_cum();
    return ci == 0 ? 0 : cum_[ci - 1];
  }

  void refresh_cum() const {
    cum_.resize(chunks_.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
      acc += static_cast<std::int64_t>(chunks_[i].size());
      cum_[i] = acc;
    }
    cum_dirty_ = false;
  }

  std::vector<std::vector<Item>> chunks_;
  std::int64_t size_ = 0;
  mutable std::vector<std::int64_t> cum_;  // cum_[i] = total items in chunks_[0..i]
  mutable bool cum_dirty_ = true;
};

}  // namespace detail

// Append-only log of a stream of distinct items. Records arrival order and
// answers exact order statistics over the items seen so far.
class StreamLog {
 public:
  void append(const Item& x) {
    if (order_.contains(x)) throw DuplicateItem(x.str());
    arrivals_.push_back(x);
    order_.insert(x);
    arrival_pos_.emplace(x, arrivals_.size());
  }

  std::int64_t size() const { return static_cast<std::int64_t>(arrivals_.size()); }
  bool empty() const { return arrivals_.empty(); }
  const std::vector<Item>& arrivals() const { return arrivals_; }
  bool contains(const Item& x) const { return order_.contains(x); }

  // 1-based rank of x among all items appended so far.
  std::int64_t rank(const Item& x) const {
    if (!order_.contains(x)) throw NotInStream("rank(" + x.str() + ")");
    return order_.count_less(Bound::finite(x)) + 1;
  }

  // 1-based arrival position of x.
  std::int64_t arrival_index(const Item& x) const {
    auto it = arrival_pos_.find(x);
    if (it == arrival_pos_.end()) throw NotInStream("arrival_index(" + x.str() + ")");
    return static_cast<std::int64_t>(it->second);
  }

  // Smallest stored item strictly greater than x; x itself need not be stored.
  const Item& next_above(const Item& x) const {
    std::int64_t below = order_.count_leq(Bound::finite(x));
    if (below >= order_.size()) throw NoSuccessor("next(" + x.str() + ")");
    return order_.select(below + 1);
  }

  const Item& next(const Item& x) const {
    if (!order_.contains(x)) throw NotInStream("next(" + x.str() + ")");
    return next_above(x);
  }

  // Largest stored item strictly smaller than x.
  const Item& prev_below(const Item& x) const {
    std::int64_t below = order_.count_less(Bound::finite(x));
    if (below == 0) throw NoPredecessor("prev(" + x.str() + ")");
    return order_.select(below);
  }

  const Item& prev(const Item& x) const {
    if (!order_.contains(x)) throw NotInStream("prev(" + x.str() + ")");
    return prev_below(x);
  }

  const Item& select(std::int64_t r) const {
    if (r < 1 || r > order_.size()) throw Error("rank out of range");
    return order_.select(r);
  }

  const Item& min() const {
    if (empty()) throw Error("min of empty stream");
    return order_.select(1);
  }
  const Item& max() const {
    if (empty()) throw Error("max of empty stream");
    return order_.select(order_.size());
  }

  std::int64_t count_less(const Bound& b) const { return order_.count_less(b); }
  std::int64_t count_leq(const Bound& b) const { return order_.count_leq(b); }

  std::int64_t count_inside(const Interval& iv) const {
    return order_.count_less(iv.hi) - order_.count_leq(iv.lo);
  }

  // Substream of items inside iv, arrival order preserved.
  StreamLog restrict(const Interval& iv) const {
    StreamLog out;
    for (const auto& x : arrivals_) {
      if (iv.contains(x)) out.append(x);
    }
    return out;
  }

  std::vector<Item> sorted_items() const { return order_.to_vector(); }

  template <class Fn>
  void visit_inside(const Interval& iv, Fn&& fn) const {
    order_.visit_range(iv.lo, iv.hi, std::forward<Fn>(fn));
  }

  template <class Fn>
  void visit_all(Fn&& fn) const {
    order_.visit_range(Bound::neg_inf(), Bound::pos_inf(), std::forward<Fn>(fn));
  }

  // One item per line, arrival order.
  void dump(std::ostream& os) const {
    for (const auto& x : arrivals_) os << x.str() << "\n";
  }

  static StreamLog load(std::istream& is) {
    StreamLog out;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      out.append(Item::parse(line));
    }
    return out;
  }

  static StreamLog from_items(const std::vector<Item>& items) {
    StreamLog out;
    for (const auto& x : items) out.append(x);
    return out;
  }

 private:
  std::vector<Item> arrivals_;
  detail::ChunkedOrder order_;
  std::unordered_map<Item, std::size_t, ItemHash> arrival_pos_;
};

// Count of entries of a sorted array that lie strictly inside iv.
inline std::int64_t count_inside(const std::vector<Item>& sorted, const Interval& iv) {
  auto first = std::partition_point(sorted.begin(), sorted.end(), [&](const Item& x) {
    return compare(x, iv.lo) <= 0;
  });
  auto last = std::partition_point(first, sorted.end(), [&](const Item& x) {
    return compare(x, iv.hi) < 0;
  });
  return last - first;
}

// Restriction of a sorted item array to iv with the interval endpoints
// enclosing the result. Endpoints appear even when absent from the array.
inline std::vector<Bound> restricted_array(const std::vector<Item>& sorted, const Interval& iv) {
  std::vector<Bound> out;
  out.push_back(iv.lo);
  auto first = std::partition_point(sorted.begin(), sorted.end(), [&](const Item& x) {
    return compare(x, iv.lo) <= 0;
  });
  auto last = std::partition_point(first, sorted.end(), [&](const Item& x) {
    return compare(x, iv.hi) < 0;
  });
  for (auto it = first; it != last; ++it) out.push_back(Bound::finite(*it));
  out.push_back(iv.hi);
  return out;
}

// Finite-endpoint variant returning plain items.
inline std::vector<Item> restrict_item_array(const std::vector<Item>& sorted, const Interval& iv) {
  if (!iv.lo.is_finite() || !iv.hi.is_finite()) {
    throw InvalidInterval("restrict_item_array needs finite bounds, got " + iv.str());
  }
  std::vector<Item> out;
  for (const auto& b : restricted_array(sorted, iv)) out.push_back(b.item());
  return out;
}

}  // namespace qsgap
