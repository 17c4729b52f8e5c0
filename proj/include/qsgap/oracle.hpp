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

// Brute-force reference implementations used to cross-check the main
// library. Everything here works on plain vectors with direct scans and
// std::sort, deliberately sharing no computation with the gap and rank
// routines in adversary.hpp so that agreement between the two is meaningful.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsgap/adversary.hpp"
#include "qsgap/errors.hpp"
#include "qsgap/stream_log.hpp"
#include "qsgap/universe.hpp"

namespace qsgap::oracle {

inline std::vector<Item> sorted_copy(const std::vector<Item>& v) {
  std::vector<Item> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

// Number of stream items <= x. Items are distinct, so this is the rank of
// x when x belongs to the stream.
inline std::int64_t true_rank(const std::vector<Item>& stream, const Item& x) {
  std::int64_t r = 0;
  for (const auto& it : stream) {
    if (it <= x) ++r;
  }
  return r;
}

inline std::int64_t true_rank(const StreamLog& s, const Item& x) {
  return true_rank(s.arrivals(), x);
}

// The item of rank max(1, floor(phi * n)) in the sorted stream.
inline Item exact_quantile(const std::vector<Item>& stream, const BigRat& phi) {
  require_fraction(phi);
  if (stream.empty()) throw EmptyStream("exact_quantile needs at least one item");
  const auto sorted = sorted_copy(stream);
  const std::int64_t n = static_cast<std::int64_t>(sorted.size());
  std::int64_t target = to_i64(rat_floor(phi * n));
  if (target < 1) target = 1;
  if (target > n) target = n;
  return sorted[static_cast<std::size_t>(target - 1)];
}

inline Item exact_quantile(const StreamLog& s, const BigRat& phi) {
  return exact_quantile(s.arrivals(), phi);
}

struct Verdict {
  bool ok = false;
  std::int64_t observed = 0;  // rank of the answer in the stream
  std::int64_t target = 0;    // max(1, floor(phi * n))
  std::int64_t lo = 0;        // acceptance window, inclusive
  std::int64_t hi = 0;
};

// Accepts `answer` as a phi-quantile of the stream iff its rank lies within
// floor(eps * n) of the target rank. The answer must occur in the stream.
inline Verdict check_quantile_answer(const std::vector<Item>& stream, const BigRat& phi,
                                     const Item& answer, const BigRat& eps) {
  require_fraction(phi);
  if (eps <= 0 || eps >= 1) throw InvalidEpsilon("accuracy must lie in (0, 1)");
  if (stream.empty()) throw EmptyStream("check_quantile_answer needs at least one item");
  bool present = false;
  for (const auto& it : stream) {
    if (it == answer) {
      present = true;
      break;
    }
  }
  if (!present) throw NotInStream("answer " + answer.str() + " absent from stream");
  const std::int64_t n = static_cast<std::int64_t>(stream.size());
  Verdict v;
  v.target = to_i64(rat_floor(phi * n));
  if (v.target < 1) v.target = 1;
  if (v.target > n) v.target = n;
  const std::int64_t slack = to_i64(rat_floor(eps * n));
  v.lo = std::max<std::int64_t>(1, v.target - slack);
  v.hi = std::min<std::int64_t>(n, v.target + slack);
  v.observed = true_rank(stream, answer);
  v.ok = v.lo <= v.observed && v.observed <= v.hi;
  return v;
}

inline Verdict check_quantile_answer(const StreamLog& s, const BigRat& phi,
                                     const Item& answer, const BigRat& eps) {
  return check_quantile_answer(s.arrivals(), phi, answer, eps);
}

namespace detail {

// Items of `stream` strictly inside (lo, hi), sorted.
inline std::vector<Item> inside_sorted(const std::vector<Item>& stream, const Bound& lo,
                                       const Bound& hi) {
  std::vector<Item> out;
  for (const auto& it : stream) {
    if (compare(lo, it) < 0 && compare(it, hi) < 0) out.push_back(it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Rank of array entry x within sorted(inside + both endpoints): the low
// endpoint has rank 1, an interior entry x rank 2 + #(inside < x), the
// high endpoint rank 2 + #inside. `inside` must be sorted.
inline std::int64_t enclosed_rank_of(const std::vector<Item>& inside, const Bound& lo,
                                     const Bound& hi, const Bound& x) {
  if (compare(x, lo) == 0) return 1;
  if (compare(x, hi) == 0) return 2 + static_cast<std::int64_t>(inside.size());
  const std::int64_t below =
      std::lower_bound(inside.begin(), inside.end(), x.item()) - inside.begin();
  return 2 + below;
}

// The stored array restricted to (lo, hi) with the interval endpoints
// enclosing it: lo, the stored items strictly inside, hi.
inline std::vector<Bound> enclosed_array(const std::vector<Item>& items, const Bound& lo,
                                         const Bound& hi) {
  std::vector<Bound> out;
  out.push_back(lo);
  for (const auto& it : sorted_copy(items)) {
    if (compare(lo, it) < 0 && compare(it, hi) < 0) out.push_back(Bound::finite(it));
  }
  out.push_back(hi);
  return out;
}

}  // namespace detail

// Independent gap computation over plain sorted vectors. Without intervals:
// the largest rank jump between the full arrays, maximized over both
// pairings of arrays with streams (ties: smallest position, then the
// first-array-under-second-stream pairing). With intervals: the forward
// jump between the interval-restricted arrays under enclosed ranks.
inline GapReport brute_gap(const std::vector<Item>& stream_pi,
                           const std::vector<Item>& stream_rho,
                           const std::vector<Item>& items_pi,
                           const std::vector<Item>& items_rho,
                           const std::optional<Interval>& iv_pi = std::nullopt,
                           const std::optional<Interval>& iv_rho = std::nullopt) {
  if (iv_pi.has_value() != iv_rho.has_value())
    throw InvalidInterval("need intervals for both runs or neither");
  GapReport best;
  if (!iv_pi) {
    if (items_pi.size() != items_rho.size())
      throw ArrayMismatch("item arrays of sizes " + std::to_string(items_pi.size()) +
                          " and " + std::to_string(items_rho.size()));
    if (items_pi.size() < 2) throw DegenerateArray("full gap needs at least two stored items");
    const auto sp = sorted_copy(items_pi);
    const auto sr = sorted_copy(items_rho);
    const auto ss_pi = sorted_copy(stream_pi);
    const auto ss_rho = sorted_copy(stream_rho);
    // rank of x = #(stream items <= x), read off the sorted copy
    const auto rank_in = [](const std::vector<Item>& sorted_stream, const Item& x) {
      return static_cast<std::int64_t>(
          std::upper_bound(sorted_stream.begin(), sorted_stream.end(), x) -
          sorted_stream.begin());
    };
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
      const std::int64_t fwd = rank_in(ss_rho, sr[i + 1]) - rank_in(ss_pi, sp[i]);
      const std::int64_t rev = rank_in(ss_pi, sp[i + 1]) - rank_in(ss_rho, sr[i]);
      const std::int64_t d = std::max(fwd, rev);
      if (best.index == 0 || d > best.size) {
        best.index = i + 1;
        best.size = d;
        best.swapped = fwd < rev;
        if (!best.swapped) {
          best.a = Bound::finite(sp[i]);
          best.b = Bound::finite(sr[i + 1]);
        } else {
          best.a = Bound::finite(sr[i]);
          best.b = Bound::finite(sp[i + 1]);
        }
      }
    }
    return best;
  }
  const auto arr_pi = detail::enclosed_array(items_pi, iv_pi->lo, iv_pi->hi);
  const auto arr_rho = detail::enclosed_array(items_rho, iv_rho->lo, iv_rho->hi);
  if (arr_pi.size() != arr_rho.size())
    throw ArrayMismatch("restricted arrays of sizes " + std::to_string(arr_pi.size()) +
                        " and " + std::to_string(arr_rho.size()));
  const auto in_pi = detail::inside_sorted(stream_pi, iv_pi->lo, iv_pi->hi);
  const auto in_rho = detail::inside_sorted(stream_rho, iv_rho->lo, iv_rho->hi);
  for (std::size_t i = 0; i + 1 < arr_pi.size(); ++i) {
    const std::int64_t d =
        detail::enclosed_rank_of(in_rho, iv_rho->lo, iv_rho->hi, arr_rho[i + 1]) -
        detail::enclosed_rank_of(in_pi, iv_pi->lo, iv_pi->hi, arr_pi[i]);
    if (best.index == 0 || d > best.size) {
      best.index = i + 1;
      best.a = arr_pi[i];
      best.b = arr_rho[i + 1];
      best.size = d;
    }
  }
  return best;
}

inline GapReport brute_gap(const StreamLog& pi, const StreamLog& rho,
                           const std::vector<Item>& items_pi,
                           const std::vector<Item>& items_rho,
                           const std::optional<Interval>& iv_pi = std::nullopt,
                           const std::optional<Interval>& iv_rho = std::nullopt) {
  return brute_gap(pi.arrivals(), rho.arrivals(), items_pi, items_rho, iv_pi, iv_rho);
}

}  // namespace qsgap::oracle
