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
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsgap/stream_log.hpp"
#include "qsgap/summary.hpp"

namespace qsgap {

// Largest rank jump between adjacent retained entries, with the pair that
// realizes it: a is the lower witness, b the upper one. index is the 1-based
// position of a in its array. swapped is false when the jump pairs the first
// run's entry with the second run's next entry, true for the reverse pairing.
struct GapReport {
  std::size_t index = 0;
  Bound a;
  Bound b;
  std::int64_t size = 0;
  bool swapped = false;
};

// Rank of x within the substream of s inside iv, extended with the interval
// endpoints: the left endpoint has rank 1, an inside item x has rank
// 2 + #(inside items < x), the right endpoint closes at 2 + #(inside items).
inline std::int64_t enclosed_rank(const StreamLog& s, const Interval& iv, const Bound& x) {
  if (compare(x, iv.lo) == 0) return 1;
  std::int64_t less = 0;
  if (x.is_finite()) {
    less = s.count_less(x) - s.count_leq(iv.lo);
  } else {
    less = s.count_less(iv.hi) - s.count_leq(iv.lo);
  }
  return 2 + less;
}

// Enclosed ranks of every entry of a restricted array in one merged sweep.
inline std::vector<std::int64_t> enclosed_ranks(const StreamLog& s, const Interval& iv,
                                                const std::vector<Bound>& arr) {
  std::vector<std::int64_t> ranks(arr.size(), 0);
  ranks.front() = 1;
  std::size_t ai = 1;
  std::int64_t cnt = 0;
  s.visit_inside(iv, [&](const Item& y) {
    if (ai + 1 < arr.size() && arr[ai].item() == y) {
      ranks[ai] = 2 + cnt;
      ++ai;
    } else if (ai + 1 < arr.size() && arr[ai].item() < y) {
      throw NotInStream("restricted entry " + arr[ai].str() + " absent from substream");
    }
    ++cnt;
  });
  if (ai + 1 != arr.size()) {
    throw NotInStream("restricted entry " + arr[ai].str() + " absent from substream");
  }
  ranks.back() = 2 + cnt;
  return ranks;
}

// Ranks of a sorted subset of stream items within the whole stream.
inline std::vector<std::int64_t> stream_ranks(const StreamLog& s,
                                              const std::vector<Item>& sorted) {
  std::vector<std::int64_t> out;
  out.reserve(sorted.size());
  for (const auto& x : sorted) {
    if (!s.contains(x)) {
      throw NotInStream("stored item " + x.str() + " absent from stream");
    }
    out.push_back(s.count_less(Bound::finite(x)) + 1);
  }
  return out;
}

// Largest gap between the restricted arrays of the two runs, ranks taken in
// the interval-restricted substreams. Ties break toward the smallest index.
inline GapReport restricted_gap(const StreamLog& pi, const StreamLog& rho,
                                const Interval& iv_pi, const Interval& iv_rho,
                                const std::vector<Item>& items_pi,
                                const std::vector<Item>& items_rho) {
  const auto ap = restricted_array(items_pi, iv_pi);
  const auto ar = restricted_array(items_rho, iv_rho);
  if (ap.size() != ar.size()) {
    throw ArrayMismatch("restricted arrays of sizes " + std::to_string(ap.size()) + " and " +
                        std::to_string(ar.size()));
  }
  const auto rp = enclosed_ranks(pi, iv_pi, ap);
  const auto rr = enclosed_ranks(rho, iv_rho, ar);
  GapReport best;
  for (std::size_t i = 0; i + 1 < ap.size(); ++i) {
    const std::int64_t d = rr[i + 1] - rp[i];
    if (best.index == 0 || d > best.size) {
      best.index = i + 1;
      best.a = ap[i];
      best.b = ar[i + 1];
      best.size = d;
    }
  }
  return best;
}

// Largest gap between the full item arrays, maximized over both orderings of
// the two runs. For rank-ordered states the rho-over-pi ordering dominates.
inline GapReport full_gap(const StreamLog& pi, const StreamLog& rho,
                          const std::vector<Item>& items_pi,
                          const std::vector<Item>& items_rho) {
  if (items_pi.size() != items_rho.size()) {
    throw ArrayMismatch("item arrays of sizes " + std::to_string(items_pi.size()) + " and " +
                        std::to_string(items_rho.size()));
  }
  if (items_pi.size() < 2) throw DegenerateArray("full gap needs at least two stored items");
  const auto rp = stream_ranks(pi, items_pi);
  const auto rr = stream_ranks(rho, items_rho);
  GapReport best;
  for (std::size_t i = 0; i + 1 < items_pi.size(); ++i) {
    const std::int64_t d_rho_over_pi = rr[i + 1] - rp[i];
    const std::int64_t d_pi_over_rho = rp[i + 1] - rr[i];
    const std::int64_t d = std::max(d_rho_over_pi, d_pi_over_rho);
    if (best.index == 0 || d > best.size) {
      best.index = i + 1;
      best.size = d;
      best.swapped = d_rho_over_pi < d_pi_over_rho;
      if (!best.swapped) {
        best.a = Bound::finite(items_pi[i]);
        best.b = Bound::finite(items_rho[i + 1]);
      } else {
        best.a = Bound::finite(items_rho[i]);
        best.b = Bound::finite(items_pi[i + 1]);
      }
    }
  }
  return best;
}

struct RefineResult {
  Interval iv_pi;
  Interval iv_rho;
  GapReport gap;
};

namespace detail {

// Successor of b in the stream order, as a bound. An infinite left endpoint
// precedes everything, so its successor is the stream minimum.
inline Bound successor_bound(const StreamLog& s, const Bound& b, const Bound& clamp_hi) {
  Bound succ = Bound::pos_inf();
  if (b.kind() == Bound::kNegInf) {
    succ = Bound::finite(s.min());
  } else if (b.is_finite()) {
    succ = Bound::finite(s.next_above(b.item()));
  } else {
    throw NoSuccessor("successor of +inf");
  }
  return compare(succ, clamp_hi) < 0 ? succ : clamp_hi;
}

inline Bound predecessor_bound(const StreamLog& s, const Bound& b, const Bound& clamp_lo) {
  Bound pred = Bound::neg_inf();
  if (b.kind() == Bound::kPosInf) {
    pred = Bound::finite(s.max());
  } else if (b.is_finite()) {
    if (s.count_less(b) == 0) {
      pred = Bound::neg_inf();
    } else {
      pred = Bound::finite(s.prev_below(b.item()));
    }
  } else {
    throw NoPredecessor("predecessor of -inf");
  }
  return compare(clamp_lo, pred) < 0 ? pred : clamp_lo;
}

}  // namespace detail

// Locates the largest gap between the two restricted arrays and narrows both
// intervals to the empty stretch just right of the lower witness in pi and
// just left of the upper witness in rho. The returned intervals contain no
// item of their streams.
inline RefineResult refine_intervals(const StreamLog& pi, const StreamLog& rho,
                                     const Interval& iv_pi, const Interval& iv_rho,
                                     const std::vector<Item>& items_pi,
                                     const std::vector<Item>& items_rho) {
  const auto ap = restricted_array(items_pi, iv_pi);
  const auto ar = restricted_array(items_rho, iv_rho);
  if (ap.size() != ar.size()) {
    throw ArrayMismatch("restricted arrays of sizes " + std::to_string(ap.size()) + " and " +
                        std::to_string(ar.size()));
  }
  if (ap.size() == 2) {
    throw DegenerateArray("no stored items inside " + iv_pi.str());
  }
  RefineResult out;
  out.gap = restricted_gap(pi, rho, iv_pi, iv_rho, items_pi, items_rho);
  const Bound& alpha_pi = ap[out.gap.index - 1];
  const Bound& beta_rho = ar[out.gap.index];
  out.iv_pi = Interval(alpha_pi, detail::successor_bound(pi, alpha_pi, iv_pi.hi));
  out.iv_rho = Interval(detail::predecessor_bound(rho, beta_rho, iv_rho.lo), beta_rho);
  return out;
}

// Conservative log2: the largest multiple of 2^-30 not exceeding log2(g),
// computed by fixed-point squaring in exact integer arithmetic. Truncation is
// one sided, so the result never overshoots; powers of two come out exact.
inline BigRat log2_down(std::int64_t g) {
  if (g < 1) throw Error("log2 of non-positive value");
  const int e = std::bit_width(static_cast<std::uint64_t>(g)) - 1;
  BigInt y = (BigInt(g) << 96) >> e;  // Q96 fixed point of g / 2^e in [1, 2)
  const BigInt two = BigInt(1) << 97;
  std::int64_t frac = 0;
  for (int i = 0; i < 30; ++i) {
    y = (y * y) >> 96;
    frac <<= 1;
    if (y >= two) {
      frac |= 1;
      y >>= 1;
    }
  }
  return BigRat(BigInt(e) * (std::int64_t{1} << 30) + frac, BigInt(1) << 30);
}

// Right-hand side of the space lower bound at one recursion node:
// (1/8 - 2 eps) * (log2(g) + 1) * (N / g - 1 / (4 eps)), eps = 1/m.
// Exact rational apart from the one-sided log2 rounding.
inline BigRat space_gap_rhs(std::int64_t g, std::int64_t n, std::int64_t m) {
  if (m <= 16) throw InvalidEpsilon("space bound needs eps < 1/16, got 1/" + std::to_string(m));
  if (g < 1) throw Error("gap must be positive");
  const BigRat c(BigInt(m - 16), BigInt(8) * m);
  const BigRat level = log2_down(g) + 1;
  const BigRat factor = BigRat(BigInt(n), BigInt(g)) - BigRat(BigInt(m), BigInt(4));
  return c * level * factor;
}

// g >= g' + g'' - 1: the gap of a node dominates the gaps of its two children
// minus the shared witness.
inline bool check_claim_gaps(std::int64_t g, std::int64_t g_left, std::int64_t g_right) {
  return g >= g_left + g_right - 1;
}

// One node of the recursion tree, in execution entry order.
struct TraceNode {
  int level = 0;
  Interval iv_pi;
  Interval iv_rho;
  GapReport gap;                  // exit gap over the entry intervals
  std::int64_t peak_items = 0;    // peak restricted array size during the node
  std::int64_t n_before = 0;
  std::int64_t n_after = 0;
  std::int64_t g_prime = -1;      // internal: gap after the left subtree
  std::int64_t g_dprime = -1;     // internal: gap of the right subtree
  int left = -1;
  int right = -1;
  std::string path;
  bool obs1_ok = true;            // refined intervals empty and probe-aligned
  bool entry_align_ok = true;     // probe alignment of the entry intervals
  bool rank_order_ok = true;      // retained ranks in pi never exceed rho's
};

struct AdvResult {
  std::int64_t m = 0;
  StreamLog pi;
  StreamLog rho;
  std::vector<TraceNode> nodes;
  std::vector<std::size_t> top_nodes;  // one entry per top-level call, in order
  std::unique_ptr<Summary> subject_pi;
  std::unique_ptr<Summary> subject_rho;
  bool lockstep_ok = true;
  std::int64_t first_violation = 0;
  std::string violation_reason;
};

// Drives the recursive adversary against two lockstepped instances of the
// subject. Appends come in pairs, one item per stream; after every pair the
// two memory states must be equivalent and aligned, and every active node
// tracks the peak size of its restricted array.
class AdversaryRun {
 public:
  AdversaryRun(const SummaryFactory& make, std::int64_t m) : m_(m) {
    if (m < 2) throw InvalidEpsilon("adversary needs eps <= 1/2, got 1/" + std::to_string(m));
    sp_ = make();
    sr_ = make();
    if (!sp_->streaming()) throw SummaryNotStreaming(sp_->name());
    snap_p_ = sp_->snapshot();
    snap_r_ = sr_->snapshot();
  }

  // AdvStrategy(level) from the current position; returns the node index.
  std::size_t run(int level, const Interval& iv_pi, const Interval& iv_rho) {
    std::size_t idx = run_node(level, iv_pi, iv_rho,
                               "n" + std::to_string(top_nodes_.size() + 1));
    top_nodes_.push_back(idx);
    return idx;
  }

  const StreamLog& pi() const { return pi_; }
  const StreamLog& rho() const { return rho_; }
  const std::vector<TraceNode>& nodes() const { return nodes_; }
  Summary& subject_pi() { return *sp_; }
  Summary& subject_rho() { return *sr_; }
  const MemoryState& state_pi() const { return snap_p_; }
  const MemoryState& state_rho() const { return snap_r_; }
  bool lockstep_ok() const { return lockstep_ok_; }

  // Appends one more pair outside any node; used by the attack endgames.
  void feed_extra(const Item& a, const Item& b) { feed_pair(a, b); }

  AdvResult finish() {
    AdvResult r;
    r.m = m_;
    r.pi = std::move(pi_);
    r.rho = std::move(rho_);
    r.nodes = std::move(nodes_);
    r.top_nodes = std::move(top_nodes_);
    r.subject_pi = std::move(sp_);
    r.subject_rho = std::move(sr_);
    r.lockstep_ok = lockstep_ok_;
    r.first_violation = first_violation_;
    r.violation_reason = violation_reason_;
    return r;
  }

 private:
  std::size_t run_node(int level, const Interval& iv_pi, const Interval& iv_rho,
                       const std::string& path) {
    const std::size_t idx = nodes_.size();
    nodes_.emplace_back();
    {
      TraceNode& node = nodes_[idx];
      node.level = level;
      node.iv_pi = iv_pi;
      node.iv_rho = iv_rho;
      node.n_before = pi_.size();
      node.path = path;
    }
    if (!lockstep_ok_) {
      throw PreconditionViolated("node " + path + ": runs distinguishable at prefix " +
                                 std::to_string(first_violation_));
    }
    if (pi_.count_inside(iv_pi) != 0 || rho_.count_inside(iv_rho) != 0) {
      throw PreconditionViolated("node " + path + ": intervals not empty of stream items");
    }
    nodes_[idx].entry_align_ok = probes_aligned(iv_pi, iv_rho);
    if (!nodes_[idx].entry_align_ok) {
      throw PreconditionViolated("node " + path + ": probe indices misaligned");
    }
    nodes_[idx].peak_items = 2;
    active_.push_back(idx);
    if (level <= 1) {
      const auto gen_pi = generate_increasing(iv_pi.lo, iv_pi.hi, 2 * m_);
      const auto gen_rho = generate_increasing(iv_rho.lo, iv_rho.hi, 2 * m_);
      for (std::size_t t = 0; t < gen_pi.size(); ++t) feed_pair(gen_pi[t], gen_rho[t]);
    } else {
      const std::size_t left = run_node(level - 1, iv_pi, iv_rho, path + "L");
      RefineResult rr =
          refine_intervals(pi_, rho_, iv_pi, iv_rho, snap_p_.items, snap_r_.items);
      if (rr.gap.size != nodes_[left].gap.size) {
        throw Error("node " + path + ": refine gap disagrees with left child exit gap");
      }
      nodes_[idx].g_prime = rr.gap.size;
      nodes_[idx].left = static_cast<int>(left);
      nodes_[idx].obs1_ok = pi_.count_inside(rr.iv_pi) == 0 &&
                            rho_.count_inside(rr.iv_rho) == 0 &&
                            probes_aligned(rr.iv_pi, rr.iv_rho);
      const std::size_t right = run_node(level - 1, rr.iv_pi, rr.iv_rho, path + "R");
      nodes_[idx].right = static_cast<int>(right);
      nodes_[idx].g_dprime = nodes_[right].gap.size;
    }
    TraceNode& node = nodes_[idx];
    node.gap = restricted_gap(pi_, rho_, iv_pi, iv_rho, snap_p_.items, snap_r_.items);
    node.n_after = pi_.size();
    node.rank_order_ok = rank_ordering_holds();
    active_.pop_back();
    return idx;
  }

  void feed_pair(const Item& a, const Item& b) {
    pi_.append(a);
    sp_->process(a);
    rho_.append(b);
    sr_->process(b);
    snap_p_ = sp_->snapshot();
    snap_r_ = sr_->snapshot();
    for (std::size_t idx : active_) {
      TraceNode& node = nodes_[idx];
      const std::int64_t sz = count_inside(snap_p_.items, node.iv_pi) + 2;
      if (sz > node.peak_items) node.peak_items = sz;
    }
    if (!lockstep_ok_) return;
    if (!check_equivalent(snap_p_, snap_r_)) {
      lockstep_ok_ = false;
      first_violation_ = pi_.size();
      violation_reason_ = "states not equivalent";
      return;
    }
    for (std::size_t i = 0; i < snap_p_.items.size(); ++i) {
      if (pi_.arrival_index(snap_p_.items[i]) != rho_.arrival_index(snap_r_.items[i])) {
        lockstep_ok_ = false;
        first_violation_ = pi_.size();
        violation_reason_ = "retained item " + std::to_string(i + 1) + " misaligned";
        return;
      }
    }
  }

  // Sampled form of the positional agreement the construction preserves: the
  // binary search index of matched probe points must coincide across runs.
  bool probes_aligned(const Interval& iv_pi, const Interval& iv_rho) const {
    const Item p1 = between(iv_pi.lo, iv_pi.hi);
    const Item q1 = between(iv_rho.lo, iv_rho.hi);
    const Item p0 = between(iv_pi.lo, Bound::finite(p1));
    const Item q0 = between(iv_rho.lo, Bound::finite(q1));
    const Item p2 = between(Bound::finite(p1), iv_pi.hi);
    const Item q2 = between(Bound::finite(q1), iv_rho.hi);
    return search_index(snap_p_.items, p0) == search_index(snap_r_.items, q0) &&
           search_index(snap_p_.items, p1) == search_index(snap_r_.items, q1) &&
           search_index(snap_p_.items, p2) == search_index(snap_r_.items, q2);
  }

  static std::int64_t search_index(const std::vector<Item>& sorted, const Item& probe) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), probe);
    if (it == sorted.end()) return static_cast<std::int64_t>(sorted.size()) + 1;
    return (it - sorted.begin()) + 1;
  }

  bool rank_ordering_holds() const {
    if (snap_p_.items.size() != snap_r_.items.size()) return false;
    try {
      const auto rp = stream_ranks(pi_, snap_p_.items);
      const auto rr = stream_ranks(rho_, snap_r_.items);
      for (std::size_t i = 0; i < rp.size(); ++i) {
        if (rp[i] > rr[i]) return false;
      }
      return true;
    } catch (const NotInStream&) {
      return false;
    }
  }

  std::int64_t m_;
  StreamLog pi_;
  StreamLog rho_;
  std::unique_ptr<Summary> sp_;
  std::unique_ptr<Summary> sr_;
  MemoryState snap_p_;
  MemoryState snap_r_;
  std::vector<TraceNode> nodes_;
  std::vector<std::size_t> top_nodes_;
  std::vector<std::size_t> active_;
  bool lockstep_ok_ = true;
  std::int64_t first_violation_ = 0;
  std::string violation_reason_;
};

// AdvStrategy from an empty state: level-k recursion over unbounded intervals,
// appending (1/eps) * 2^k items per stream.
inline AdvResult adv_strategy(const SummaryFactory& make, std::int64_t m, int k) {
  AdversaryRun run(make, m);
  run.run(k, Interval(), Interval());
  return run.finish();
}

}  // namespace qsgap
