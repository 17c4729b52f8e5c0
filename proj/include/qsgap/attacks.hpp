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

// Attack drivers built on the adversarial construction. Each one runs the
// recursive strategy against two lockstepped copies of a subject summary,
// then either demonstrates an accuracy violation with an oracle-checked
// witness or records the space statistics the theory predicts.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsgap/adversary.hpp"
#include "qsgap/errors.hpp"
#include "qsgap/oracle.hpp"
#include "qsgap/stream_log.hpp"
#include "qsgap/summary.hpp"
#include "qsgap/universe.hpp"

namespace qsgap {

enum class AttackKind { kQuantile, kMedian, kRank, kBiased };

inline const char* attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::kQuantile: return "quantile";
    case AttackKind::kMedian: return "median";
    case AttackKind::kRank: return "rank";
    case AttackKind::kBiased: return "biased";
  }
  return "?";
}

inline AttackKind parse_attack(const std::string& s) {
  if (s == "quantile") return AttackKind::kQuantile;
  if (s == "median") return AttackKind::kMedian;
  if (s == "rank") return AttackKind::kRank;
  if (s == "biased") return AttackKind::kBiased;
  throw ConfigError("unknown attack '" + s + "'");
}

// One ascending block of the biased attack.
struct PhaseStat {
  int level = 0;
  std::int64_t n_total = 0;   // stream length after the phase
  std::int64_t appended = 0;  // items this phase added per stream
  std::int64_t gap = 0;       // gap restricted to the phase interval
  std::int64_t peak = 0;      // peak restricted array size during the phase
  bool gap_ok = true;         // gap <= 4 * appended / m
};

struct AttackOutcome {
  AttackKind kind = AttackKind::kQuantile;
  std::string summary_name;
  std::int64_t m = 0;
  int k = 0;
  std::int64_t n_construction = 0;  // stream length when the recursion ended
  std::int64_t n_total = 0;         // final stream length (with endgame items)
  std::int64_t peak_items = 0;
  std::int64_t final_items = 0;
  std::int64_t root_gap = 0;      // full gap when the recursion ended
  BigRat bound_rhs = BigRat(0);   // space bound at (root_gap, n_total); 0 if skipped
  bool lemma1_ok = true;          // root_gap <= 2 n_construction / m
  bool claim1_ok = true;          // parent gap >= child gaps - 1 everywhere
  bool spacegap_ok = true;        // every node's peak meets the space bound
  bool survived = true;           // no oracle-certified violation demonstrated
  std::string witness;            // phi or query item of a violation, else empty
  std::vector<PhaseStat> phases;  // biased attack only
  std::int64_t phase_peak_sum = 0;
  AdvResult run;
};

namespace detail {

// Fills claim / space flags from the recorded trace and the root statistics.
inline void eval_trace_checks(AttackOutcome& out) {
  for (const auto& n : out.run.nodes) {
    if (n.left >= 0 && !check_claim_gaps(n.gap.size, n.g_prime, n.g_dprime))
      out.claim1_ok = false;
    if (out.m > 16 && n.gap.size >= 1) {
      const std::int64_t appended = n.n_after - n.n_before;
      if (BigRat(n.peak_items) < space_gap_rhs(n.gap.size, appended, out.m))
        out.spacegap_ok = false;
    }
  }
  out.lemma1_ok = BigRat(out.root_gap) <= BigRat(2 * out.n_construction, out.m);
  if (out.m > 16 && out.root_gap >= 1)
    out.bound_rhs = space_gap_rhs(out.root_gap, out.n_total, out.m);
}

// Ranks of the gap witnesses in the streams they belong to, respecting the
// pairing that realized the gap. first applies to the pi run, second to rho.
inline std::pair<std::int64_t, std::int64_t> witness_ranks(const StreamLog& pi,
                                                           const StreamLog& rho,
                                                           const GapReport& g) {
  if (!g.swapped) return {pi.rank(g.a.item()), rho.rank(g.b.item())};
  return {rho.rank(g.a.item()), pi.rank(g.b.item())};
}

inline void require_attack_eps(std::int64_t m) {
  if (m < 17) throw InvalidEpsilon("attacks need eps < 1/16, got 1/" + std::to_string(m));
}

}  // namespace detail

// Runs the construction and checks the root gap bound gap <= 2 eps N. If the
// bound fails, queries the mid-gap quantile on both runs and validates the
// answers with the oracle; a subject that answers both within eps would
// contradict the gap, so at least one check must fail.
inline AttackOutcome quantile_attack(const SummaryFactory& make, std::int64_t m, int k) {
  detail::require_attack_eps(m);
  AttackOutcome out;
  out.kind = AttackKind::kQuantile;
  out.m = m;
  out.k = k;
  AdversaryRun adv(make, m);
  adv.run(k, Interval(), Interval());
  out.run = adv.finish();
  out.summary_name = out.run.subject_pi->name();
  const std::int64_t n = static_cast<std::int64_t>(out.run.pi.size());
  out.n_construction = n;
  out.n_total = n;
  const auto sp = out.run.subject_pi->snapshot();
  const auto sr = out.run.subject_rho->snapshot();
  out.final_items = static_cast<std::int64_t>(sp.items.size());
  out.peak_items = static_cast<std::int64_t>(out.run.subject_pi->peak_item_count());
  const GapReport root = full_gap(out.run.pi, out.run.rho, sp.items, sr.items);
  out.root_gap = root.size;
  detail::eval_trace_checks(out);
  if (!out.lemma1_ok) {
    const auto [ra, rb] = detail::witness_ranks(out.run.pi, out.run.rho, root);
    const BigRat phi(ra + rb, 2 * n);
    const auto qp = out.run.subject_pi->query(phi);
    const auto qr = out.run.subject_rho->query(phi);
    const auto vp = oracle::check_quantile_answer(out.run.pi, phi, qp.item, BigRat(1, m));
    const auto vr = oracle::check_quantile_answer(out.run.rho, phi, qr.item, BigRat(1, m));
    out.survived = vp.ok && vr.ok;
    if (!out.survived) {
      const auto& bad = vp.ok ? vr : vp;
      out.witness = "phi=" + Item(phi).str() + " rank=" + std::to_string(bad.observed) +
                    " allowed=" + std::to_string(bad.lo) + ".." + std::to_string(bad.hi);
    }
  }
  return out;
}

// Runs the construction and, when the root gap exceeds 4 eps N, pads one end
// of both streams so the former gap straddles the median, then queries
// phi = 1/2 and oracle-checks both answers. For subjects within the gap
// bound it records the space statistics instead.
inline AttackOutcome median_attack(const SummaryFactory& make, std::int64_t m, int k) {
  detail::require_attack_eps(m);
  AttackOutcome out;
  out.kind = AttackKind::kMedian;
  out.m = m;
  out.k = k;
  AdversaryRun adv(make, m);
  adv.run(k, Interval(), Interval());
  const std::int64_t n = static_cast<std::int64_t>(adv.pi().size());
  out.n_construction = n;
  const GapReport root =
      full_gap(adv.pi(), adv.rho(), adv.state_pi().items, adv.state_rho().items);
  out.root_gap = root.size;
  const bool breached = BigRat(out.root_gap) > BigRat(4 * n, m);
  if (breached) {
    const auto [ra, rb] = detail::witness_ranks(adv.pi(), adv.rho(), root);
    const BigRat phi_prime(ra + rb, 2 * n);
    const BigRat excess = phi_prime < BigRat(1, 2) ? BigRat(1) - 2 * phi_prime
                                                   : 2 * phi_prime - BigRat(1);
    const std::int64_t cnt = to_i64(rat_round(excess * n));
    for (std::int64_t j = 0; j < cnt; ++j) {
      Item a = phi_prime < BigRat(1, 2)
                   ? between(Bound::neg_inf(), Bound::finite(adv.pi().min()))
                   : between(Bound::finite(adv.pi().max()), Bound::pos_inf());
      Item b = phi_prime < BigRat(1, 2)
                   ? between(Bound::neg_inf(), Bound::finite(adv.rho().min()))
                   : between(Bound::finite(adv.rho().max()), Bound::pos_inf());
      adv.feed_extra(a, b);
    }
  }
  out.run = adv.finish();
  out.summary_name = out.run.subject_pi->name();
  out.n_total = static_cast<std::int64_t>(out.run.pi.size());
  const auto sp = out.run.subject_pi->snapshot();
  out.final_items = static_cast<std::int64_t>(sp.items.size());
  out.peak_items = static_cast<std::int64_t>(out.run.subject_pi->peak_item_count());
  detail::eval_trace_checks(out);
  if (breached) {
    const BigRat half(1, 2);
    const auto qp = out.run.subject_pi->query(half);
    const auto qr = out.run.subject_rho->query(half);
    const auto vp = oracle::check_quantile_answer(out.run.pi, half, qp.item, BigRat(1, m));
    const auto vr = oracle::check_quantile_answer(out.run.rho, half, qr.item, BigRat(1, m));
    out.survived = vp.ok && vr.ok;
    if (!out.survived) {
      const auto& bad = vp.ok ? vr : vp;
      out.witness = "phi=1/2 rank=" + std::to_string(bad.observed) +
                    " allowed=" + std::to_string(bad.lo) + ".." + std::to_string(bad.hi);
    }
  }
  return out;
}

// Runs the construction, then probes the maximal root gap with one unseen
// query per run, placed just above the gap's lower witness and just below
// its upper witness. A comparison-based subject must return the same rank
// estimate for both probes, yet their true ranks differ by gap - 2, so a
// subject accurate within eps N on both runs forces gap <= 2 eps N + 2.
inline AttackOutcome rank_attack(const SummaryFactory& make, std::int64_t m, int k) {
  detail::require_attack_eps(m);
  {
    auto probe = make();
    if (!probe->supports_rank())
      throw SubjectLacksRankQuery(probe->name() + " has no rank estimator");
  }
  AttackOutcome out;
  out.kind = AttackKind::kRank;
  out.m = m;
  out.k = k;
  AdversaryRun adv(make, m);
  adv.run(k, Interval(), Interval());
  out.run = adv.finish();
  out.summary_name = out.run.subject_pi->name();
  const std::int64_t n = static_cast<std::int64_t>(out.run.pi.size());
  out.n_construction = n;
  out.n_total = n;
  const auto sp = out.run.subject_pi->snapshot();
  const auto sr = out.run.subject_rho->snapshot();
  out.final_items = static_cast<std::int64_t>(sp.items.size());
  out.peak_items = static_cast<std::int64_t>(out.run.subject_pi->peak_item_count());
  const GapReport root = full_gap(out.run.pi, out.run.rho, sp.items, sr.items);
  out.root_gap = root.size;
  detail::eval_trace_checks(out);
  const StreamLog& pi = out.run.pi;
  const StreamLog& rho = out.run.rho;
  // Probe just above the low witness in its run, just below the high witness
  // in the other; both land between the same stored positions.
  Item q_low(0);
  Item q_high(0);
  const Item a = root.a.item();
  const Item b = root.b.item();
  if (!root.swapped) {
    q_low = between(root.a, Bound::finite(pi.next_above(a)));
    q_high = between(rho.count_less(Bound::finite(b)) > 0 ? Bound::finite(rho.prev_below(b))
                                                          : Bound::neg_inf(),
                     root.b);
  } else {
    q_low = between(root.a, Bound::finite(rho.next_above(a)));
    q_high = between(pi.count_less(Bound::finite(b)) > 0 ? Bound::finite(pi.prev_below(b))
                                                         : Bound::neg_inf(),
                     root.b);
  }
  const Item q_pi = root.swapped ? q_high : q_low;
  const Item q_rho = root.swapped ? q_low : q_high;
  const std::int64_t r_pi = out.run.subject_pi->rank_estimate(q_pi);
  const std::int64_t r_rho = out.run.subject_rho->rank_estimate(q_rho);
  const std::int64_t true_pi = oracle::true_rank(pi, q_pi);
  const std::int64_t true_rho = oracle::true_rank(rho, q_rho);
  const std::int64_t slack = n / m;
  const bool consistent = r_pi == r_rho;
  const bool ok_pi = r_pi - true_pi <= slack && true_pi - r_pi <= slack;
  const bool ok_rho = r_rho - true_rho <= slack && true_rho - r_rho <= slack;
  out.survived = consistent && ok_pi && ok_rho;
  if (!out.survived) {
    if (!consistent) {
      out.witness = "q=" + q_pi.str() + " r_pi=" + std::to_string(r_pi) +
                    " r_rho=" + std::to_string(r_rho) + " inconsistent";
    } else {
      const bool pi_bad = !ok_pi;
      out.witness = "q=" + (pi_bad ? q_pi : q_rho).str() +
                    " rank=" + std::to_string(pi_bad ? r_pi : r_rho) + " allowed=" +
                    std::to_string((pi_bad ? true_pi : true_rho) - slack) + ".." +
                    std::to_string((pi_bad ? true_pi : true_rho) + slack);
    }
  }
  return out;
}

// Runs k ascending phases, each an independent recursion confined to items
// above everything so far, and records per-phase restricted gap and peak
// space. For uniform-error subjects each phase's gap must stay within
// 4 eps of the phase length.
inline AttackOutcome biased_attack(const SummaryFactory& make, std::int64_t m, int k) {
  detail::require_attack_eps(m);
  AttackOutcome out;
  out.kind = AttackKind::kBiased;
  out.m = m;
  out.k = k;
  AdversaryRun adv(make, m);
  std::vector<std::size_t> roots;
  for (int i = 1; i <= k; ++i) {
    const Bound lo_pi =
        adv.pi().empty() ? Bound::neg_inf() : Bound::finite(adv.pi().max());
    const Bound lo_rho =
        adv.rho().empty() ? Bound::neg_inf() : Bound::finite(adv.rho().max());
    roots.push_back(
        adv.run(i, Interval(lo_pi, Bound::pos_inf()), Interval(lo_rho, Bound::pos_inf())));
  }
  out.run = adv.finish();
  out.summary_name = out.run.subject_pi->name();
  out.n_construction = static_cast<std::int64_t>(out.run.pi.size());
  out.n_total = out.n_construction;
  const auto sp = out.run.subject_pi->snapshot();
  const auto sr = out.run.subject_rho->snapshot();
  out.final_items = static_cast<std::int64_t>(sp.items.size());
  out.peak_items = static_cast<std::int64_t>(out.run.subject_pi->peak_item_count());
  const GapReport root = full_gap(out.run.pi, out.run.rho, sp.items, sr.items);
  out.root_gap = root.size;
  detail::eval_trace_checks(out);
  std::int64_t running = 0;
  for (std::size_t pi_idx = 0; pi_idx < roots.size(); ++pi_idx) {
    const TraceNode& node = out.run.nodes[roots[pi_idx]];
    PhaseStat ps;
    ps.level = node.level;
    ps.appended = node.n_after - node.n_before;
    running += ps.appended;
    ps.n_total = running;
    ps.gap = node.gap.size;
    ps.peak = node.peak_items;
    ps.gap_ok = BigRat(ps.gap) <= BigRat(4 * ps.appended, m);
    out.phase_peak_sum += ps.peak;
    if (!ps.gap_ok && out.witness.empty()) {
      out.witness = "phase=" + std::to_string(ps.level) + " gap=" + std::to_string(ps.gap) +
                    " limit=" + Item(BigRat(4 * ps.appended, m)).str();
      out.survived = false;
    }
    out.phases.push_back(ps);
  }
  if (!out.run.lockstep_ok) out.survived = false;
  return out;
}

inline AttackOutcome run_attack(AttackKind kind, const SummaryFactory& make,
                                std::int64_t m, int k) {
  switch (kind) {
    case AttackKind::kQuantile: return quantile_attack(make, m, k);
    case AttackKind::kMedian: return median_attack(make, m, k);
    case AttackKind::kRank: return rank_attack(make, m, k);
    case AttackKind::kBiased: return biased_attack(make, m, k);
  }
  throw ConfigError("unreachable attack kind");
}

}  // namespace qsgap
