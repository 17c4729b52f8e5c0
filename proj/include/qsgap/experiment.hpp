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

// Experiment runner: parameter grids over the attacks, the verification
// property suite, the space-trend benchmark, and the small fixed replay
// used for documentation. All runs are deterministic for a given config.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qsgap/adversary.hpp"
#include "qsgap/attacks.hpp"
#include "qsgap/errors.hpp"
#include "qsgap/jsonio.hpp"
#include "qsgap/oracle.hpp"
#include "qsgap/summaries.hpp"

namespace qsgap {

struct ExperimentConfig {
  std::string command;  // attack | verify | bench | replay-example
  std::int64_t eps_inv = 32;
  int k_min = 4;
  int k_max = 10;
  std::string summary = "gk";
  std::string attack = "quantile";
  std::string csv_path;
  std::string trace_path;
  std::uint64_t seed = 12345;
  bool quick = false;
  int jobs = 1;
  std::int64_t max_n = std::int64_t{1} << 22;
};

// Stream-length cap, overridable through the QA_MAX_N environment variable.
inline std::int64_t default_max_n() {
  if (const char* s = std::getenv("QA_MAX_N")) {
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0' || v <= 0)
      throw ConfigError("QA_MAX_N must be a positive integer, got '" + std::string(s) + "'");
    return v;
  }
  return std::int64_t{1} << 22;
}

// Parses "A..B" or a single "K" into an inclusive level range.
inline void parse_k_range(const std::string& s, int& lo, int& hi) {
  const auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, pos));
      hi = std::stoi(s.substr(pos + 2));
    }
  } catch (const std::exception&) {
    throw ConfigError("bad level range '" + s + "', expected A..B");
  }
  if (lo < 1 || hi < lo) throw ConfigError("bad level range '" + s + "', need 1 <= A <= B");
}

// Stream length an attack will generate per run at level k.
inline std::int64_t predicted_length(const std::string& attack, std::int64_t m, int k) {
  if (k < 1 || k > 40) throw ConfigError("level out of range: " + std::to_string(k));
  std::int64_t n = attack == "biased" ? m * ((std::int64_t{1} << (k + 1)) - 2) : m << k;
  if (attack == "median") n *= 2;  // endgame may append up to one full stream again
  return n;
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (cfg.command == "attack" || cfg.command == "verify") {
    if (cfg.eps_inv < 17)
      throw ConfigError("accuracy 1/" + std::to_string(cfg.eps_inv) +
                        " too coarse, need eps < 1/16 (--eps-inv >= 17)");
  } else if (cfg.command == "bench") {
    if (cfg.eps_inv < 2) throw ConfigError("bench needs --eps-inv >= 2");
  }
  if (cfg.command == "attack") {
    parse_attack(cfg.attack);
    (void)make_summary(cfg.summary, cfg.eps_inv);  // rejects unknown selectors
    if (predicted_length(cfg.attack, cfg.eps_inv, cfg.k_max) > cfg.max_n)
      throw ConfigError("stream length for k=" + std::to_string(cfg.k_max) +
                        " exceeds the QA_MAX_N cap of " + std::to_string(cfg.max_n));
  }
  if (cfg.command == "bench") {
    (void)make_summary(cfg.summary, cfg.eps_inv);
    if ((cfg.eps_inv << cfg.k_max) > cfg.max_n)
      throw ConfigError("bench stream for k=" + std::to_string(cfg.k_max) +
                        " exceeds the QA_MAX_N cap of " + std::to_string(cfg.max_n));
  }
  if (cfg.command == "verify") {
    const int deepest = cfg.quick ? 6 : 10;
    if ((std::int64_t{32} << deepest) > cfg.max_n)
      throw ConfigError("verify grid exceeds the QA_MAX_N cap of " +
                        std::to_string(cfg.max_n));
  }
}

namespace detail {

// Runs fn(i) for i in [0, count) on up to `jobs` threads; the first captured
// exception is rethrown after all workers finish.
template <class Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline bool outcome_ok(const AttackOutcome& o) {
  return o.lemma1_ok && o.claim1_ok && o.spacegap_ok && o.survived && o.run.lockstep_ok;
}

// Human-readable location of the first failed check in an outcome.
inline std::string describe_violation(const AttackOutcome& o) {
  if (!o.run.lockstep_ok)
    return "lockstep divergence at pair " + std::to_string(o.run.first_violation) + ": " +
           o.run.violation_reason;
  if (!o.claim1_ok) {
    for (const auto& n : o.run.nodes) {
      if (n.left >= 0 && !check_claim_gaps(n.gap.size, n.g_prime, n.g_dprime))
        return "child-gap bound failed at node " + n.path;
    }
  }
  if (!o.spacegap_ok) {
    for (const auto& n : o.run.nodes) {
      if (o.m > 16 && n.gap.size >= 1) {
        const std::int64_t appended = n.n_after - n.n_before;
        if (BigRat(n.peak_items) < space_gap_rhs(n.gap.size, appended, o.m))
          return "space-gap bound failed at node " + n.path;
      }
    }
  }
  if (!o.lemma1_ok)
    return "root gap " + std::to_string(o.root_gap) + " exceeds 2N/m at k=" +
           std::to_string(o.k);
  if (!o.survived) return "accuracy violation, witness: " + o.witness;
  return "";
}

}  // namespace detail

struct AttackGridResult {
  std::vector<AttackOutcome> outcomes;  // one per k, ascending
  bool all_ok = true;
  std::string first_violation;

  std::string csv() const {
    std::string out = kAttackCsvHeader;
    out += '\n';
    for (const auto& o : outcomes) {
      out += csv_row(o);
      out += '\n';
    }
    return out;
  }

  OrderedJson traces() const {
    OrderedJson runs = OrderedJson::array();
    for (const auto& o : outcomes) {
      OrderedJson entry;
      entry["attack"] = attack_name(o.kind);
      entry["summary"] = o.summary_name;
      entry["eps_inv"] = o.m;
      entry["k"] = o.k;
      entry["trace"] = trace_json(o.run);
      runs.push_back(std::move(entry));
    }
    return OrderedJson{{"runs", std::move(runs)}};
  }
};

inline AttackGridResult run_attack_grid(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const AttackKind kind = parse_attack(cfg.attack);
  const auto factory = summary_factory(cfg.summary, cfg.eps_inv);
  {
    auto probe = factory();
    if (!probe->streaming())
      throw SummaryNotStreaming(probe->name() + " cannot face an adaptive stream");
  }
  const std::size_t count = static_cast<std::size_t>(cfg.k_max - cfg.k_min + 1);
  AttackGridResult res;
  res.outcomes.resize(count);
  detail::parallel_for(count, cfg.jobs, [&](std::size_t i) {
    res.outcomes[i] = run_attack(kind, factory, cfg.eps_inv, cfg.k_min + static_cast<int>(i));
  });
  for (const auto& o : res.outcomes) {
    if (!detail::outcome_ok(o) && res.first_violation.empty()) {
      res.all_ok = false;
      res.first_violation = "k=" + std::to_string(o.k) + ": " + detail::describe_violation(o);
    }
  }
  return res;
}

struct PropertyResult {
  std::string name;
  bool ok = true;
  std::string detail;  // first failure site
};

struct VerifyReport {
  std::vector<PropertyResult> props;

  bool all_ok() const {
    for (const auto& p : props) {
      if (!p.ok) return false;
    }
    return true;
  }
};

// Full property suite over the fixed grid m in {18, 32} x {gk, gk-greedy},
// levels 1..10 (1..6 with --quick).
inline VerifyReport run_verify(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int deepest = cfg.quick ? 6 : 10;
  VerifyReport rep;
  rep.props = {{"oracle-gap-equivalence", true, ""}, {"indistinguishability", true, ""},
               {"refinement-checks", true, ""},      {"rank-ordering", true, ""},
               {"space-times-gap-bound", true, ""},  {"root-gap-bound", true, ""},
               {"child-gap-superadditivity", true, ""}, {"space-gap-bound", true, ""},
               {"order-isomorphism", true, ""}};
  PropertyResult& p_oracle = rep.props[0];
  PropertyResult& p_ind = rep.props[1];
  PropertyResult& p_refine = rep.props[2];
  PropertyResult& p_rank = rep.props[3];
  PropertyResult& p_eq1 = rep.props[4];
  PropertyResult& p_root = rep.props[5];
  PropertyResult& p_claim = rep.props[6];
  PropertyResult& p_space = rep.props[7];
  PropertyResult& p_iso = rep.props[8];
  auto fail = [](PropertyResult& p, const std::string& where) {
    if (p.ok) {
      p.ok = false;
      p.detail = where;
    }
  };
  for (const std::int64_t m : {std::int64_t{18}, std::int64_t{32}}) {
    for (const std::string sel : {"gk", "gk-greedy"}) {
      for (int k = 1; k <= deepest; ++k) {
        const std::string where =
            "m=" + std::to_string(m) + " " + sel + " k=" + std::to_string(k);
        const auto factory = summary_factory(sel, m);
        AdvResult run = adv_strategy(factory, m, k);
        if (!run.lockstep_ok) {
          fail(p_ind, where + " pair=" + std::to_string(run.first_violation));
          continue;
        }
        const auto sp = run.subject_pi->snapshot();
        const auto sr = run.subject_rho->snapshot();
        const GapReport root = full_gap(run.pi, run.rho, sp.items, sr.items);
        // Dual-route gap check at the root, full and interval-restricted.
        const GapReport brute = oracle::brute_gap(run.pi, run.rho, sp.items, sr.items);
        if (root.index != brute.index || root.size != brute.size ||
            compare(root.a, brute.a) != 0 || compare(root.b, brute.b) != 0 ||
            root.swapped != brute.swapped)
          fail(p_oracle, where + " full");
        const Interval unbounded;
        const GapReport res_adv =
            restricted_gap(run.pi, run.rho, unbounded, unbounded, sp.items, sr.items);
        const GapReport res_brute = oracle::brute_gap(run.pi, run.rho, sp.items, sr.items,
                                                      unbounded, unbounded);
        if (res_adv.index != res_brute.index || res_adv.size != res_brute.size)
          fail(p_oracle, where + " restricted");
        const auto ver = check_indistinguishable(factory, run.pi, run.rho);
        if (!ver.ok)
          fail(p_ind, where + " prefix=" + std::to_string(ver.violating_prefix) + " " +
                          ver.reason);
        if (BigRat(root.size) > BigRat(2 * static_cast<std::int64_t>(run.pi.size()), m))
          fail(p_root, where);
        for (const auto& n : run.nodes) {
          const std::string at = where + " node=" + n.path;
          if (!n.obs1_ok || !n.entry_align_ok) fail(p_refine, at);
          if (!n.rank_order_ok) fail(p_rank, at);
          const std::int64_t appended = n.n_after - n.n_before;
          if (BigInt(n.peak_items) * n.gap.size < appended) fail(p_eq1, at);
          if (n.left >= 0 && !check_claim_gaps(n.gap.size, n.g_prime, n.g_dprime))
            fail(p_claim, at);
          if (m > 16 && n.gap.size >= 1 &&
              BigRat(n.peak_items) < space_gap_rhs(n.gap.size, appended, m))
            fail(p_space, at);
        }
      }
    }
  }
  // Comparison-based behavior is invariant under strictly increasing maps.
  std::mt19937_64 rng(cfg.seed);
  for (const std::int64_t m : {std::int64_t{18}, std::int64_t{32}}) {
    for (const std::string sel : {"gk", "gk-greedy"}) {
      std::vector<Item> stream;
      {
        std::vector<std::int64_t> pool(1024);
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<std::int64_t>(i) + 1;
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < 256; ++i) stream.emplace_back(pool[i]);
      }
      const auto f = [](const Item& x) { return Item((2 * x.value() + 3) / 5); };
      const std::vector<BigRat> phis = {BigRat(0), BigRat(1, 4), BigRat(1, 2),
                                        BigRat(3, 4), BigRat(1)};
      const auto verdict =
          check_order_isomorphism(summary_factory(sel, m), stream, f, phis);
      if (!verdict.ok)
        fail(p_iso, "m=" + std::to_string(m) + " " + sel + " prefix=" +
                        std::to_string(verdict.violating_prefix) + " " + verdict.reason);
    }
  }
  return rep;
}

struct BenchRow {
  int k = 0;
  std::int64_t n = 0;
  std::int64_t peak = 0;
  BigRat ratio;  // peak / (m * (k + 2))
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool ratio_stable = true;  // every ratio <= 2x the first row's

  std::string csv() const {
    std::string out = "summary,eps_inv,k,N,peak_items,ratio\n";
    for (const auto& r : rows) {
      out += meta + "," + std::to_string(r.k) + "," + std::to_string(r.n) + "," +
             std::to_string(r.peak) + "," + Item(r.ratio).str() + "\n";
    }
    return out;
  }
  std::string meta;  // "summary,eps_inv" prefix
};

// Measures peak retained-item count over shuffled streams of length m * 2^k
// and normalizes by m * (k + 2), the expected near-flat growth profile.
inline BenchReport run_bench(const ExperimentConfig& cfg) {
  validate_config(cfg);
  BenchReport rep;
  rep.meta = cfg.summary + "," + std::to_string(cfg.eps_inv);
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const std::int64_t n = cfg.eps_inv << k;
    std::vector<std::int64_t> vals(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = i + 1;
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
    std::shuffle(vals.begin(), vals.end(), rng);
    auto subject = make_summary(cfg.summary, cfg.eps_inv);
    for (const std::int64_t v : vals) subject->process(Item(v));
    BenchRow row;
    row.k = k;
    row.n = n;
    row.peak = static_cast<std::int64_t>(subject->peak_item_count());
    row.ratio = BigRat(row.peak, cfg.eps_inv * (k + 2));
    rep.rows.push_back(std::move(row));
  }
  for (const auto& r : rep.rows) {
    if (r.ratio > 2 * rep.rows.front().ratio) rep.ratio_stable = false;
  }
  return rep;
}

struct ReplayReport {
  std::vector<std::int64_t> checkpoints;  // stream length after each leaf
  std::size_t leaves = 0;
  std::size_t refinements = 0;
  std::int64_t final_len = 0;
  bool per_leaf_12 = true;
  bool ok = false;
  OrderedJson trace;
};

// Small fixed construction (accuracy 1/6, three levels) against GK, checked
// structurally: four leaves of 12 items each, checkpoints 12/24/36/48.
inline ReplayReport run_replay_example() {
  AdvResult run = adv_strategy(summary_factory("gk", 6), 6, 3);
  ReplayReport rep;
  for (const auto& n : run.nodes) {
    if (n.left < 0) {
      ++rep.leaves;
      rep.checkpoints.push_back(n.n_after);
      if (n.n_after - n.n_before != 12) rep.per_leaf_12 = false;
    } else {
      ++rep.refinements;
    }
  }
  std::sort(rep.checkpoints.begin(), rep.checkpoints.end());
  rep.final_len = static_cast<std::int64_t>(run.pi.size());
  rep.ok = run.lockstep_ok && rep.leaves == 4 && rep.refinements == 3 &&
           rep.per_leaf_12 && rep.final_len == 48 &&
           rep.checkpoints == std::vector<std::int64_t>{12, 24, 36, 48};
  rep.trace = trace_json(run);
  return rep;
}

}  // namespace qsgap
