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

#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "doubles.hpp"
#include "qsgap/attacks.hpp"
#include "qsgap/summaries.hpp"

namespace {

using qsgap::AttackKind;
using qsgap::AttackOutcome;
using qsgap::BigRat;

TEST_CASE("attack names round-trip") {
  for (const auto kind : {AttackKind::kQuantile, AttackKind::kMedian, AttackKind::kRank,
                          AttackKind::kBiased}) {
    CHECK(qsgap::parse_attack(qsgap::attack_name(kind)) == kind);
  }
  CHECK_THROWS_AS(qsgap::parse_attack("nonsense"), qsgap::ConfigError);
}

TEST_CASE("attacks enforce the accuracy precondition") {
  const auto factory = qsgap::summary_factory("gk", 16);
  CHECK_THROWS_AS(qsgap::quantile_attack(factory, 16, 2), qsgap::InvalidEpsilon);
  CHECK_THROWS_AS(qsgap::median_attack(factory, 16, 2), qsgap::InvalidEpsilon);
  CHECK_THROWS_AS(qsgap::rank_attack(factory, 16, 2), qsgap::InvalidEpsilon);
  CHECK_THROWS_AS(qsgap::biased_attack(factory, 16, 2), qsgap::InvalidEpsilon);
}

TEST_CASE("attacks reject non-streaming subjects") {
  const auto offline = qsgap::summary_factory("offline", 32);
  CHECK_THROWS_AS(qsgap::quantile_attack(offline, 32, 2), qsgap::SummaryNotStreaming);
  CHECK_THROWS_AS(qsgap::biased_attack(offline, 32, 2), qsgap::SummaryNotStreaming);
}

TEST_CASE("rank attack requires a rank estimator") {
  CHECK_THROWS_AS(qsgap::rank_attack(qsgap_test::store_all_factory(), 32, 2),
                  qsgap::SubjectLacksRankQuery);
}

void check_survived(const AttackOutcome& out, std::int64_t m, int k) {
  CAPTURE(qsgap::attack_name(out.kind), out.summary_name, m, k, out.witness);
  CHECK(out.m == m);
  CHECK(out.k == k);
  CHECK(out.survived);
  CHECK(out.lemma1_ok);
  CHECK(out.claim1_ok);
  CHECK(out.spacegap_ok);
  CHECK(out.witness.empty());
  CHECK(out.run.lockstep_ok);
  CHECK(out.final_items > 0);
  CHECK(out.peak_items >= out.final_items);
}

TEST_CASE("the streaming summary survives the quantile attack with pinned statistics") {
  const auto factory = qsgap::summary_factory("gk", 32);
  // One row per level: the construction doubles the stream and the root gap.
  const std::int64_t want_gap[] = {4, 8, 16, 32};
  const std::int64_t want_peak[] = {38, 50, 64, 79};
  const BigRat want_rhs[] = {BigRat(3, 2), BigRat(2), BigRat(5, 2), BigRat(3)};
  for (int k = 1; k <= 4; ++k) {
    const auto out = qsgap::quantile_attack(factory, 32, k);
    check_survived(out, 32, k);
    CHECK(out.n_construction == 32 << k);
    CHECK(out.n_total == out.n_construction);
    CHECK(out.root_gap == want_gap[k - 1]);
    CHECK(out.peak_items == want_peak[k - 1]);
    CHECK(out.bound_rhs == want_rhs[k - 1]);
    // The bound column is recomputable from the row's own fields.
    CHECK(out.bound_rhs == qsgap::space_gap_rhs(out.root_gap, out.n_total, out.m));
  }
}

TEST_CASE("median and rank attacks record the same construction statistics") {
  const auto factory = qsgap::summary_factory("gk", 32);
  const auto med = qsgap::median_attack(factory, 32, 4);
  check_survived(med, 32, 4);
  CHECK(med.root_gap == 32);
  CHECK(med.n_total == 512);  // within the 4 eps N bound: no padding happened
  CHECK(med.bound_rhs == BigRat(3));

  const auto rnk = qsgap::rank_attack(factory, 32, 4);
  check_survived(rnk, 32, 4);
  CHECK(rnk.root_gap == 32);
  CHECK(rnk.root_gap <= 2 * rnk.n_construction / 32 + 2);
}

TEST_CASE("greedy compression survives with a different space profile") {
  const auto out = qsgap::quantile_attack(qsgap::summary_factory("gk-greedy", 18), 18, 3);
  check_survived(out, 18, 3);
  CHECK(out.n_construction == 18 << 3);
  CHECK(BigRat(out.root_gap) <= BigRat(2 * out.n_construction, 18));
}

TEST_CASE("biased attack runs ascending phases with pinned lengths") {
  const auto out = qsgap::biased_attack(qsgap::summary_factory("gk", 18), 18, 3);
  CAPTURE(out.witness);
  CHECK(out.survived);
  CHECK(out.run.lockstep_ok);
  CHECK(out.n_total == 252);  // 36 + 72 + 144
  REQUIRE(out.phases.size() == 3);
  const std::int64_t want_appended[] = {36, 72, 144};
  const std::int64_t want_gap[] = {4, 12, 28};
  std::int64_t running = 0;
  std::int64_t peak_sum = 0;
  for (std::size_t i = 0; i < out.phases.size(); ++i) {
    const auto& ps = out.phases[i];
    CHECK(ps.level == static_cast<int>(i) + 1);
    CHECK(ps.appended == want_appended[i]);
    running += ps.appended;
    CHECK(ps.n_total == running);
    CHECK(ps.gap == want_gap[i]);
    CHECK(ps.gap_ok);
    CHECK(BigRat(ps.gap) <= BigRat(4 * ps.appended, 18));
    CHECK(ps.peak >= 2);
    peak_sum += ps.peak;
  }
  CHECK(out.phase_peak_sum == peak_sum);
}

TEST_CASE("run_attack dispatches by kind") {
  const auto factory = qsgap::summary_factory("gk", 18);
  CHECK(qsgap::run_attack(AttackKind::kQuantile, factory, 18, 2).kind ==
        AttackKind::kQuantile);
  CHECK(qsgap::run_attack(AttackKind::kBiased, factory, 18, 2).kind == AttackKind::kBiased);
}

TEST_CASE("a forgetful subject is convicted by the quantile attack") {
  const std::int64_t m = 32;
  const int k = 4;
  const std::int64_t n = m << k;  // construction length; the drop fires last
  const auto out = qsgap::quantile_attack(qsgap_test::forgetful_factory(m, n), m, k);
  CHECK(out.summary_name == "forgetful");
  CHECK(out.run.lockstep_ok);  // the two copies forget identically
  CHECK_FALSE(out.lemma1_ok);  // hole of 3n/m ranks beats the 2n/m ceiling
  CHECK(out.root_gap == 3 * n / m + 1);
  CHECK_FALSE(out.survived);
  REQUIRE_FALSE(out.witness.empty());
  // The witness pins the query and the oracle window it violated.
  CHECK(out.witness.find("phi=") == 0);
  CHECK(out.witness.find("allowed=") != std::string::npos);
}

TEST_CASE("a wide hole is convicted by the median attack") {
  const std::int64_t m = 32;
  const int k = 4;
  const std::int64_t n = m << k;
  // Drop 5n/m ranks: past the 4n/m threshold that arms the median endgame.
  const auto out = qsgap::median_attack(qsgap_test::forgetful_factory(m, n, 5), m, k);
  CHECK(out.root_gap == 5 * n / m + 1);
  CHECK(out.n_total > out.n_construction);  // padding recentered the hole
  CHECK_FALSE(out.survived);
  REQUIRE_FALSE(out.witness.empty());
  CHECK(out.witness.find("phi=1/2") == 0);
}

}  // namespace
