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

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qsgap/adversary.hpp"
#include "qsgap/oracle.hpp"

namespace {

using qsgap::BigRat;
using qsgap::Bound;
using qsgap::Interval;
using qsgap::Item;
using qsgap::StreamLog;

std::vector<Item> items_of(std::initializer_list<int> vals) {
  std::vector<Item> out;
  for (int v : vals) out.push_back(Item(v));
  return out;
}

TEST_CASE("true rank counts items at or below the probe") {
  const auto stream = items_of({5, 1, 3});
  CHECK(qsgap::oracle::true_rank(stream, Item(1)) == 1);
  CHECK(qsgap::oracle::true_rank(stream, Item(3)) == 2);
  CHECK(qsgap::oracle::true_rank(stream, Item(5)) == 3);
  CHECK(qsgap::oracle::true_rank(stream, Item(4)) == 2);  // probes may be unseen
  CHECK(qsgap::oracle::true_rank(stream, Item(0)) == 0);
  CHECK(qsgap::oracle::true_rank(stream, Item(9)) == 3);

  const StreamLog log = StreamLog::from_items(stream);
  CHECK(qsgap::oracle::true_rank(log, Item(4)) == 2);
}

TEST_CASE("exact quantile selects the clamped floor target") {
  const auto stream = items_of({5, 1, 3});
  CHECK(qsgap::oracle::exact_quantile(stream, BigRat(1)) == Item(5));
  CHECK(qsgap::oracle::exact_quantile(stream, BigRat(1, 2)) == Item(1));  // floor(3/2)=1
  CHECK(qsgap::oracle::exact_quantile(stream, BigRat(0)) == Item(1));
  CHECK(qsgap::oracle::exact_quantile(stream, BigRat(2, 3)) == Item(3));

  std::vector<Item> big;
  for (int v = 1; v <= 100; ++v) big.push_back(Item(v));
  CHECK(qsgap::oracle::exact_quantile(big, BigRat(37, 100)) == Item(37));

  CHECK_THROWS_AS(qsgap::oracle::exact_quantile(std::vector<Item>{}, BigRat(1, 2)),
                  qsgap::EmptyStream);
  CHECK_THROWS_AS(qsgap::oracle::exact_quantile(stream, BigRat(3, 2)), qsgap::BadFraction);
}

TEST_CASE("quantile verdicts accept within the eps window only") {
  std::vector<Item> stream;
  for (int v = 1; v <= 100; ++v) stream.push_back(Item(v));

  // target 40, slack 20: window [20, 60].
  auto v = qsgap::oracle::check_quantile_answer(stream, BigRat(2, 5), Item(41), BigRat(1, 5));
  CHECK(v.ok);
  CHECK(v.target == 40);
  CHECK(v.lo == 20);
  CHECK(v.hi == 60);
  CHECK(v.observed == 41);

  v = qsgap::oracle::check_quantile_answer(stream, BigRat(2, 5), Item(60), BigRat(1, 5));
  CHECK(v.ok);
  v = qsgap::oracle::check_quantile_answer(stream, BigRat(2, 5), Item(61), BigRat(1, 5));
  CHECK_FALSE(v.ok);
  CHECK(v.observed == 61);
  v = qsgap::oracle::check_quantile_answer(stream, BigRat(2, 5), Item(19), BigRat(1, 5));
  CHECK_FALSE(v.ok);

  // Window clamps to [1, n] at the extremes.
  v = qsgap::oracle::check_quantile_answer(stream, BigRat(0), Item(5), BigRat(1, 10));
  CHECK(v.target == 1);
  CHECK(v.lo == 1);
  CHECK(v.hi == 11);
  CHECK(v.ok);

  CHECK_THROWS_AS(
      qsgap::oracle::check_quantile_answer(stream, BigRat(1, 2), Item(1000), BigRat(1, 5)),
      qsgap::NotInStream);
  CHECK_THROWS_AS(
      qsgap::oracle::check_quantile_answer(stream, BigRat(1, 2), Item(50), BigRat(0)),
      qsgap::InvalidEpsilon);
  CHECK_THROWS_AS(
      qsgap::oracle::check_quantile_answer(stream, BigRat(1, 2), Item(50), BigRat(1)),
      qsgap::InvalidEpsilon);
}

TEST_CASE("brute full gap equals the production gap on random rank-aligned fixtures") {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 400; ++round) {
    const std::int64_t n = 20 + static_cast<std::int64_t>(rng() % 180);

    // Two independent random streams of distinct values.
    auto build = [&](std::uint64_t salt) {
      std::vector<std::int64_t> vals(static_cast<std::size_t>(n));
      std::iota(vals.begin(), vals.end(), 1);
      for (auto& v : vals) v = v * 5 + static_cast<std::int64_t>(salt % 5);
      std::mt19937_64 r2(salt);
      std::shuffle(vals.begin(), vals.end(), r2);
      StreamLog s;
      for (auto v : vals) s.append(Item(v));
      return s;
    };
    const StreamLog pi = build(rng());
    const StreamLog rho = build(rng());

    // Stored arrays picked at identical sorted positions in each stream, as
    // an aligned comparison-based subject would retain them.
    const std::size_t stored = 2 + rng() % 8;
    std::vector<std::int64_t> positions(static_cast<std::size_t>(n));
    std::iota(positions.begin(), positions.end(), 1);
    std::shuffle(positions.begin(), positions.end(), rng);
    positions.resize(stored);
    std::sort(positions.begin(), positions.end());
    std::vector<Item> ip;
    std::vector<Item> ir;
    for (const auto r : positions) {
      ip.push_back(pi.select(r));
      ir.push_back(rho.select(r));
    }

    const auto fast = qsgap::full_gap(pi, rho, ip, ir);
    const auto brute = qsgap::oracle::brute_gap(pi, rho, ip, ir);
    CAPTURE(round, n, stored);
    REQUIRE(fast.size == brute.size);
    REQUIRE(fast.index == brute.index);
    REQUIRE(fast.swapped == brute.swapped);
    REQUIRE(compare(fast.a, brute.a) == 0);
    REQUIRE(compare(fast.b, brute.b) == 0);
  }
}

TEST_CASE("brute restricted gap equals the production gap on index windows") {
  std::mt19937_64 rng(808);
  for (int round = 0; round < 300; ++round) {
    const std::int64_t n = 30 + static_cast<std::int64_t>(rng() % 120);
    auto build = [&](std::uint64_t salt) {
      std::vector<std::int64_t> vals(static_cast<std::size_t>(n));
      std::iota(vals.begin(), vals.end(), 1);
      for (auto& v : vals) v *= 3;
      std::mt19937_64 r2(salt);
      std::shuffle(vals.begin(), vals.end(), r2);
      StreamLog s;
      for (auto v : vals) s.append(Item(v));
      return s;
    };
    const StreamLog pi = build(rng());
    const StreamLog rho = build(rng());

    // Interval endpoints and stored entries at matching sorted indices.
    const std::int64_t lo_idx = 1 + static_cast<std::int64_t>(rng() % (n / 3));
    const std::int64_t hi_idx = n - static_cast<std::int64_t>(rng() % (n / 3));
    const Interval iv_pi(Bound::finite(pi.select(lo_idx)), Bound::finite(pi.select(hi_idx)));
    const Interval iv_rho(Bound::finite(rho.select(lo_idx)),
                          Bound::finite(rho.select(hi_idx)));

    const std::size_t stored = 2 + rng() % 6;
    std::vector<std::int64_t> positions(static_cast<std::size_t>(n));
    std::iota(positions.begin(), positions.end(), 1);
    std::shuffle(positions.begin(), positions.end(), rng);
    positions.resize(stored);
    std::sort(positions.begin(), positions.end());
    std::vector<Item> ip;
    std::vector<Item> ir;
    for (const auto r : positions) {
      ip.push_back(pi.select(r));
      ir.push_back(rho.select(r));
    }

    const auto fast = qsgap::restricted_gap(pi, rho, iv_pi, iv_rho, ip, ir);
    const auto brute = qsgap::oracle::brute_gap(pi, rho, ip, ir,
                                                std::optional<Interval>(iv_pi),
                                                std::optional<Interval>(iv_rho));
    CAPTURE(round, n, stored, lo_idx, hi_idx);
    REQUIRE(fast.size == brute.size);
    REQUIRE(fast.index == brute.index);
    REQUIRE(compare(fast.a, brute.a) == 0);
    REQUIRE(compare(fast.b, brute.b) == 0);
  }
}

TEST_CASE("brute gap validates inputs like the production path") {
  const StreamLog s = StreamLog::from_items(items_of({1, 2, 3, 4, 5}));
  CHECK_THROWS_AS(qsgap::oracle::brute_gap(s, s, items_of({1, 2}), items_of({1})),
                  qsgap::ArrayMismatch);
  CHECK_THROWS_AS(qsgap::oracle::brute_gap(s, s, items_of({1}), items_of({1})),
                  qsgap::DegenerateArray);
  const Interval iv(Bound::finite(Item(1)), Bound::finite(Item(5)));
  CHECK_THROWS_AS(qsgap::oracle::brute_gap(s, s, items_of({2}), items_of({2}),
                                           std::optional<Interval>(iv), std::nullopt),
                  qsgap::InvalidInterval);
}

TEST_CASE("all-stored arrays have unit gaps everywhere") {
  // When both runs retain everything, consecutive ranks differ by exactly 1.
  std::vector<Item> stream;
  for (int v = 1; v <= 30; ++v) stream.push_back(Item(v));
  const StreamLog s = StreamLog::from_items(stream);
  const auto gap = qsgap::full_gap(s, s, stream, stream);
  CHECK(gap.size == 1);
  const auto brute = qsgap::oracle::brute_gap(s, s, stream, stream);
  CHECK(brute.size == 1);
}

}  // namespace
