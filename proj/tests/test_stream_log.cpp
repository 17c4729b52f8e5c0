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
#include <random>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qsgap/stream_log.hpp"

namespace {

using qsgap::BigInt;
using qsgap::BigRat;
using qsgap::Bound;
using qsgap::Interval;
using qsgap::Item;
using qsgap::StreamLog;

StreamLog log_of(std::initializer_list<int> vals) {
  StreamLog s;
  for (int v : vals) s.append(Item(v));
  return s;
}

TEST_CASE("interval membership is strict on both ends") {
  const Interval iv(Bound::finite(Item(2)), Bound::finite(Item(7)));
  CHECK_FALSE(iv.contains(Item(2)));
  CHECK(iv.contains(Item(3)));
  CHECK(iv.contains(Item(BigRat(13, 2))));
  CHECK_FALSE(iv.contains(Item(7)));
  CHECK(Interval().contains(Item(1000000)));
  CHECK_THROWS_AS(Interval(Bound::finite(Item(3)), Bound::finite(Item(3))),
                  qsgap::InvalidInterval);
  CHECK_THROWS_AS(Interval(Bound::finite(Item(4)), Bound::finite(Item(3))),
                  qsgap::InvalidInterval);
  CHECK_THROWS_AS(Interval(Bound::pos_inf(), Bound::neg_inf()), qsgap::InvalidInterval);
}

TEST_CASE("append rejects duplicates and keeps arrival order") {
  StreamLog s = log_of({5, 1, 3});
  CHECK(s.size() == 3);
  CHECK_FALSE(s.empty());
  CHECK(s.arrivals()[0] == Item(5));
  CHECK(s.arrivals()[2] == Item(3));
  CHECK(s.arrival_index(Item(5)) == 1);
  CHECK(s.arrival_index(Item(3)) == 3);
  CHECK_THROWS_AS(s.append(Item(1)), qsgap::DuplicateItem);
  CHECK_THROWS_AS(s.arrival_index(Item(2)), qsgap::NotInStream);
}

TEST_CASE("order statistics on a small hand stream") {
  StreamLog s = log_of({5, 1, 3, 9, 7});
  CHECK(s.rank(Item(1)) == 1);
  CHECK(s.rank(Item(5)) == 3);
  CHECK(s.rank(Item(9)) == 5);
  CHECK_THROWS_AS(s.rank(Item(4)), qsgap::NotInStream);

  CHECK(s.min() == Item(1));
  CHECK(s.max() == Item(9));
  CHECK(s.select(1) == Item(1));
  CHECK(s.select(4) == Item(7));
  CHECK_THROWS_AS(s.select(0), qsgap::Error);
  CHECK_THROWS_AS(s.select(6), qsgap::Error);

  CHECK(s.next(Item(3)) == Item(5));
  CHECK(s.prev(Item(3)) == Item(1));
  CHECK_THROWS_AS(s.next(Item(9)), qsgap::NoSuccessor);
  CHECK_THROWS_AS(s.prev(Item(1)), qsgap::NoPredecessor);
  CHECK_THROWS_AS(s.next(Item(4)), qsgap::NotInStream);
  CHECK_THROWS_AS(s.prev(Item(4)), qsgap::NotInStream);

  // next_above / prev_below accept probes that are not stream members.
  CHECK(s.next_above(Item(4)) == Item(5));
  CHECK(s.prev_below(Item(4)) == Item(3));
  CHECK(s.next_above(Item(0)) == Item(1));
  CHECK(s.prev_below(Item(10)) == Item(9));
  CHECK_THROWS_AS(s.next_above(Item(9)), qsgap::NoSuccessor);
  CHECK_THROWS_AS(s.prev_below(Item(1)), qsgap::NoPredecessor);

  CHECK(s.count_less(Bound::finite(Item(5))) == 2);
  CHECK(s.count_leq(Bound::finite(Item(5))) == 3);
  CHECK(s.count_less(Bound::neg_inf()) == 0);
  CHECK(s.count_leq(Bound::pos_inf()) == 5);
  CHECK(s.count_inside(Interval(Bound::finite(Item(1)), Bound::finite(Item(9)))) == 3);
  CHECK(s.count_inside(Interval()) == 5);

  CHECK(s.contains(Item(7)));
  CHECK_FALSE(s.contains(Item(8)));
}

TEST_CASE("order statistics match a sorted-vector reference on random streams") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 3; ++round) {
    // Distinct values with gaps so probes can fall between stored items.
    std::vector<std::int64_t> vals(1500 + round * 500);
    std::iota(vals.begin(), vals.end(), 0);
    for (auto& v : vals) v = v * 3 + 1;
    std::shuffle(vals.begin(), vals.end(), rng);

    StreamLog s;
    std::vector<Item> ref;  // kept sorted
    for (std::size_t t = 0; t < vals.size(); ++t) {
      const Item x(vals[t]);
      s.append(x);
      ref.insert(std::lower_bound(ref.begin(), ref.end(), x), x);
      if (t % 97 != 0) continue;  // spot-check as the structure grows
      const auto n = static_cast<std::int64_t>(ref.size());
      for (int probe = 0; probe < 25; ++probe) {
        const Item q(static_cast<std::int64_t>(rng() % (vals.size() * 3 + 4)));
        const auto less = static_cast<std::int64_t>(
            std::lower_bound(ref.begin(), ref.end(), q) - ref.begin());
        const auto leq = static_cast<std::int64_t>(
            std::upper_bound(ref.begin(), ref.end(), q) - ref.begin());
        REQUIRE(s.count_less(Bound::finite(q)) == less);
        REQUIRE(s.count_leq(Bound::finite(q)) == leq);
        REQUIRE(s.contains(q) == (less != leq));
      }
      const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % ref.size());
      REQUIRE(s.select(r) == ref[static_cast<std::size_t>(r - 1)]);
      REQUIRE(s.min() == ref.front());
      REQUIRE(s.max() == ref.back());
      REQUIRE(s.size() == n);
    }
    // Full pass at the end: every rank and every select agree.
    REQUIRE(s.sorted_items() == ref);
    for (std::size_t i = 0; i < ref.size(); i += 53) {
      REQUIRE(s.rank(ref[i]) == static_cast<std::int64_t>(i) + 1);
      REQUIRE(s.select(static_cast<std::int64_t>(i) + 1) == ref[i]);
    }
  }
}

TEST_CASE("visit_inside yields the sorted interior of the interval") {
  StreamLog s;
  std::int64_t x = 1;
  for (int v = 1; v <= 40; ++v) {
    x = x * 6 % 41;  // powers of a primitive root: a permutation of 1..40
    s.append(Item(x));
  }
  const Interval iv(Bound::finite(Item(7)), Bound::finite(Item(23)));
  std::vector<Item> seen;
  s.visit_inside(iv, [&](const Item& x) { seen.push_back(x); });
  std::vector<Item> want;
  for (int v = 8; v <= 22; ++v) want.push_back(Item(v));
  CHECK(seen == want);
  CHECK(s.count_inside(iv) == static_cast<std::int64_t>(want.size()));

  std::vector<Item> all;
  s.visit_all([&](const Item& x) { all.push_back(x); });
  CHECK(all == s.sorted_items());
  CHECK(std::is_sorted(all.begin(), all.end()));
}

TEST_CASE("restrict keeps arrival order of the interior items") {
  StreamLog s = log_of({9, 2, 6, 4, 8, 1});
  const StreamLog sub = s.restrict(Interval(Bound::finite(Item(1)), Bound::finite(Item(8))));
  REQUIRE(sub.size() == 3);
  CHECK(sub.arrivals()[0] == Item(2));
  CHECK(sub.arrivals()[1] == Item(6));
  CHECK(sub.arrivals()[2] == Item(4));
}

TEST_CASE("dump and load round-trip the stream") {
  StreamLog s;
  s.append(Item(BigRat(1, 3)));
  s.append(Item(-7));
  s.append(Item(BigRat(22, 7)));
  std::ostringstream os;
  s.dump(os);
  std::istringstream is(os.str());
  const StreamLog t = StreamLog::load(is);
  REQUIRE(t.size() == s.size());
  CHECK(t.arrivals() == s.arrivals());
  CHECK(t.arrival_index(Item(-7)) == 2);
}

TEST_CASE("from_items replays a vector in order") {
  const std::vector<Item> v{Item(3), Item(1), Item(2)};
  const StreamLog s = StreamLog::from_items(v);
  CHECK(s.arrivals() == v);
  CHECK(s.rank(Item(2)) == 2);
}

TEST_CASE("sorted-array helpers restrict and count against intervals") {
  std::vector<Item> arr;
  for (int v : {1, 2, 9, 14, 19, 20}) arr.push_back(Item(v));

  const Interval iv(Bound::finite(Item(4)), Bound::finite(Item(17)));
  CHECK(qsgap::count_inside(arr, iv) == 2);  // 9 and 14

  const auto restricted = qsgap::restricted_array(arr, iv);
  REQUIRE(restricted.size() == 4);
  CHECK(restricted[0] == Bound::finite(Item(4)));
  CHECK(restricted[1] == Bound::finite(Item(9)));
  CHECK(restricted[2] == Bound::finite(Item(14)));
  CHECK(restricted[3] == Bound::finite(Item(17)));

  const auto whole = qsgap::restricted_array(arr, Interval());
  REQUIRE(whole.size() == arr.size() + 2);
  CHECK(whole.front() == Bound::neg_inf());
  CHECK(whole.back() == Bound::pos_inf());
  CHECK(whole[1] == Bound::finite(Item(1)));

  // Endpoints that coincide with array entries are excluded from the interior.
  const Interval edge(Bound::finite(Item(2)), Bound::finite(Item(19)));
  CHECK(qsgap::count_inside(arr, edge) == 2);
  const auto r2 = qsgap::restricted_array(arr, edge);
  REQUIRE(r2.size() == 4);
  CHECK(r2[1] == Bound::finite(Item(9)));
  CHECK(r2[2] == Bound::finite(Item(14)));

  const auto items = qsgap::restrict_item_array(arr, iv);
  const std::vector<Item> want_items{Item(4), Item(9), Item(14), Item(17)};
  CHECK(items == want_items);
  CHECK_THROWS_AS(qsgap::restrict_item_array(arr, Interval()), qsgap::InvalidInterval);
}

}  // namespace
