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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qsgap/stream_log.hpp"
#include "qsgap/universe.hpp"

namespace qsgap {

// Full memory of a summary: the sorted array I of retained input items plus an
// opaque canonical encoding G of everything else it remembers. Two states are
// interchangeable for the harness iff |I| matches and G matches byte for byte.
struct MemoryState {
  std::vector<Item> items;   // I, ascending
  std::string general;       // G, canonical bytes free of item values
};

inline bool check_equivalent(const MemoryState& a, const MemoryState& b) {
  return a.items.size() == b.items.size() && a.general == b.general;
}

struct SpaceMeter {
  std::size_t current = 0;
  std::size_t peak = 0;

  void observe(std::size_t n) {
    current = n;
    if (n > peak) peak = n;
  }
};

struct QueryAnswer {
  std::size_t index = 0;  // 1-based position in I
  Item item;
};

// A deterministic comparison-based quantile summary under test. Implementations
// may only branch on comparisons between incoming items and stored items, so
// a query answer's index must be a function of (|I|, G) alone.
class Summary {
 public:
  virtual ~Summary() = default;

  virtual void process(const Item& x) = 0;
  virtual QueryAnswer query(const BigRat& phi) const = 0;
  virtual MemoryState snapshot() const = 0;
  virtual std::size_t item_count() const = 0;
  virtual std::size_t peak_item_count() const = 0;
  virtual std::string name() const = 0;

  virtual bool streaming() const { return true; }
  virtual bool supports_rank() const { return false; }

  // Estimated rank of q over the whole stream so far, for subjects that serve
  // rank queries; must depend only on comparisons of q with stored items.
  virtual std::int64_t rank_estimate(const Item& q) const {
    (void)q;
    throw SubjectLacksRankQuery(name());
  }
};

using SummaryFactory = std::function<std::unique_ptr<Summary>()>;

inline void require_fraction(const BigRat& phi) {
  if (phi < 0 || phi > 1) throw BadFraction("phi outside [0, 1]");
}

struct IndistinguishabilityVerdict {
  bool ok = true;
  std::int64_t violating_prefix = 0;  // first prefix length at which a check failed
  std::string reason;
};

// Replays pi and rho through two fresh instances in lockstep. After each pair
// of appends the two states must be equivalent and the retained items must sit
// at matching arrival positions in their streams.
inline IndistinguishabilityVerdict check_indistinguishable(const SummaryFactory& make,
                                                           const StreamLog& pi,
                                                           const StreamLog& rho) {
  if (pi.size() != rho.size()) {
    throw LengthMismatch("streams of length " + std::to_string(pi.size()) + " and " +
                         std::to_string(rho.size()));
  }
  auto dp = make();
  auto dr = make();
  const auto& ap = pi.arrivals();
  const auto& ar = rho.arrivals();
  for (std::size_t t = 0; t < ap.size(); ++t) {
    dp->process(ap[t]);
    dr->process(ar[t]);
    MemoryState sp = dp->snapshot();
    MemoryState sr = dr->snapshot();
    if (!check_equivalent(sp, sr)) {
      return {false, static_cast<std::int64_t>(t + 1), "states not equivalent"};
    }
    for (std::size_t i = 0; i < sp.items.size(); ++i) {
      if (pi.arrival_index(sp.items[i]) != rho.arrival_index(sr.items[i])) {
        return {false, static_cast<std::int64_t>(t + 1),
                "retained item " + std::to_string(i + 1) + " misaligned"};
      }
    }
  }
  return {};
}

struct IsomorphismVerdict {
  bool ok = true;
  std::int64_t violating_prefix = 0;
  std::string reason;
};

// Runs a stream and its image under a strictly increasing map side by side.
// A comparison-based subject cannot tell them apart: states stay equivalent
// and every query returns the same index on both runs.
inline IsomorphismVerdict check_order_isomorphism(const SummaryFactory& make,
                                                  const std::vector<Item>& stream,
                                                  const std::function<Item(const Item&)>& f,
                                                  const std::vector<BigRat>& phis) {
  auto d1 = make();
  auto d2 = make();
  for (std::size_t t = 0; t < stream.size(); ++t) {
    d1->process(stream[t]);
    d2->process(f(stream[t]));
    MemoryState s1 = d1->snapshot();
    MemoryState s2 = d2->snapshot();
    if (!check_equivalent(s1, s2)) {
      return {false, static_cast<std::int64_t>(t + 1), "states not equivalent"};
    }
    for (std::size_t i = 0; i < s1.items.size(); ++i) {
      if (!(f(s1.items[i]) == s2.items[i])) {
        return {false, static_cast<std::int64_t>(t + 1),
                "retained item " + std::to_string(i + 1) + " not the mapped original"};
      }
    }
    for (const auto& phi : phis) {
      QueryAnswer a1 = d1->query(phi);
      QueryAnswer a2 = d2->query(phi);
      if (a1.index != a2.index) {
        return {false, static_cast<std::int64_t>(t + 1),
                "query index diverged at phi = " + Item(phi).str()};
      }
    }
  }
  return {};
}

}  // namespace qsgap
