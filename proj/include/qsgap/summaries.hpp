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
#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qsgap/summary.hpp"

namespace qsgap {

struct GkTuple {
  Item v;
  std::int64_t g = 0;      // rank(v) - rank(previous stored item)
  std::int64_t delta = 0;  // slack: rank(v) lies in [rmin, rmin + delta]
};

// Greenwald-Khanna summary in its plain tuple form, eps = 1/m. Every arrival
// becomes a tuple; compression folds a tuple into its successor only while
// g_i + g_{i+1} + delta_{i+1} stays within floor(2n/m), and never touches the
// stored minimum or maximum. Two compression cadences are supported: a pass
// every floor(m/2) arrivals, or an exhaustive sweep after every arrival.
class GkSummary : public Summary {
 public:
  enum class Compress { kPeriodic, kGreedy };

  GkSummary(std::int64_t m, Compress policy) : m_(m), policy_(policy) {
    if (m < 2) throw InvalidEpsilon("gk needs eps <= 1/2, got 1/" + std::to_string(m));
  }

  void process(const Item& x) override {
    auto it = std::lower_bound(t_.begin(), t_.end(), x,
                               [](const GkTuple& t, const Item& v) { return t.v < v; });
    ++n_;
    GkTuple nt;
    nt.v = x;
    nt.g = 1;
    const bool extreme = (it == t_.begin()) || (it == t_.end());
    nt.delta = extreme ? 0 : std::max<std::int64_t>(0, cap() - 1);
    t_.insert(it, nt);
    meter_.observe(t_.size());
    if (policy_ == Compress::kGreedy) {
      while (compress_pass()) {
      }
    } else if (++since_compress_ >= period()) {
      compress_pass();
      since_compress_ = 0;
    }
    meter_.observe(t_.size());
  }

  QueryAnswer query(const BigRat& phi) const override {
    require_fraction(phi);
    if (n_ == 0) throw EmptySummary("gk");
    const std::int64_t target = std::max<std::int64_t>(1, to_i64(rat_floor(BigRat(phi * n_))));
    const std::int64_t err = n_ / m_;
    std::int64_t rmin = 0;
    std::size_t best = 0;
    std::int64_t best_d = -1;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      rmin += t_[i].g;
      const std::int64_t d = std::max(target - rmin, rmin + t_[i].delta - target);
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best_d > err) throw Error("gk query could not certify target rank");
    return {best + 1, t_[best].v};
  }

  bool supports_rank() const override { return true; }

  // Midpoint of the certified rank bracket of q. For q strictly between stored
  // neighbors the bracket is [rmin(pred), rmin(succ) + delta(succ) - 1], so the
  // estimate is off by at most floor(n/m).
  std::int64_t rank_estimate(const Item& q) const override {
    if (n_ == 0) return 0;
    std::size_t pos = 0;
    std::int64_t rmin = 0;  // rmin of the last tuple with v <= q
    while (pos < t_.size() && t_[pos].v <= q) {
      rmin += t_[pos].g;
      ++pos;
    }
    if (pos == 0) return 0;
    if (t_[pos - 1].v == q) {
      return rmin + t_[pos - 1].delta / 2;
    }
    if (pos == t_.size()) return n_;
    const std::int64_t hi = rmin + t_[pos].g + t_[pos].delta - 1;
    return (rmin + hi) / 2;
  }

  MemoryState snapshot() const override {
    MemoryState s;
    s.items.reserve(t_.size());
    for (const auto& t : t_) s.items.push_back(t.v);
    std::string& g = s.general;
    g.reserve(48 + 16 * t_.size());
    g += "gk|m=";
    append_int(g, m_);
    g += "|p=";
    g += policy_ == Compress::kGreedy ? '1' : '0';
    g += "|n=";
    append_int(g, n_);
    g += "|c=";
    append_int(g, since_compress_);
    g += "|t=";
    for (const auto& t : t_) {
      append_int(g, t.g);
      g += ':';
      append_int(g, t.delta);
      g += ',';
    }
    return s;
  }

  std::size_t item_count() const override { return t_.size(); }
  std::size_t peak_item_count() const override { return meter_.peak; }
  std::string name() const override {
    return policy_ == Compress::kGreedy ? "gk-greedy" : "gk";
  }

  const std::vector<GkTuple>& tuples() const { return t_; }
  std::int64_t processed() const { return n_; }

  // floor(2 * eps * n), the correctness budget every tuple must respect.
  std::int64_t cap() const { return 2 * n_ / m_; }

 private:
  static void append_int(std::string& out, std::int64_t x) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, end);
  }

  std::int64_t period() const { return std::max<std::int64_t>(1, m_ / 2); }

  // One left-to-right sweep. Folding tuple i into i+1 raises g_{i+1} by g_i;
  // the fold is legal while the combined tuple still respects cap(). Returns
  // whether anything was merged.
  bool compress_pass() {
    if (t_.size() < 3) return false;
    const std::int64_t budget = cap();
    std::vector<GkTuple> out;
    out.reserve(t_.size());
    out.push_back(t_[0]);
    std::int64_t carry = 0;
    for (std::size_t i = 1; i < t_.size(); ++i) {
      GkTuple cur = t_[i];
      cur.g += carry;
      carry = 0;
      if (i + 1 < t_.size() && cur.g + t_[i + 1].g + t_[i + 1].delta <= budget) {
        carry = cur.g;
        continue;
      }
      out.push_back(std::move(cur));
    }
    const bool merged = out.size() < t_.size();
    t_ = std::move(out);
    if (merged) meter_.observe(t_.size());
    return merged;
  }

  std::int64_t m_;
  Compress policy_;
  std::vector<GkTuple> t_;
  std::int64_t n_ = 0;
  std::int64_t since_compress_ = 0;
  SpaceMeter meter_;
};

// Offline baseline: buffers the whole input, then keeps ceil(m/2) items at the
// odd multiples of eps * N. Not a streaming algorithm; the attack entry points
// reject it.
class OfflineSummary : public Summary {
 public:
  explicit OfflineSummary(std::int64_t m) : m_(m) {
    if (m < 2) throw InvalidEpsilon("offline needs eps <= 1/2, got 1/" + std::to_string(m));
  }

  void process(const Item& x) override {
    if (finalized_) throw Error("offline summary already finalized");
    buf_.push_back(x);
    meter_.observe(buf_.size());
  }

  // Selects items at ranks floor((2j-1) * N / m) clamped to [1, N].
  void finalize() const {
    if (finalized_) return;
    n_seen_ = static_cast<std::int64_t>(buf_.size());
    std::sort(buf_.begin(), buf_.end());
    const auto n = static_cast<std::int64_t>(buf_.size());
    std::vector<Item> sel;
    for (std::int64_t j = 1; 2 * j - 1 <= m_; ++j) {
      std::int64_t r = (2 * j - 1) * n / m_;
      r = std::max<std::int64_t>(1, std::min(n, r));
      if (n > 0) sel.push_back(buf_[static_cast<std::size_t>(r - 1)]);
    }
    buf_ = std::move(sel);
    finalized_ = true;
  }

  QueryAnswer query(const BigRat& phi) const override {
    require_fraction(phi);
    if (buf_.empty()) throw EmptySummary("offline");
    finalize();
    const auto k = static_cast<std::int64_t>(buf_.size());
    std::int64_t idx = std::max<std::int64_t>(1, std::min(k, to_i64(rat_floor(BigRat(phi * k)))));
    return {static_cast<std::size_t>(idx), buf_[static_cast<std::size_t>(idx - 1)]};
  }

  MemoryState snapshot() const override {
    MemoryState s;
    s.items = buf_;
    if (!finalized_) std::sort(s.items.begin(), s.items.end());
    s.general = "off|m=" + std::to_string(m_) + "|n=" + std::to_string(n()) +
                "|f=" + std::to_string(finalized_ ? 1 : 0);
    return s;
  }

  std::size_t item_count() const override { return buf_.size(); }
  std::size_t peak_item_count() const override { return meter_.peak; }
  std::string name() const override { return "offline"; }
  bool streaming() const override { return false; }

  std::int64_t n() const { return finalized_ ? n_seen_ : static_cast<std::int64_t>(buf_.size()); }

 private:
  std::int64_t m_;
  mutable std::vector<Item> buf_;
  mutable bool finalized_ = false;
  mutable std::int64_t n_seen_ = 0;
  SpaceMeter meter_;
};

inline std::unique_ptr<Summary> make_summary(const std::string& selector, std::int64_t m) {
  if (selector == "gk") return std::make_unique<GkSummary>(m, GkSummary::Compress::kPeriodic);
  if (selector == "gk-greedy") return std::make_unique<GkSummary>(m, GkSummary::Compress::kGreedy);
  if (selector == "offline") return std::make_unique<OfflineSummary>(m);
  throw ConfigError("unknown summary '" + selector + "'");
}

inline SummaryFactory summary_factory(const std::string& selector, std::int64_t m) {
  return [selector, m] { return make_summary(selector, m); };
}

}  // namespace qsgap
