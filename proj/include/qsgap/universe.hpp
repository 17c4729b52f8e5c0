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

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qsgap/errors.hpp"

namespace qsgap {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Floor division; cpp_int operator/ truncates toward zero.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Canonical rationals keep denominator(q) > 0, so this is a plain floor.
inline BigInt rat_floor(const BigRat& q) {
  return floor_div(numerator(q), denominator(q));
}

inline std::int64_t to_i64(const BigInt& v) { return static_cast<std::int64_t>(v); }

// Rounds to nearest integer, ties away from zero not needed here: ties round up.
inline BigInt rat_round(const BigRat& q) {
  return rat_floor(q + BigRat(1, 2));
}

// An element of the totally ordered universe: an exact rational in lowest terms
// with positive denominator. Comparisons are exact; no precision loss anywhere.
//
// Values constructed by repeated interval splitting grow wide, so the rational
// lives behind a shared immutable payload: copying an item is a reference
// bump, not a bignum copy. Each item also caches a floating approximation
// (sign, exponent, 64-bit mantissa) built from the leading bits of numerator
// and denominator; it settles every comparison whose operands are not nearly
// equal, and near ties fall back to exact integer arithmetic. A value hash is
// cached at construction.
class Item {
 public:
  Item() : p_(zero_payload()) { compute_key(); }
  Item(int v) : Item(BigRat(v)) {}           // NOLINT(runtime/explicit)
  Item(std::int64_t v) : Item(BigRat(v)) {}  // NOLINT(runtime/explicit)
  explicit Item(BigRat v) : p_(std::make_shared<const BigRat>(std::move(v))) {
    compute_key();
  }
  Item(const BigInt& num, const BigInt& den) {
    if (den == 0) throw BadFraction("zero denominator");
    BigRat q(num);
    q /= den;  // division normalizes sign and reduces
    p_ = std::make_shared<const BigRat>(std::move(q));
    compute_key();
  }

  const BigRat& value() const { return *p_; }

  // Reference accessors; the free numerator()/denominator() helpers copy.
  const BigInt& num() const { return p_->backend().data().numerator(); }
  const BigInt& den() const { return p_->backend().data().denominator(); }

  std::size_t hash() const { return hash_; }

  std::string str() const { return num().str() + "/" + den().str(); }

  // Accepts "num/den" or a bare integer "num"; normalizes to lowest terms.
  static Item parse(std::string_view text) {
    const auto slash = text.find('/');
    // The big-integer constructor accepts an empty string as zero; reject
    // empty numerators and denominators explicitly.
    if (text.empty() || slash == 0 || slash == text.size() - 1) {
      throw ParseError("item '" + std::string(text) + "': empty numerator or denominator");
    }
    try {
      if (slash == std::string_view::npos) {
        return Item(BigInt(std::string(text)), BigInt(1));
      }
      BigInt num{std::string(text.substr(0, slash))};
      BigInt den{std::string(text.substr(slash + 1))};
      return Item(num, den);
    } catch (const std::exception& e) {
      throw ParseError("item '" + std::string(text) + "': " + e.what());
    }
  }

  friend int compare(const Item& a, const Item& b) {
    if (a.p_ == b.p_) return 0;
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    int mag;  // ordering of |a| vs |b|
    const std::int64_t de = a.exp_ - b.exp_;
    if (de > 2) {
      mag = 1;
    } else if (de < -2) {
      mag = -1;
    } else {
      const auto A = static_cast<unsigned __int128>(a.man_) << (de + 2);
      const auto B = static_cast<unsigned __int128>(b.man_) << 2;
      // Mantissas carry under 2^-61 relative error, so a difference beyond
      // this band is decisive; anything closer compares exactly.
      const unsigned __int128 margin = (A + B) >> 58;
      if (A > B + margin) {
        mag = 1;
      } else if (B > A + margin) {
        mag = -1;
      } else {
        return compare_exact(a, b);
      }
    }
    return a.sign_ > 0 ? mag : -mag;
  }

  friend bool operator==(const Item& a, const Item& b) {
    if (a.p_ == b.p_) return true;
    if (a.hash_ != b.hash_ || a.sign_ != b.sign_ || a.exp_ != b.exp_ ||
        a.man_ != b.man_) {
      return false;
    }
    return a.num() == b.num() && a.den() == b.den();
  }
  friend bool operator!=(const Item& a, const Item& b) { return !(a == b); }
  friend bool operator<(const Item& a, const Item& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Item& a, const Item& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Item& a, const Item& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Item& a, const Item& b) { return compare(a, b) >= 0; }

 private:
  static const std::shared_ptr<const BigRat>& zero_payload() {
    static const std::shared_ptr<const BigRat> z = std::make_shared<const BigRat>(0);
    return z;
  }

  std::shared_ptr<const BigRat> p_;
  int sign_ = 0;           // sign of the value: -1, 0, +1
  std::int64_t exp_ = 0;   // msb(|num|) - msb(den); 0 when the value is 0
  std::uint64_t man_ = 0;  // |v| ~ man_ * 2^(exp_ - 63); 0 when the value is 0
  std::size_t hash_ = 0;   // value hash, cached at construction

  // 0-based index of the highest set bit of |x|; x must be nonzero.
  static std::int64_t bit_length(const BigInt& x) {
    const auto& be = x.backend();
    const std::size_t top = be.size() - 1;
    const auto hi = static_cast<std::uint64_t>(be.limbs()[top]);
    return static_cast<std::int64_t>(top * 64 + 63 - std::countl_zero(hi));
  }

  // Leading 64 bits of |x| when its highest set bit is bit L; bit 63 of the
  // result is always set.
  static std::uint64_t top_bits(const BigInt& x, std::int64_t L) {
    const auto& be = x.backend();
    const std::size_t sz = be.size();
    const auto* limbs = be.limbs();
    const unsigned used = static_cast<unsigned>(L % 64) + 1;  // bits in top limb
    auto hi = static_cast<std::uint64_t>(limbs[sz - 1]);
    if (used == 64) return hi;
    hi <<= 64 - used;
    if (sz >= 2) hi |= static_cast<std::uint64_t>(limbs[sz - 2]) >> used;
    return hi;
  }

  void compute_key() {
    const BigInt& n = num();
    const BigInt& d = den();
    sign_ = n.sign();
    if (sign_ != 0) {
      const std::int64_t ln = bit_length(n);
      const std::int64_t ld = bit_length(d);
      exp_ = ln - ld;
      const std::uint64_t n64 = top_bits(n, ln);
      const std::uint64_t d64 = top_bits(d, ld);
      man_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n64) << 63) / d64);
    }
    const std::size_t h1 = hash_value(n);
    const std::size_t h2 = hash_value(d);
    hash_ = h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }

  // e if x == 2^e, else -1; x must be positive.
  static std::int64_t pow2_exponent(const BigInt& x) {
    const auto& be = x.backend();
    const std::size_t sz = be.size();
    const auto* limbs = be.limbs();
    const auto top = static_cast<std::uint64_t>(limbs[sz - 1]);
    if ((top & (top - 1)) != 0) return -1;
    for (std::size_t i = 0; i + 1 < sz; ++i) {
      if (limbs[i] != 0) return -1;
    }
    return static_cast<std::int64_t>((sz - 1) * 64 + std::countr_zero(top));
  }

  // boost's generic rational ordering runs a division loop; at our operand
  // sizes direct integer comparison is far cheaper. Values are canonical
  // (lowest terms, positive denominator). Denominators here are mostly powers
  // of two (midpoint constructions), where one shift replaces the cross
  // multiplication.
  static int compare_exact(const Item& a, const Item& b) {
    const BigInt& an = a.num();
    const BigInt& bn = b.num();
    const int sa = an.sign();
    const int sb = bn.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    const BigInt& ad = a.den();
    const BigInt& bd = b.den();
    if (ad == bd) return an.compare(bn);  // covers the integer fast path
    const std::int64_t ea = pow2_exponent(ad);
    if (ea >= 0) {
      const std::int64_t eb = pow2_exponent(bd);
      if (eb >= 0) {
        if (ea < eb) {
          const BigInt lhs = an << (eb - ea);
          return lhs.compare(bn);
        }
        const BigInt rhs = bn << (ea - eb);
        return an.compare(rhs);
      }
    }
    const BigInt lhs = an * bd;
    const BigInt rhs = bn * ad;
    return lhs.compare(rhs);
  }
};

struct ItemHash {
  std::size_t operator()(const Item& x) const { return x.hash(); }
};

// Interval endpoint: finite item or an infinite sentinel. Sentinels compare
// below/above every finite item; two equal sentinels are incomparable as an
// interval, which between() rejects.
class Bound {
 public:
  enum Kind { kNegInf, kFinite, kPosInf };

  Bound() : kind_(kNegInf) {}
  explicit Bound(Item item) : kind_(kFinite), item_(std::move(item)) {}

  static Bound neg_inf() { return Bound(kNegInf); }
  static Bound pos_inf() { return Bound(kPosInf); }
  static Bound finite(Item item) { return Bound(std::move(item)); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == kFinite; }
  const Item& item() const {
    if (kind_ != kFinite) throw Error("bound is not finite: " + str());
    return item_;
  }

  std::string str() const {
    switch (kind_) {
      case kNegInf: return "-inf";
      case kPosInf: return "+inf";
      default: return item_.str();
    }
  }

  static Bound parse(std::string_view text) {
    if (text == "-inf") return neg_inf();
    if (text == "+inf" || text == "inf") return pos_inf();
    return Bound(Item::parse(text));
  }

 private:
  explicit Bound(Kind kind) : kind_(kind) {}

  Kind kind_;
  Item item_;
};

inline int compare(const Bound& a, const Bound& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() != Bound::kFinite) return 0;
  return compare(a.item(), b.item());
}

inline int compare(const Bound& a, const Item& b) {
  if (a.kind() == Bound::kNegInf) return -1;
  if (a.kind() == Bound::kPosInf) return 1;
  return compare(a.item(), b);
}

inline int compare(const Item& a, const Bound& b) { return -compare(b, a); }

inline bool operator==(const Bound& a, const Bound& b) { return compare(a, b) == 0; }
inline bool operator!=(const Bound& a, const Bound& b) { return compare(a, b) != 0; }
inline bool operator<(const Bound& a, const Bound& b) { return compare(a, b) < 0; }

// Deterministic witness strictly inside the open interval (lo, hi).
inline Item between(const Bound& lo, const Bound& hi) {
  if (compare(lo, hi) >= 0) {
    throw EmptyInterval("between(" + lo.str() + ", " + hi.str() + ")");
  }
  if (lo.is_finite() && hi.is_finite()) {
    return Item(BigRat(lo.item().value() + hi.item().value()) / 2);
  }
  if (!lo.is_finite() && hi.is_finite()) {
    return Item(BigRat(hi.item().value() - 1));
  }
  if (lo.is_finite() && !hi.is_finite()) {
    return Item(BigRat(lo.item().value() + 1));
  }
  return Item(0);
}

// m distinct increasing items strictly inside (lo, hi): equal dyadic steps
// from the left endpoint. The split count is a power of two so that every
// constructed value keeps a power-of-two denominator, which keeps later
// comparisons in the cheap shift-based path. Infinite endpoints fall back to
// unit steps anchored at the finite side, at 0 when both ends are infinite.
inline std::vector<Item> generate_increasing(const Bound& lo, const Bound& hi, std::int64_t m) {
  if (compare(lo, hi) >= 0) {
    throw EmptyInterval("generate_increasing(" + lo.str() + ", " + hi.str() + ")");
  }
  if (m < 0) throw Error("generate_increasing: negative count");
  std::vector<Item> out;
  out.reserve(static_cast<std::size_t>(m));
  if (lo.is_finite() && hi.is_finite()) {
    std::int64_t split = 1;
    while (split <= m) split <<= 1;
    const BigRat width = hi.item().value() - lo.item().value();
    const BigRat step = width / split;
    for (std::int64_t j = 1; j <= m; ++j) {
      out.emplace_back(BigRat(lo.item().value() + step * j));
    }
  } else if (lo.is_finite()) {
    for (std::int64_t j = 1; j <= m; ++j) out.emplace_back(BigRat(lo.item().value() + j));
  } else if (hi.is_finite()) {
    for (std::int64_t j = 1; j <= m; ++j) out.emplace_back(BigRat(hi.item().value() - (m + 1 - j)));
  } else {
    for (std::int64_t j = 1; j <= m; ++j) out.emplace_back(BigRat(j));
  }
  return out;
}

}  // namespace qsgap
