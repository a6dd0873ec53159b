#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "otkit/errors.hpp"

namespace otkit {

// Arbitrary-precision signed integer, sign-magnitude over 64-bit limbs
// (little-endian). Magnitude is always normalized: no leading zero
// limbs, and sign() == 0 iff the magnitude is empty.
class BigInt {
 public:
  BigInt() = default;

  BigInt(int64_t v) {  // NOLINT(google-explicit-constructor)
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // Avoid overflow on INT64_MIN.
    uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
    mag_.push_back(m);
  }

  BigInt(int v) : BigInt(static_cast<int64_t>(v)) {}  // NOLINT

  static BigInt from_uint64(uint64_t m) {
    BigInt r;
    if (m == 0) return r;
    r.sign_ = 1;
    r.mag_.push_back(m);
    return r;
  }

  static BigInt from_string(std::string_view s);

  // 2^k.
  static BigInt pow2(uint64_t k) {
    BigInt r;
    r.sign_ = 1;
    r.mag_.assign(k / 64 + 1, 0);
    r.mag_.back() = uint64_t{1} << (k % 64);
    return r;
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }
  bool odd() const { return !mag_.empty() && (mag_[0] & 1); }

  size_t bit_length() const {
    if (mag_.empty()) return 0;
    return (mag_.size() - 1) * 64 + std::bit_width(mag_.back());
  }

  size_t trailing_zero_bits() const {
    assert(!is_zero());
    size_t i = 0;
    while (mag_[i] == 0) ++i;
    return i * 64 + static_cast<size_t>(std::countr_zero(mag_[i]));
  }

  // Truncates; callers guard the range.
  uint64_t to_uint64() const { return mag_.empty() ? 0 : mag_[0]; }

  bool fits_uint64() const { return sign_ >= 0 && mag_.size() <= 1; }

  double to_double() const {
    if (is_zero()) return 0.0;
    size_t bits = bit_length();
    uint64_t top = 0;
    int exp = 0;
    if (bits <= 64) {
      top = mag_[0];
    } else {
      exp = static_cast<int>(bits - 64);
      for (int b = 63; b >= 0; --b) {
        size_t pos = static_cast<size_t>(exp) + static_cast<size_t>(b);
        uint64_t bitv = (mag_[pos / 64] >> (pos % 64)) & 1u;
        top |= bitv << b;
      }
    }
    double d = std::ldexp(static_cast<double>(top), exp);
    return sign_ < 0 ? -d : d;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }

  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    int c = cmp_mag(a.mag_, b.mag_);
    if (a.sign_ < 0) c = -c;
    return c <=> 0;
  }

  BigInt operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  BigInt abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
      return r;
    }
    int c = cmp_mag(a.mag_, b.mag_);
    if (c == 0) return r;
    if (c > 0) {
      r.mag_ = sub_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      r.mag_ = sub_mag(b.mag_, a.mag_);
      r.sign_ = b.sign_;
    }
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.mag_ = mul_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }

  // Truncated division: quotient rounds toward zero, remainder has the
  // sign of the dividend, |rem| < |b|.
  static void divmod_into(const BigInt& a, const BigInt& b, BigInt& quot, BigInt& rem) {
    if (b.sign_ == 0) throw argument_error("BigInt: division by zero");
    if (a.sign_ == 0) {
      quot = BigInt{};
      rem = BigInt{};
      return;
    }
    int c = cmp_mag(a.mag_, b.mag_);
    if (c < 0) {
      rem = a;
      quot = BigInt{};
      return;
    }
    auto [q, rm] = divmod_mag(a.mag_, b.mag_);
    quot.mag_ = std::move(q);
    quot.normalize_mag();
    quot.sign_ = quot.mag_.empty() ? 0 : a.sign_ * b.sign_;
    rem.mag_ = std::move(rm);
    rem.normalize_mag();
    rem.sign_ = rem.mag_.empty() ? 0 : a.sign_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod_into(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod_into(a, b, q, r);
    return r;
  }

  BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
  BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
  BigInt& operator*=(const BigInt& o) { return *this = *this * o; }
  BigInt& operator/=(const BigInt& o) { return *this = *this / o; }

  BigInt operator<<(size_t bits) const {
    if (is_zero() || bits == 0) return *this;
    BigInt r;
    r.sign_ = sign_;
    size_t limbs = bits / 64, sh = bits % 64;
    r.mag_.assign(mag_.size() + limbs + 1, 0);
    for (size_t i = 0; i < mag_.size(); ++i) {
      r.mag_[i + limbs] |= mag_[i] << sh;
      if (sh) r.mag_[i + limbs + 1] |= mag_[i] >> (64 - sh);
    }
    r.normalize_mag();
    return r;
  }

  BigInt operator>>(size_t bits) const {
    if (is_zero()) return *this;
    size_t limbs = bits / 64, sh = bits % 64;
    if (limbs >= mag_.size()) return BigInt{};
    BigInt r;
    r.sign_ = sign_;
    r.mag_.assign(mag_.size() - limbs, 0);
    for (size_t i = 0; i < r.mag_.size(); ++i) {
      uint64_t v = mag_[i + limbs] >> sh;
      if (sh && i + limbs + 1 < mag_.size()) v |= mag_[i + limbs + 1] << (64 - sh);
      r.mag_[i] = v;
    }
    r.normalize_mag();
    return r;
  }

  // gcd of magnitudes (binary algorithm); gcd(0, b) = |b|.
  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    size_t az = a.trailing_zero_bits(), bz = b.trailing_zero_bits();
    size_t common = std::min(az, bz);
    a = a >> az;
    b = b >> bz;
    // Both odd from here on; a unit operand settles it immediately.
    while (true) {
      if (a.is_one() || b.is_one()) return BigInt(1) << common;
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) break;
      if (c < 0) std::swap(a, b);
      a = a - b;
      if (a.is_zero()) break;
      a = a >> a.trailing_zero_bits();
    }
    return (a.is_zero() ? b : a) << common;
  }

  std::string to_string() const;

 private:
  void normalize_mag() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }

  static int cmp_mag(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static std::vector<uint64_t> add_mag(const std::vector<uint64_t>& a,
                                       const std::vector<uint64_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<uint64_t> r(big.size() + 1, 0);
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < big.size(); ++i) {
      unsigned __int128 s = carry + big[i] + (i < small.size() ? small[i] : 0u);
      r[i] = static_cast<uint64_t>(s);
      carry = s >> 64;
    }
    r[big.size()] = static_cast<uint64_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Requires a >= b.
  static std::vector<uint64_t> sub_mag(const std::vector<uint64_t>& a,
                                       const std::vector<uint64_t>& b) {
    std::vector<uint64_t> r(a.size(), 0);
    uint64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      uint64_t bi = i < b.size() ? b[i] : 0;
      uint64_t ai = a[i];
      uint64_t d = ai - bi - borrow;
      borrow = (ai < bi) || (ai == bi && borrow);
      r[i] = d;
    }
    assert(borrow == 0);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<uint64_t> mul_mag(const std::vector<uint64_t>& a,
                                       const std::vector<uint64_t>& b) {
    std::vector<uint64_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      unsigned __int128 carry = 0;
      unsigned __int128 ai = a[i];
      for (size_t j = 0; j < b.size(); ++j) {
        unsigned __int128 s = ai * b[j] + r[i + j] + carry;
        r[i + j] = static_cast<uint64_t>(s);
        carry = s >> 64;
      }
      size_t pos = i + b.size();
      while (carry) {
        unsigned __int128 s = carry + r[pos];
        r[pos] = static_cast<uint64_t>(s);
        carry = s >> 64;
        ++pos;
      }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth algorithm D over 64-bit limbs; requires |a| >= |b| > 0.
  static std::pair<std::vector<uint64_t>, std::vector<uint64_t>> divmod_mag(
      const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (b.size() == 1) {
      unsigned __int128 rem = 0;
      uint64_t d = b[0];
      std::vector<uint64_t> q(a.size(), 0);
      for (size_t i = a.size(); i-- > 0;) {
        unsigned __int128 cur = (rem << 64) | a[i];
        q[i] = static_cast<uint64_t>(cur / d);
        rem = cur % d;
      }
      std::vector<uint64_t> r;
      if (rem) r.push_back(static_cast<uint64_t>(rem));
      while (!q.empty() && q.back() == 0) q.pop_back();
      return {std::move(q), std::move(r)};
    }
    // Normalize so the top limb of b has its high bit set.
    int sh = 63 - static_cast<int>(std::bit_width(b.back()) - 1);
    auto shl = [&](const std::vector<uint64_t>& v) {
      std::vector<uint64_t> out(v.size() + 1, 0);
      for (size_t i = 0; i < v.size(); ++i) {
        out[i] |= v[i] << sh;
        if (sh) out[i + 1] |= v[i] >> (64 - sh);
      }
      return out;
    };
    std::vector<uint64_t> u = shl(a);
    std::vector<uint64_t> v = shl(b);
    while (!v.empty() && v.back() == 0) v.pop_back();
    size_t n = v.size(), m = u.size() - n;
    std::vector<uint64_t> q(m, 0);
    uint64_t vtop = v[n - 1];
    uint64_t vsecond = v[n - 2];
    for (size_t j = m; j-- > 0;) {
      unsigned __int128 num =
          (static_cast<unsigned __int128>(u[j + n]) << 64) | u[j + n - 1];
      unsigned __int128 qhat = num / vtop;
      unsigned __int128 rhat = num % vtop;
      constexpr unsigned __int128 kLimbMax = ~uint64_t{0};
      if (qhat > kLimbMax) {
        qhat = kLimbMax;
        rhat = num - qhat * vtop;
      }
      while (rhat <= kLimbMax &&
             qhat * vsecond > ((rhat << 64) | u[j + n - 2])) {
        --qhat;
        rhat += vtop;
      }
      // u[j .. j+n] -= qhat * v
      unsigned __int128 borrow = 0, carry = 0;
      for (size_t i = 0; i < n; ++i) {
        unsigned __int128 p = qhat * v[i] + carry;
        carry = p >> 64;
        uint64_t plow = static_cast<uint64_t>(p);
        uint64_t ui = u[i + j];
        uint64_t d = ui - plow - static_cast<uint64_t>(borrow);
        borrow = (ui < plow) || (ui == plow && borrow);
        u[i + j] = d;
      }
      unsigned __int128 top = static_cast<unsigned __int128>(u[j + n]) - carry - borrow;
      if (static_cast<__int128>(top) < 0) {
        // qhat was one too large: add v back.
        u[j + n] = static_cast<uint64_t>(top);
        --qhat;
        unsigned __int128 c2 = 0;
        for (size_t i = 0; i < n; ++i) {
          unsigned __int128 s = static_cast<unsigned __int128>(u[i + j]) + v[i] + c2;
          u[i + j] = static_cast<uint64_t>(s);
          c2 = s >> 64;
        }
        u[j + n] += static_cast<uint64_t>(c2);
      } else {
        u[j + n] = static_cast<uint64_t>(top);
      }
      q[j] = static_cast<uint64_t>(qhat);
    }
    // Remainder = u[0..n) shifted back.
    std::vector<uint64_t> r(u.begin(), u.begin() + static_cast<long>(n));
    if (sh) {
      for (size_t i = 0; i < r.size(); ++i) {
        uint64_t x = r[i] >> sh;
        if (i + 1 < n) x |= r[i + 1] << (64 - sh);
        r[i] = x;
      }
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
    return {std::move(q), std::move(r)};
  }

  int sign_ = 0;
  std::vector<uint64_t> mag_;
};

inline BigInt BigInt::from_string(std::string_view s) {
  if (s.empty()) throw argument_error("BigInt: empty string");
  bool neg = false;
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw argument_error("BigInt: no digits");
  BigInt r;
  const BigInt chunk_base(int64_t{1000000000000000000});
  size_t pos = i;
  size_t first = (s.size() - i) % 18;
  if (first == 0) first = 18;
  while (pos < s.size()) {
    size_t take = pos == i ? first : 18;
    uint64_t v = 0;
    for (size_t k = 0; k < take; ++k, ++pos) {
      char c = s[pos];
      if (c < '0' || c > '9') throw argument_error("BigInt: bad digit");
      v = v * 10 + static_cast<uint64_t>(c - '0');
    }
    r = r * chunk_base + BigInt(static_cast<int64_t>(v));
  }
  if (neg && !r.is_zero()) r.sign_ = -1;
  return r;
}

inline std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  std::vector<uint64_t> chunks;
  BigInt t = abs();
  const BigInt chunk_base(int64_t{1000000000000000000});
  while (!t.is_zero()) {
    BigInt q, r;
    divmod_into(t, chunk_base, q, r);
    chunks.push_back(r.to_uint64());
    t = std::move(q);
  }
  std::string out;
  if (sign_ < 0) out += '-';
  out += std::to_string(chunks.back());
  for (size_t i = chunks.size() - 1; i-- > 0;) {
    std::string part = std::to_string(chunks[i]);
    out += std::string(18 - part.size(), '0');
    out += part;
  }
  return out;
}

inline BigInt abs(const BigInt& x) { return x.abs(); }

struct DivResult {
  BigInt quot, rem;
};

inline DivResult divmod(const BigInt& a, const BigInt& b) {
  DivResult r;
  BigInt::divmod_into(a, b, r.quot, r.rem);
  return r;
}

}  // namespace otkit
