#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "otkit/bigint.hpp"
#include "otkit/errors.hpp"

namespace otkit {

// Exact rational number. Always canonical: denominator > 0 and
// gcd(|num|, den) == 1, so equality is structural and no rounding
// ever happens.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : num_(v), den_(1) {}      // NOLINT

  Rational(BigInt num, BigInt den = BigInt(1)) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  // Accepts "p/q" or a plain integer "p".
  static Rational from_string(std::string_view s) {
    size_t slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt::from_string(s));
    return Rational(BigInt::from_string(s.substr(0, slash)),
                    BigInt::from_string(s.substr(slash + 1)));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  int sign() const { return num_.sign(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_.is_one(); }

  Rational abs() const {
    Rational r = *this;
    r.num_ = r.num_.abs();
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw argument_error("Rational: inverse of zero");
    Rational r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.sign() < 0) {
      r.num_ = -r.num_;
      r.den_ = -r.den_;
    }
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw argument_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa <=> sb;
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  Rational pow(uint64_t e) const {
    Rational r(1), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  // Lowest-terms fraction, always with the slash: "3/4", "-7/1".
  std::string to_fraction_string() const { return num_.to_string() + "/" + den_.to_string(); }

  double to_double() const {
    if (is_zero()) return 0.0;
    // Shift each side into double range separately and restore the exponent.
    size_t nb = num_.bit_length(), db = den_.bit_length();
    size_t ns = nb > 64 ? nb - 64 : 0;
    size_t ds = db > 64 ? db - 64 : 0;
    double n = (num_ >> ns).to_double();
    double d = (den_ >> ds).to_double();
    return std::ldexp(n / d, static_cast<int>(ns) - static_cast<int>(ds));
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw argument_error("Rational: zero denominator");
    if (den_.sign() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }

  BigInt num_, den_;
};

inline Rational abs(const Rational& x) { return x.abs(); }

inline Rational min(Rational a, Rational b) { return b < a ? b : a; }
inline Rational max(Rational a, Rational b) { return a < b ? b : a; }

}  // namespace otkit
