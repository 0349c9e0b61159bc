#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "massey/errors.hpp"

namespace massey {

// Exact rational number on 64-bit numerator/denominator.
//
// Always normalized: gcd(num, den) == 1 and den > 0. Every operation is
// computed in 128-bit intermediates and throws ResourceError instead of
// wrapping when the normalized result does not fit in 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) + b.num_, 1);
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.num_ == 0 || b.num_ == 0) return Rational{};
    if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) * b.num_, 1);
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw UsageError("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Canonical "p/q" form; the denominator is always printed.
  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  // Accepts "p", "p/q", with optional leading sign.
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw ConfigError("malformed rational '" + std::string(text) + "'");
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) throw ConfigError("malformed rational '" + std::string(text) + "'");
      __int128 v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw ConfigError("malformed rational '" + std::string(text) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > (static_cast<__int128>(1) << 63)) throw ConfigError("rational out of range '" + std::string(text) + "'");
      }
      return narrow(neg ? -v : v);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    std::int64_t d = parse_int(text.substr(slash + 1));
    if (d == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  static std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw ResourceError("rational overflow beyond 64 bits");
    return static_cast<std::int64_t>(v);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (d != 1) {
      __int128 g = gcd128(n, d);
      if (g > 1) {
        n /= g;
        d /= g;
      }
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw UsageError("rational with zero denominator");
    *this = from_wide(num, den);
  }
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace massey
