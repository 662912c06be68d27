#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numeric>
#include <stdexcept>
#include <string>

namespace odx {

// Exact rational number on 64-bit numerator/denominator, always kept in
// lowest terms with a positive denominator. Arithmetic goes through 128-bit
// intermediates and throws std::overflow_error if a reduced result does not
// fit; at the problem sizes handled here that never triggers.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  static Rational of(__int128 n, __int128 d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }
  Rational inverse() const;

  double to_double() const { return double(num_) / double(den_); }

  // "p" for integers, "p/q" otherwise.
  std::string str() const;

  // Accepts "p", "p/q" and plain decimal strings like "2.5" (parsed exactly).
  static Rational parse(const std::string& s);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace odx

template <>
struct std::hash<odx::Rational> {
  std::size_t operator()(const odx::Rational& q) const noexcept {
    return std::hash<std::int64_t>()(q.num()) * 1000003u ^ std::hash<std::int64_t>()(q.den());
  }
};
