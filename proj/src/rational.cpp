#include "odx/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <ostream>

namespace odx {

namespace {

std::int64_t checked_narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::of(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rational();
  __int128 g = gcd128(n, d);
  Rational q;
  q.num_ = checked_narrow(n / g);
  q.den_ = checked_narrow(d / g);
  return q;
}

Rational::Rational(std::int64_t n, std::int64_t d) { *this = of(n, d); }

Rational Rational::operator-() const {
  Rational q;
  q.num_ = -num_;
  q.den_ = den_;
  return q;
}

Rational& Rational::operator+=(const Rational& o) {
  *this = of((__int128)num_ * o.den_ + (__int128)o.num_ * den_, (__int128)den_ * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = of((__int128)num_ * o.den_ - (__int128)o.num_ * den_, (__int128)den_ * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = of((__int128)num_ * o.num_, (__int128)den_ * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  *this = of((__int128)num_ * o.den_, (__int128)den_ * o.num_);
  return *this;
}

Rational Rational::inverse() const {
  if (num_ == 0) throw std::domain_error("inverse of zero");
  return of(den_, num_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
    if (ns.empty() || ds.empty()) throw std::invalid_argument("bad rational literal: " + s);
    std::size_t pn = 0, pd = 0;
    const std::int64_t n = std::stoll(ns, &pn);
    const std::int64_t d = std::stoll(ds, &pd);
    if (pn != ns.size() || pd != ds.size())
      throw std::invalid_argument("bad rational literal: " + s);
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    const std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (fp.empty() || fp.size() > 18) throw std::invalid_argument("bad decimal literal: " + s);
    for (char c : fp)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("bad decimal literal: " + s);
    std::size_t pi = 0;
    std::int64_t ipart = ip.empty() || ip == "-" || ip == "+" ? 0 : std::stoll(ip, &pi);
    if (!ip.empty() && ip != "-" && ip != "+" && pi != ip.size())
      throw std::invalid_argument("bad decimal literal: " + s);
    __int128 den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    __int128 frac = 0;
    for (char c : fp) frac = frac * 10 + (c - '0');
    const bool neg = !ip.empty() && ip[0] == '-';
    __int128 num = (__int128)(neg ? -ipart : ipart) * den + frac;
    if (neg) num = -num;
    return of(num, den);
  }
  std::size_t pn = 0;
  const std::int64_t n = std::stoll(s, &pn);
  if (pn != s.size()) throw std::invalid_argument("bad rational literal: " + s);
  return Rational(n);
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace odx
