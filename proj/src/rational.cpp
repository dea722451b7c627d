// SPDX-License-Identifier: Apache-2.0
#include "logprep/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace logprep {

namespace {

__int128 wide_gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  if (!fits(n) || !fits(d)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::approximate(double x, std::int64_t max_den, int dir) {
  if (!std::isfinite(x)) throw std::domain_error("cannot rationalize non-finite value");
  if (max_den < 1) max_den = 1;
  double scaled = x * static_cast<double>(max_den);
  if (std::fabs(scaled) > 9.0e18) throw std::overflow_error("rational approximation overflow");
  double rounded = dir > 0 ? std::ceil(scaled) : (dir < 0 ? std::floor(scaled) : std::nearbyint(scaled));
  Rational r = from_wide(static_cast<__int128>(rounded), max_den);
  // Guard against the double product rounding the wrong way.
  if (dir > 0 && r.to_double() < x) r = r + Rational(1, max_den);
  if (dir < 0 && r.to_double() > x) r = r - Rational(1, max_den);
  return r;
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  std::size_t dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  bool neg = text[0] == '-';
  std::string ip = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
  std::string fp = text.substr(dot + 1);
  if (fp.size() > 17) throw std::overflow_error("decimal literal too long");
  __int128 den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  __int128 num = (ip.empty() ? 0 : std::stoll(ip)) * den + (fp.empty() ? 0 : std::stoll(fp));
  return from_wide(neg ? -num : num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace logprep
