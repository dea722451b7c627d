// SPDX-License-Identifier: Apache-2.0
#include "logprep/interval.hpp"

#include <algorithm>

namespace logprep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kLibmUlps = 3;

Interval padded(double lo, double hi, int ulps) { return {round_down(lo, ulps), round_up(hi, ulps)}; }

}  // namespace

double round_down(double v, int ulps) {
  if (std::isnan(v)) return -kInf;
  for (int i = 0; i < ulps && v > -kInf; ++i) v = std::nextafter(v, -kInf);
  return v;
}

double round_up(double v, int ulps) {
  if (std::isnan(v)) return kInf;
  for (int i = 0; i < ulps && v < kInf; ++i) v = std::nextafter(v, kInf);
  return v;
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval hull(const Interval& a, double v) { return {std::min(a.lo, v), std::max(a.hi, v)}; }

Interval operator+(const Interval& a, const Interval& b) { return padded(a.lo + b.lo, a.hi + b.hi, 1); }

Interval operator-(const Interval& a, const Interval& b) { return padded(a.lo - b.hi, a.hi - b.lo, 1); }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  auto prod = [](double x, double y) {
    // 0 * inf is taken as 0: the factor is exactly zero on that side.
    if (x == 0.0 || y == 0.0) return 0.0;
    return x * y;
  };
  double c[4] = {prod(a.lo, b.lo), prod(a.lo, b.hi), prod(a.hi, b.lo), prod(a.hi, b.hi)};
  return padded(*std::min_element(c, c + 4), *std::max_element(c, c + 4), 1);
}

Interval reciprocal(const Interval& a) {
  if (a.contains_zero()) return Interval::entire();
  return padded(1.0 / a.hi, 1.0 / a.lo, 1);
}

Interval iabs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

Interval iexp(const Interval& a) {
  Interval r = padded(std::exp(a.lo), std::exp(a.hi), kLibmUlps);
  r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval ilog(const Interval& a) {
  double lo = a.lo <= 0 ? -kInf : std::log(a.lo);
  return padded(lo, std::log(a.hi), kLibmUlps);
}

Interval ipow_pos(const Interval& a, double q) {
  double lo = a.lo <= 0 ? (q > 0 ? 0.0 : kInf) : std::pow(a.lo, q);
  double hi = std::pow(a.hi, q);
  Interval r = padded(std::min(lo, hi), std::max(lo, hi), kLibmUlps);
  r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval ipow_int(const Interval& a, int k) {
  if (k == 0) return Interval::point(1.0);
  if (k == 1) return a;
  Interval base = (k % 2 == 0) ? iabs(a) : a;
  double lo = std::pow(base.lo, k);
  double hi = std::pow(base.hi, k);
  return padded(std::min(lo, hi), std::max(lo, hi), kLibmUlps);
}

Interval iroot(const Interval& a, int n) {
  auto rt = [n](double v) { return v < 0 ? -std::pow(-v, 1.0 / n) : std::pow(v, 1.0 / n); };
  Interval r = padded(rt(a.lo), rt(a.hi), kLibmUlps);
  if (a.lo >= 0) r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval imin(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

Interval imax(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace logprep
