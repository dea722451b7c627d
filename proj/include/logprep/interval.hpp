// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>

namespace logprep {

// Closed interval of doubles. Every operation rounds outward so the result
// encloses the exact real image; libm calls are padded by a few ulps.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval entire() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * lo + 0.5 * hi; }
};

double round_down(double v, int ulps = 1);
double round_up(double v, int ulps = 1);

Interval hull(const Interval& a, const Interval& b);
Interval hull(const Interval& a, double v);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);

// Reciprocal of an interval not containing zero.
Interval reciprocal(const Interval& a);
Interval iabs(const Interval& a);
Interval iexp(const Interval& a);
// log on a strictly positive interval.
Interval ilog(const Interval& a);
// |a|^q for rational q given as double, a strictly positive.
Interval ipow_pos(const Interval& a, double q);
// Integer power with sign handling.
Interval ipow_int(const Interval& a, int k);
// Real n-th root on a nonnegative interval (even n) or any interval (odd n).
Interval iroot(const Interval& a, int n);
Interval imin(const Interval& a, const Interval& b);
Interval imax(const Interval& a, const Interval& b);

}  // namespace logprep
