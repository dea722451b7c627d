// SPDX-License-Identifier: Apache-2.0
#include "logprep/series.hpp"

#include <algorithm>
#include <cmath>

namespace logprep {

namespace {

constexpr int kCoefficients = 20;
constexpr int kMaxPieces = 64;

double univariate_poly(const std::vector<double>& c, double z) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Interval univariate_naive(const std::vector<double>& c, const Interval& z) {
  Interval acc = Interval::point(0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    acc = acc + Interval::point(c[k]) * ipow_int(z, static_cast<int>(k));
  }
  return acc;
}

// Mean value form on each piece of a uniform subdivision.
Interval univariate_tight(const std::vector<double>& c, const Interval& z) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  int pieces = std::isfinite(z.width()) && z.width() > 0 ? kMaxPieces : 1;
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < pieces; ++i) {
    double a = z.lo + (z.hi - z.lo) * i / pieces;
    double b = i + 1 == pieces ? z.hi : z.lo + (z.hi - z.lo) * (i + 1) / pieces;
    Interval piece{a, b};
    double m = piece.mid();
    Interval pm = univariate_naive(c, Interval::point(m));
    Interval mv = pm + univariate_naive(d, piece) * (piece - Interval::point(m));
    Interval nv = univariate_naive(c, piece);
    Interval best{std::max(mv.lo, nv.lo), std::min(mv.hi, nv.hi)};
    out = hull(out, best);
  }
  return out;
}

}  // namespace

double SeriesDef::eval(const double* z) const {
  if (arity == 1) {
    std::vector<double> c;
    for (const auto& m : terms) {
      std::size_t k = static_cast<std::size_t>(m.exponents[0]);
      if (c.size() <= k) c.resize(k + 1, 0.0);
      c[k] += m.coeff.to_double();
    }
    return univariate_poly(c, z[0]);
  }
  double acc = 0.0;
  for (const auto& m : terms) {
    double v = m.coeff.to_double();
    for (int i = 0; i < arity; ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) v *= z[i];
    }
    acc += v;
  }
  return acc;
}

Interval SeriesDef::enclose_poly(const Interval* box) const {
  if (arity == 1) {
    std::vector<double> c;
    for (const auto& m : terms) {
      std::size_t k = static_cast<std::size_t>(m.exponents[0]);
      if (c.size() <= k) c.resize(k + 1, 0.0);
      c[k] += m.coeff.to_double();
    }
    return univariate_tight(c, box[0]);
  }
  Interval acc = Interval::point(0.0);
  for (const auto& m : terms) {
    Interval v = Interval::point(m.coeff.to_double());
    for (int i = 0; i < arity; ++i) v = v * ipow_int(box[i], m.exponents[i]);
    acc = acc + v;
  }
  return acc;
}

Interval SeriesDef::enclose(const Interval* box) const {
  Interval p = enclose_poly(box);
  return {round_down(p.lo - tail_bound), round_up(p.hi + tail_bound)};
}

bool SeriesDef::same_as(const SeriesDef& o) const {
  if (name != o.name || arity != o.arity || tail_bound != o.tail_bound || terms.size() != o.terms.size()) return false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].exponents != o.terms[i].exponents || !(terms[i].coeff == o.terms[i].coeff)) return false;
  }
  return true;
}

SeriesPtr make_univariate(std::string name, const std::vector<Rational>& coeffs, double tail) {
  auto def = std::make_shared<SeriesDef>();
  def->name = std::move(name);
  def->arity = 1;
  def->tail_bound = tail;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!coeffs[k].is_zero()) def->terms.push_back({{static_cast<int>(k)}, coeffs[k]});
  }
  return def;
}

const SeriesRegistry& SeriesRegistry::builtin() {
  static const SeriesRegistry reg = [] {
    SeriesRegistry r;
    std::vector<Rational> at(kCoefficients, Rational(0));
    std::vector<Rational> sn(kCoefficients, Rational(0));
    std::vector<Rational> cs(kCoefficients, Rational(0));
    std::int64_t fact = 1;
    for (int k = 0; k < kCoefficients; ++k) {
      if (k > 0) fact *= k;
      int sgn = (k / 2) % 2 == 0 ? 1 : -1;
      if (k % 2 == 1) {
        at[k] = Rational(sgn, k);
        sn[k] = Rational(sgn, fact);
      } else {
        cs[k] = Rational(sgn, fact);
      }
    }
    // Alternating tails on [-1,1]: first omitted term bounds the remainder.
    r.add(make_univariate("arctan", at, 1.0 / (kCoefficients + 1)));
    r.add(make_univariate("sin", sn, 1.0 / std::tgamma(kCoefficients + 2.0)));
    r.add(make_univariate("cos", cs, 1.0 / std::tgamma(kCoefficients + 1.0)));
    return r;
  }();
  return reg;
}

void SeriesRegistry::add(SeriesPtr def) { defs_[def->name] = std::move(def); }

SeriesPtr SeriesRegistry::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : it->second;
}

std::vector<std::string> SeriesRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& kv : defs_) out.push_back(kv.first);
  return out;
}

}  // namespace logprep
