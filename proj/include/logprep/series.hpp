// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "logprep/interval.hpp"
#include "logprep/rational.hpp"

namespace logprep {

struct Monomial {
  std::vector<int> exponents;  // one entry per argument
  Rational coeff;
};

// Truncated power series on [-1,1]^arity: a finite coefficient table plus a
// bound on the neglected tail valid on the whole closed box.
struct SeriesDef {
  std::string name;
  int arity = 1;
  std::vector<Monomial> terms;
  double tail_bound = 0.0;

  double eval(const double* z) const;
  // Enclosure of the polynomial part over a box (no tail).
  Interval enclose_poly(const Interval* box) const;
  // Enclosure of the represented function: polynomial part widened by the tail.
  Interval enclose(const Interval* box) const;

  bool same_as(const SeriesDef& o) const;
};

using SeriesPtr = std::shared_ptr<const SeriesDef>;

// Univariate series from dense coefficients c_0..c_{k-1}.
SeriesPtr make_univariate(std::string name, const std::vector<Rational>& coeffs, double tail);

class SeriesRegistry {
public:
  // arctan, sin, cos, each with 20 coefficients.
  static const SeriesRegistry& builtin();

  void add(SeriesPtr def);
  SeriesPtr find(const std::string& name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, SeriesPtr> defs_;
};

}  // namespace logprep
