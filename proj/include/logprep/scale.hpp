// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logprep/cell.hpp"
#include "logprep/report.hpp"
#include "logprep/term.hpp"

namespace logprep {

struct EpsWitness {
  bool theta_zero = false;
  double value = 0.0;
};

struct LogScale {
  std::string name;
  VarContext ctx;
  std::vector<Term> center;  // Theta_0..Theta_r, t-only
  std::vector<int> signs;    // +1 / -1 per level
  std::vector<std::optional<EpsWitness>> eps;  // empty or r+1 entries

  int r() const { return static_cast<int>(center.size()) - 1; }
  void validate() const;
};

// y_0 = x - Theta_0, y_j = log|y_{j-1}| - Theta_j as terms.
std::vector<Term> scale_terms(const LogScale& s);

struct ScaleValues {
  std::vector<double> y;
  bool convention = false;  // a center evaluation hit a totalization branch
};

// Throws ScaleBreakdown(j) when y_{j-1} = 0.
ScaleValues scale_values(const LogScale& s, std::span<const double> point);

// Picks geometric-toward-lower when Theta_0 coincides with the cell's lower bound.
SamplePlan plan_for_scale(const LogScale& s, const Cell& cell, const SamplePlan& plan);

VerificationReport verify_scale(const LogScale& s, const Cell& cell, const SamplePlan& plan);

struct CenterRecovery {
  std::vector<Point> points;
  std::vector<std::vector<double>> theta;  // per point: Theta_0..Theta_r
  double max_spread = 0.0;
  VerificationReport report;
};

CenterRecovery recover_center(const std::function<std::vector<double>(const Point&)>& values_at, const Cell& cell,
                              const SamplePlan& plan, double tol = 1e-9);

// |Y|^{(x) q} = exp(sum q_j log|y_j|), zero exponents skipped.
double pow_product(const LogScale& s, std::span<const double> point, const std::vector<Rational>& q);
double pow_product_values(const std::vector<double>& y, const std::vector<Rational>& q);
Term pow_product_term(const LogScale& s, const std::vector<Rational>& q);

// (r-l)-scale (mu_l..mu_r) on lift(C, log|y_{l-1}|) with center (Theta_l..Theta_r).
LogScale lift_scale(const LogScale& s, int l, const Cell& lifted_cell, const SamplePlan& plan);

double iterated_exp(int r, double v);
double iterated_log(int k, double v);

enum class RegionMode { Gt, Le };

struct Region {
  RegionMode mode = RegionMode::Gt;
  int level = 1;  // only for Le
  double M = 1.0;
};

std::vector<Point> region_filter(const LogScale& s, const Region& region, std::span<const Point> points);

struct FindMResult {
  double M = 0.0;
  VerificationReport report;
};

FindMResult find_M(const LogScale& s, const Cell& cell, double c, const std::vector<double>& lambda,
                   const SamplePlan& plan);

}  // namespace logprep
