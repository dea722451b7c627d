// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logprep/rational.hpp"
#include "logprep/report.hpp"
#include "logprep/term.hpp"

namespace logprep {

// {(t,x) : t in t_box, lower(t) < x < upper(t)}; a missing bound is -inf / +inf.
struct Cell {
  std::string name;
  VarContext ctx;
  std::vector<std::pair<Rational, Rational>> t_box;
  std::optional<Term> lower;
  std::optional<Term> upper;
  bool nonzero_fiber = false;
  double zero_exclusion = 0.0;

  // Set on cells produced by lift(): points are images of base samples under f.
  std::shared_ptr<const Cell> base;
  std::optional<Term> lift_f;
  bool lift_decreasing = false;

  bool lifted() const { return static_cast<bool>(base); }
  void validate() const;
};

enum class TStrategy { StratifiedGrid, LowDiscrepancy };
enum class FiberStrategy { Auto, Uniform, GeometricLower, GeometricUpper };

const char* to_string(TStrategy s);
const char* to_string(FiberStrategy s);
TStrategy t_strategy_from_string(const std::string& s);
FiberStrategy fiber_strategy_from_string(const std::string& s);

struct SamplePlan {
  TStrategy t_strategy = TStrategy::StratifiedGrid;
  FiberStrategy fiber_strategy = FiberStrategy::Auto;
  std::vector<int> counts;  // n t-axes followed by the fiber axis
  std::uint64_t seed = 0;
  double boundary_margin = 1e-3;
  double unbounded_cap = 1e6;

  // Splits a total sample budget evenly over the n+1 axes (each count >= 2).
  static SamplePlan with_total(int n, std::size_t total, std::uint64_t seed = 0);
  std::size_t total() const;
  void validate(int n) const;
};

// Parameter samples: the t-part of the plan.
std::vector<Point> sample_t(const Cell& cell, const SamplePlan& plan);

// Fiber bounds at t; infinite markers are reported as +-inf.
std::pair<double, double> fiber_at(const Cell& cell, const Point& t);

// Auto resolves to uniform.
std::vector<Point> sample(const Cell& cell, const SamplePlan& plan);

Cell lift(const Cell& cell, const Term& f, const SamplePlan& plan);

VerificationReport simple_cell_check(const Cell& cell, const SamplePlan& plan);

// True iff lower(t) < x < upper(t) at the point.
bool cell_contains(const Cell& cell, const Point& p);

Cell make_box_cell(std::string name, int n, std::vector<std::pair<Rational, Rational>> t_box,
                   std::optional<Term> lower, std::optional<Term> upper);

}  // namespace logprep
