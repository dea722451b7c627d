// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "logprep/cell.hpp"
#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"
#include "logprep/scale.hpp"
#include "support.hpp"

using namespace logprep;
using namespace logprep::testing;

namespace {

const VarContext kOne{1};

Term T(const std::string& text, VarContext ctx = kOne) { return parse_term(text, ctx); }

Cell unit_box() { return make_box_cell("unit", 1, {{Rational(0), Rational(1)}}, T("0"), T("1")); }

SamplePlan grid(int t_count, int x_count, std::uint64_t seed = 0) {
  SamplePlan plan;
  plan.counts = {t_count, x_count};
  plan.seed = seed;
  return plan;
}

// Root of log y = y / 4 above e, by bisection.
double log_quarter_root() {
  double lo = 4.0;
  double hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (std::log(mid) > mid / 4 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Cell, GridOnUnitBoxHasInteriorPoints) {
  Cell cell = unit_box();
  std::vector<Point> pts = sample(cell, grid(10, 10));
  ASSERT_EQ(pts.size(), 100u);
  for (const Point& p : pts) {
    EXPECT_TRUE(cell_contains(cell, p));
    EXPECT_GE(p[0], 0.0);
    EXPECT_LE(p[0], 1.0);
  }
}

TEST(Cell, ShiftedCellSamplesRespectBounds) {
  Cell cell = fixture_cell("ex237_cell");
  std::vector<Point> pts = sample(cell, SamplePlan::with_total(1, 10000, 7));
  ASSERT_FALSE(pts.empty());
  for (const Point& p : pts) {
    double t = p[0];
    double lo = 1 / (1 + t) + std::exp(-2 / t + 2 * std::exp(-1 / t));
    double hi = 1 / (1 + t) + std::exp(-1 / t);
    EXPECT_GE(t, 0.05);
    EXPECT_LE(t, 0.95);
    EXPECT_GT(p[1], lo);
    EXPECT_LT(p[1], hi);
  }
}

TEST(Cell, EmptyFiberIsDegenerate) {
  Cell cell = make_box_cell("flat", 1, {{Rational(0), Rational(1)}}, T("0"), T("0"));
  EXPECT_THROW(sample(cell, grid(4, 4)), DegenerateCell);
}

TEST(Cell, SamplingIsDeterministic) {
  Cell cell = fixture_cell("ex237_cell");
  for (TStrategy ts : {TStrategy::StratifiedGrid, TStrategy::LowDiscrepancy}) {
    for (FiberStrategy fs : {FiberStrategy::Uniform, FiberStrategy::GeometricLower, FiberStrategy::GeometricUpper}) {
      SamplePlan plan = SamplePlan::with_total(1, 2000, 42);
      plan.t_strategy = ts;
      plan.fiber_strategy = fs;
      EXPECT_EQ(sample(cell, plan), sample(cell, plan));
    }
  }
}

TEST(Cell, LiftByIdentityKeepsFibers) {
  Cell cell = fixture_cell("ex237_cell");
  SamplePlan plan = SamplePlan::with_total(1, 400, 0);
  Cell lifted = lift(cell, Var(1), plan);
  for (const Point& t : sample_t(cell, plan)) {
    auto [lo, hi] = fiber_at(cell, t);
    auto [llo, lhi] = fiber_at(lifted, t);
    EXPECT_NEAR(llo, lo, 1e-15);
    EXPECT_NEAR(lhi, hi, 1e-15);
  }
}

TEST(Cell, LiftByNegationSwapsFibers) {
  Cell cell = make_box_cell("wedge", 1, {{Rational(1, 2), Rational(2)}}, T("t1"), T("2 * t1 + 1"));
  SamplePlan plan = SamplePlan::with_total(1, 400, 0);
  Cell lifted = lift(cell, T("-x"), plan);
  for (const Point& t : sample_t(cell, plan)) {
    auto [llo, lhi] = fiber_at(lifted, t);
    EXPECT_NEAR(llo, -(2 * t[0] + 1), 1e-12);
    EXPECT_NEAR(lhi, -t[0], 1e-12);
  }
}

TEST(Cell, LiftedPointsStayInLiftedFibers) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  SamplePlan plan = SamplePlan::with_total(1, 2000, 3);
  Term logy0 = Log(Abs(scale_terms(s)[0]));
  Cell lifted = lift(cell, logy0, plan);
  for (const Point& p : sample(cell, plan)) {
    Point q{p[0], eval(logy0, p, kOne).value};
    auto [lo, hi] = fiber_at(lifted, Point{p[0]});
    EXPECT_GE(q[1], lo - 1e-9 * (1 + std::abs(lo)));
    EXPECT_LE(q[1], hi + 1e-9 * (1 + std::abs(hi)));
  }
}

TEST(Cell, SimpleCellCheck) {
  EXPECT_TRUE(simple_cell_check(unit_box(), grid(8, 8)).verified());
  EXPECT_FALSE(simple_cell_check(fixture_cell("ex237_cell"), grid(8, 8)).verified());
  Cell straddle = make_box_cell("straddle", 1, {{Rational(0), Rational(1)}}, T("-1"), T("1"));
  EXPECT_FALSE(simple_cell_check(straddle, grid(8, 8)).verified());
}

TEST(Region, VacuousForZeroScale) {
  Cell cell = unit_box();
  LogScale s{"z", kOne, {T("0")}, {1}, {}};
  std::vector<Point> pts = sample(cell, grid(10, 10));
  EXPECT_EQ(region_filter(s, Region{RegionMode::Gt, 1, 5.0}, pts).size(), pts.size());
}

TEST(Region, HugeBoundKeepsEverything) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  std::vector<Point> pts = sample(cell, SamplePlan::with_total(1, 1000, 0));
  EXPECT_EQ(region_filter(s, Region{RegionMode::Le, 1, 1e300}, pts).size(), pts.size());
}

TEST(Region, PartitionOfShiftedCell) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  std::vector<Point> pts = sample(cell, SamplePlan::with_total(1, 10000, 0));
  for (double M : {0.5, 2.0, 10.0}) {
    auto gt = region_filter(s, Region{RegionMode::Gt, 1, M}, pts);
    auto le = region_filter(s, Region{RegionMode::Le, 1, M}, pts);
    EXPECT_EQ(gt.size() + le.size(), pts.size()) << "M=" << M;
    for (const Point& p : gt) EXPECT_GT(std::abs(scale_values(s, p).y[1]), M);
    for (const Point& p : le) EXPECT_LE(std::abs(scale_values(s, p).y[1]), M);
  }
}

TEST(Scale, ZeroScaleValue) {
  VarContext ctx{0};
  LogScale s{"z", ctx, {Const(Rational(0))}, {1}, {}};
  EXPECT_EQ(scale_values(s, Point{0.5}).y, std::vector<double>{0.5});
}

TEST(Scale, ShiftedScaleValuesByRecurrence) {
  LogScale s = fixture_scale("ex237_scale");
  ASSERT_EQ(s.r(), 1);
  double y0 = 0.8 * std::exp(-2.0);
  ScaleValues v = scale_values(s, Point{0.5, 1 / 1.5 + y0});
  ASSERT_EQ(v.y.size(), 2u);
  EXPECT_NEAR(v.y[0], y0, 1e-15);
  EXPECT_NEAR(v.y[1], std::log(0.8), 1e-12);
}

TEST(Scale, VanishingLevelBreaksDown) {
  VarContext ctx{0};
  LogScale s{"b", ctx, {Const(Rational(1)), Const(Rational(0))}, {1, 1}, {}};
  try {
    scale_values(s, Point{1.0});
    FAIL() << "expected a breakdown";
  } catch (const ScaleBreakdown& e) {
    EXPECT_EQ(e.level(), 1);
  }
}

TEST(Scale, NonzeroCenterOnSimpleCellRefuted) {
  VarContext ctx{0};
  Cell cell = make_box_cell("simple", 0, {}, Const(Rational(0)), Const(Rational(1)));
  LogScale s{"one", ctx, {Const(Rational(1))}, {-1}, {}};
  SamplePlan plan = SamplePlan::with_total(0, 1000, 0);
  plan.fiber_strategy = FiberStrategy::GeometricLower;
  VerificationReport rep = verify_scale(s, cell, plan);
  EXPECT_TRUE(rep.refuted()) << rep.message;
  ASSERT_TRUE(rep.counterexample.has_value());
  EXPECT_LT((*rep.counterexample)[0], 0.5);
}

TEST(Scale, PowProductExamples) {
  VarContext ctx{0};
  LogScale z{"z", ctx, {Const(Rational(0))}, {1}, {}};
  EXPECT_EQ(pow_product(z, Point{2.0}, {Rational(0)}), 1.0);
  EXPECT_DOUBLE_EQ(pow_product(z, Point{2.0}, {Rational(1)}), 2.0);

  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  std::vector<Rational> q{Rational(1, 2), Rational(-1)};
  Term qt = pow_product_term(s, q);
  for (const Point& p : sample(cell, grid(10, 10))) {
    ScaleValues v = scale_values(s, p);
    double direct = std::sqrt(std::abs(v.y[0])) / std::abs(v.y[1]);
    EXPECT_NEAR(pow_product(s, p, q), direct, 1e-12 * direct);
    EXPECT_NEAR(eval(qt, p, kOne).value, direct, 1e-12 * direct);
  }
}

TEST(Scale, LiftAtTopLevelGivesZeroScale) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  SamplePlan plan = SamplePlan::with_total(1, 1000, 0);
  Cell lifted = lift(cell, Log(Abs(scale_terms(s)[0])), plan);
  LogScale mu = lift_scale(s, 1, lifted, plan);
  ASSERT_EQ(mu.r(), 0);
  for (double t : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(eval(mu.center[0], Point{t, 0.0}, kOne).value, -1.0 / t, 1e-12);
  }
  for (const Point& p : sample(cell, plan)) {
    ScaleValues v = scale_values(s, p);
    Point q{p[0], std::log(std::abs(v.y[0]))};
    EXPECT_NEAR(scale_values(mu, q).y[0], v.y[1], 1e-9 * (1 + std::abs(v.y[1])));
  }
}

TEST(Scale, LiftThenRecoverGivesNextCenter) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  SamplePlan plan = SamplePlan::with_total(1, 1000, 0);
  Cell lifted = lift(cell, Log(Abs(scale_terms(s)[0])), plan);
  LogScale mu = lift_scale(s, 1, lifted, plan);
  CenterRecovery rec = recover_center([&](const Point& p) { return scale_values(mu, p).y; }, lifted, plan);
  EXPECT_TRUE(rec.report.verified()) << rec.report.message;
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    EXPECT_NEAR(rec.theta[i][0], -1.0 / rec.points[i][0], 1e-9);
  }
}

TEST(Scale, RecoveryOfZeroCenter) {
  Cell cell = unit_box();
  LogScale s{"z", kOne, {T("0")}, {1}, {}};
  CenterRecovery rec = recover_center([&](const Point& p) { return scale_values(s, p).y; }, cell, grid(10, 10));
  EXPECT_TRUE(rec.report.verified());
  for (const auto& th : rec.theta) EXPECT_EQ(th[0], 0.0);
}

TEST(Scale, RecoveryFlagsCorruptedPoint) {
  Cell cell = fixture_cell("ex237_cell");
  LogScale s = fixture_scale("ex237_scale");
  SamplePlan plan = grid(10, 10);
  Point bad = sample(cell, plan)[37];
  CenterRecovery rec = recover_center(
      [&](const Point& p) {
        std::vector<double> y = scale_values(s, p).y;
        if (p == bad) y[1] += 0.5;
        return y;
      },
      cell, plan);
  EXPECT_TRUE(rec.report.refuted());
  ASSERT_TRUE(rec.report.counterexample.has_value());
  EXPECT_EQ(*rec.report.counterexample, bad);
}

TEST(Scale, FindMCalibration) {
  VarContext ctx{0};
  Cell cell = make_box_cell("simple", 0, {}, Const(Rational(0)), Const(Rational(1)));
  LogScale z{"z", ctx, {Const(Rational(0)), Const(Rational(0))}, {1, -1}, {}};
  SamplePlan plan = SamplePlan::with_total(0, 10000, 0);
  plan.fiber_strategy = FiberStrategy::GeometricLower;
  plan.boundary_margin = 1e-20;

  FindMResult trivial = find_M(z, cell, 0.0, {0.0}, plan);
  EXPECT_NEAR(trivial.M, std::exp(1.0), 1e-12);

  double root = log_quarter_root();
  EXPECT_NEAR(root, 8.613, 1e-3);
  FindMResult log_case = find_M(z, cell, 0.0, {1.0}, plan);
  EXPECT_TRUE(log_case.report.verified()) << log_case.report.message;
  EXPECT_NEAR(log_case.M, root, 0.01 * root);

  FindMResult const_case = find_M(z, cell, 10.0, {0.0}, plan);
  EXPECT_TRUE(const_case.report.verified()) << const_case.report.message;
  EXPECT_NEAR(const_case.M, 40.0, 0.4);
}

TEST(ScaleProperty, CenterRecoveryOnShiftedScales) {
  Cell cell = fixture_cell("ex237_cell");
  for (const char* name : {"ex237_scale", "ex237_scale_hat"}) {
    LogScale s = fixture_scale(name);
    SamplePlan plan = SamplePlan::with_total(1, 2000, 5);
    CenterRecovery rec = recover_center([&](const Point& p) { return scale_values(s, p).y; }, cell, plan);
    EXPECT_TRUE(rec.report.verified()) << name;
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
      for (int j = 0; j <= s.r(); ++j) {
        double truth = eval(s.center[j], rec.points[i], kOne).value;
        EXPECT_NEAR(rec.theta[i][j], truth, 1e-9 * (1 + std::abs(truth))) << name << " level " << j;
      }
    }
  }
}

// Random 1-scales with Theta_0 = a/(1+t), Theta_1 = -b/t on the cell where y_1 lies in (-2c, -c/2).
TEST(ScaleProperty, LevelBoundedByLogOfPreviousLevel) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> ai(1, 12), bi(4, 20), ci(1, 5);
  int verified = 0;
  for (int i = 0; i < 120; ++i) {
    Rational a(ai(rng), 4);
    Rational b(bi(rng), 4);
    Rational c(ci(rng), 10);
    Term theta0 = Const(a) * Inv(Const(Rational(1)) + Var(0));
    Term theta1 = Neg(Const(b) * Inv(Var(0)));
    Term lower = theta0 + Exp(theta1 - Const(c * Rational(2)));
    Term upper = theta0 + Exp(theta1 - Const(c / Rational(2)));
    Cell cell = make_box_cell("random", 1, {{Rational(1, 2), Rational(1)}}, lower, upper);
    LogScale s{"random", kOne, {theta0, theta1}, {1, -1}, {}};
    SamplePlan plan = SamplePlan::with_total(1, 400, i);
    VerificationReport rep = verify_scale(s, cell, plan);
    if (!rep.verified()) continue;
    ++verified;
    for (const Point& p : sample(cell, plan)) {
      ScaleValues v = scale_values(s, p);
      EXPECT_LE(std::abs(v.y[1]), std::abs(std::log(std::abs(v.y[0]))));
    }
  }
  EXPECT_GE(verified, 100);
}
