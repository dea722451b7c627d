// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "logprep/grammar.hpp"
#include "logprep/rewrite.hpp"
#include "support.hpp"

using namespace logprep;
using namespace logprep::testing;

namespace {

const VarContext kZero{0};
const VarContext kOne{1};

Term T(const std::string& text, VarContext ctx = kOne) { return parse_term(text, ctx); }

UnitSpec linear_unit(Rational slope) {
  return UnitSpec::polynomial(1, {Monomial{{0}, Rational(1)}, Monomial{{1}, slope}});
}

Cell open_interval(const char* lo, const char* hi) { return make_box_cell("X", 0, {}, T(lo, kZero), T(hi, kZero)); }

// Replays every obligation independently and checks the truncation count.
void expect_trusted(const RewriteOutput& out) {
  EXPECT_TRUE(out.report.verified()) << out.report.name << ": " << out.report.message;
  EXPECT_TRUE(out.trusted) << out.report.name;
  ASSERT_FALSE(out.obligations.empty());
  for (const Obligation& ob : out.obligations) {
    EXPECT_TRUE(replay(ob).verified()) << ob.name;
    if (!ob.live_truncation) continue;
    for (const Point& p : ob.points) {
      ASSERT_EQ(eval(ob.rhs, p, ob.ctx).truncation_misses, 0) << ob.name;
    }
  }
}

double max_rel_error(const RewriteOutput& out, const std::string& obligation) {
  for (const Obligation& ob : out.obligations) {
    if (ob.name == obligation) return replay(ob).witnesses.at("max_rel_error");
  }
  ADD_FAILURE() << "no obligation " << obligation;
  return INFINITY;
}

LogScale zero_scale(int r, VarContext ctx) {
  LogScale s{"zero", ctx, {}, {}, {}};
  for (int j = 0; j <= r; ++j) {
    s.center.push_back(Const(Rational(0)));
    s.signs.push_back(j == 0 ? 1 : -1);
  }
  return s;
}

LAPreparingTuple shifted_la() {
  LAPreparingTuple t;
  t.name = "shifted_la";
  t.scale = fixture_scale("ex237_scale");
  t.a = T("1");
  t.q = {Rational(1, 2), Rational(-1)};
  t.unit = linear_unit(Rational(1, 3));
  t.b = {T("1")};
  t.P = {{Rational(1), Rational(0)}};
  return t;
}

Cell thin_shifted_cell() {
  return make_box_cell("thin", 1, {{Rational(1, 20), Rational(19, 20)}}, T("1 / (1 + t1) + exp(-1 / t1) / 2"),
                       T("1 / (1 + t1) + exp(-1 / t1)"));
}

GsaPreparedForm zero_form(Rational q, UnitSpec unit, std::vector<Term> b, std::vector<Rational> p) {
  return GsaPreparedForm{"form", kOne, T("0"), T("1"), q, std::move(unit), std::move(b), std::move(p),
                         Side::Above, std::nullopt};
}

BetaMap log_beta() { return BetaMap{{T("log(x)", kZero)}, T("x", kZero), 0}; }

}  // namespace

TEST(Replay, DetectsMismatchAndTruncation) {
  Obligation ok{"same", kZero, T("x", kZero), T("x", kZero), {{0.5}, {0.7}}, 1e-9, true};
  EXPECT_TRUE(replay(ok).verified());
  Obligation bad{"shifted", kZero, T("x", kZero), T("x + 1/1000", kZero), {{0.5}}, 1e-9, true};
  EXPECT_TRUE(replay(bad).refuted());
  Obligation dead{"trunc", kZero, T("0", kZero), T("expstar(1/2, 1/2, x)", kZero), {{0.75}}, 1e-9, true};
  EXPECT_TRUE(replay(dead).refuted());
}

TEST(Collapse, TrivialTupleGivesY0) {
  LAPreparingTuple t;
  t.name = "id";
  t.scale = zero_scale(0, kOne);
  t.a = T("1");
  t.q = {Rational(1)};
  t.unit = UnitSpec::constant(Rational(1));
  Cell cell = fixture_cell("unit_cell");
  RewriteOutput out = collapse_la(t, T("x"), cell, SamplePlan::with_total(1, 1000, 0));
  expect_trusted(out);
  ASSERT_NE(out.find("G"), nullptr);
  EXPECT_EQ(max_rel_error(out, "f = G(eta, Y)"), 0.0);
}

TEST(Collapse, ShiftedScaleTuple) {
  Term f = T("abs(x - 1 / (1 + t1))^(1/2) * abs(log(abs(x - 1 / (1 + t1))) + 1 / t1)^(-1/1) * "
             "(1 + (x - 1 / (1 + t1)) / 3)");
  RewriteOutput out = collapse_la(shifted_la(), f, fixture_cell("ex237_cell"), SamplePlan::with_total(1, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "f = G(eta, Y)"), 1e-9);
}

TEST(Collapse, LogVariantOnPositiveFixture) {
  LAPreparingTuple t = decode_la(fixture_doc("la_linear"), fixtures().resolver());
  RewriteOutput out = collapse_la_log(t, fixture_term("la_linear_f", kOne), fixture_cell("unit_cell"),
                                      SamplePlan::with_total(1, 1000, 0));
  expect_trusted(out);
  EXPECT_NE(out.find("H"), nullptr);
}

TEST(Collapse, FailedPreconditionNotTrusted) {
  LAPreparingTuple t = decode_la(fixture_doc("la_broken"), fixtures().resolver());
  RewriteOutput out = collapse_la(t, fixture_term("la_linear_f", kOne), fixture_cell("unit_cell"),
                                  SamplePlan::with_total(1, 1000, 0));
  EXPECT_FALSE(out.trusted);
  EXPECT_FALSE(out.report.verified());
}

TEST(ReduceOrder, ZeroCenterScaleWithCenterWitness) {
  LogScale s = zero_scale(1, kOne);
  RewriteOutput out =
      reduce_order(s, T("1 / (1 + t1)"), 2.0, fixture_cell("ex237_cell"), SamplePlan::with_total(1, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "y_1 = y_1*"), 1e-9);
  EXPECT_LT(out.report.witnesses.at("order_after"), out.report.witnesses.at("order_before"));
}

TEST(ReduceOrder, ShiftedScaleOnThinCell) {
  RewriteOutput out = reduce_order(fixture_scale("ex237_scale"), T("exp(-1 / t1)"), 3.0, thin_shifted_cell(),
                                   SamplePlan::with_total(1, 1000, 0));
  expect_trusted(out);
  EXPECT_EQ(out.report.witnesses.at("order_before"), 1.0);
  EXPECT_EQ(out.report.witnesses.at("order_after"), 0.0);
}

TEST(ReduceOrder, FilteredRegionWithExpCenter) {
  LogScale s = fixture_scale("ex237_scale");
  Cell cell = fixture_cell("ex237_cell");
  const double M = 2.0;
  std::vector<Point> all = sample(cell, plan_for_scale(s, cell, SamplePlan::with_total(1, 4000, 0)));
  std::vector<Point> pts = region_filter(s, Region{RegionMode::Le, 1, M}, all);
  ASSERT_GE(pts.size(), 100u);
  RewriteOutput out = reduce_order(s, T("exp(-1 / t1)"), std::exp(M), cell, SamplePlan{}, pts);
  expect_trusted(out);
}

TEST(ReduceOrder, UnderstatedDeltaRefuted) {
  Cell cell = thin_shifted_cell();
  RewriteOutput out =
      reduce_order(fixture_scale("ex237_scale"), T("exp(-1 / t1)"), 1.5, cell, SamplePlan::with_total(1, 1000, 0));
  EXPECT_TRUE(out.report.refuted());
  EXPECT_FALSE(out.trusted);
  RewriteOutput wide = reduce_order(zero_scale(1, kOne), T("1 / (1 + t1)"), 1.2, fixture_cell("ex237_cell"),
                                    SamplePlan::with_total(1, 1000, 0));
  EXPECT_TRUE(wide.report.refuted());
}

TEST(EliminateExp, LogShiftInstance) {
  RewriteOutput out = eliminate_exp(T("x + t1"), {}, {T("log(x)", kZero)}, T("1"), 2.0, open_interval("1", "2"),
                                    SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  const EmittedTerm* G = out.find("G");
  ASSERT_NE(G, nullptr);
  for (double y : {0.1, 0.4, 0.69}) {
    EXPECT_NEAR(eval(G->term, Point{y, 0.0}, G->ctx).value, std::exp(y) + y, 1e-12);
  }
}

TEST(EliminateExp, IndependentOfZ) {
  Term F = T("t1^(2/1) + 3");
  RewriteOutput out = eliminate_exp(F, {}, {T("log(x)", kZero)}, T("1"), 2.0, open_interval("1", "2"),
                                    SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_TRUE(structurally_equal(out.find("G")->term, F));
}

TEST(EliminateExp, ExactCenterNeedsTinyDelta) {
  VarContext two{2};
  RewriteOutput out = eliminate_exp(T("x + t2", two), {T("x", kZero)}, {T("log(x)", kZero)}, T("t1", two), 1.001,
                                    open_interval("1", "2"), SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "F(y, z) = G(y)"), 1e-15);
}

TEST(EliminateExp, NonpositiveThetaRefuted) {
  RewriteOutput out = eliminate_exp(T("x + t1"), {}, {T("log(x)", kZero)}, T("-1"), 2.0, open_interval("1", "2"),
                                    SamplePlan::with_total(0, 1000, 0));
  EXPECT_TRUE(out.report.refuted());
  EXPECT_NE(out.report.message.find("log Theta undefined"), std::string::npos);
}

TEST(EliminateExp, UnderstatedDeltaRefuted) {
  RewriteOutput out = eliminate_exp(T("x + t1"), {}, {T("log(x)", kZero)}, T("1"), 1.5, open_interval("1", "2"),
                                    SamplePlan::with_total(0, 1000, 0));
  EXPECT_TRUE(out.report.refuted());
  EXPECT_FALSE(out.trusted);
}

TEST(LogOfPrepared, IdentityReducesToSlot) {
  GsaPreparedForm form = zero_form(Rational(1), UnitSpec::constant(Rational(1)), {}, {});
  RewriteOutput out = log_of_prepared(form, T("x"), log_beta(), open_interval("1/10", "3"),
                                      SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "log F(beta) = H(beta)"), 1e-15);
}

TEST(LogOfPrepared, SquareRoot) {
  GsaPreparedForm form = zero_form(Rational(1, 2), UnitSpec::constant(Rational(1)), {}, {});
  RewriteOutput out = log_of_prepared(form, T("x^(1/2)"), log_beta(), open_interval("1/10", "3"),
                                      SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "log F(beta) = H(beta)"), 1e-12);
}

TEST(LogOfPrepared, LinearUnit) {
  GsaPreparedForm form = zero_form(Rational(2), linear_unit(Rational(1, 2)), {T("1/2")}, {Rational(1)});
  RewriteOutput out = log_of_prepared(form, T("x^(2/1) * (1 + x / 4)"), log_beta(), open_interval("0", "1"),
                                      SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_LE(max_rel_error(out, "log F(beta) = H(beta)"), 1e-9);
}

TEST(LogOfPrepared, NonzeroCenterInvalid) {
  GsaPreparedForm form = zero_form(Rational(1), UnitSpec::constant(Rational(1)), {}, {});
  form.theta = T("1/2");
  RewriteOutput out = log_of_prepared(form, T("x - 1/2"), log_beta(), open_interval("1", "2"),
                                      SamplePlan::with_total(0, 1000, 0));
  EXPECT_EQ(out.report.verdict, Verdict::Invalid);
  EXPECT_FALSE(out.trusted);
}

TEST(Dichotomy, ZeroCenterSingleForm) {
  DichotomyInput in;
  in.beta_ctx = kOne;
  in.beta = log_beta();
  in.theta = T("0");
  in.forms.push_back({zero_form(Rational(1), UnitSpec::constant(Rational(1)), {}, {}), T("x"), true});
  RewriteOutput out = center_dichotomy(in, open_interval("1/10", "3"), SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_EQ(out.report.data.at("branch"), "zero-center");
  EXPECT_NE(out.find("H"), nullptr);
}

TEST(Dichotomy, NonzeroCenterHandsOffToElimination) {
  DichotomyInput in;
  in.beta_ctx = kOne;
  in.beta = log_beta();
  in.theta = T("1");
  GsaPreparedForm form{"near_one", kOne, T("1"), T("1"), Rational(1), UnitSpec::constant(Rational(1)),
                       {}, {}, Side::Above, 0.5};
  in.forms.push_back({form, T("x - 1"), false});
  in.F = T("x + t1");
  RewriteOutput out = center_dichotomy(in, open_interval("3/2", "19/10"), SamplePlan::with_total(0, 1000, 0));
  expect_trusted(out);
  EXPECT_EQ(out.report.data.at("branch"), "nonzero-center");
  EXPECT_DOUBLE_EQ(out.report.witnesses.at("delta"), 2.0);
}

TEST(Dichotomy, WideCenterEstimateRefuted) {
  DichotomyInput in;
  in.beta_ctx = kOne;
  in.beta = log_beta();
  in.theta = T("2");
  GsaPreparedForm form{"below_two", kOne, T("2"), T("1"), Rational(1), UnitSpec::constant(Rational(1)),
                       {}, {}, Side::Below, std::nullopt};
  in.forms.push_back({form, T("2 - x"), false});
  in.F = T("x");
  RewriteOutput out = center_dichotomy(in, open_interval("1", "2"), SamplePlan::with_total(0, 1000, 0));
  EXPECT_TRUE(out.report.refuted()) << out.report.message;
  EXPECT_FALSE(out.trusted);
}

TEST(RewriteProperty, LogDepth) {
  EXPECT_EQ(x_log_depth(T("log(abs(log(x)))"), kOne), 2);
  EXPECT_EQ(x_log_depth(T("log(t1) + x"), kOne), 0);
  EXPECT_EQ(x_log_depth(T("logstar(1/2, 2, x) + log(x)"), kOne), 1);
}
