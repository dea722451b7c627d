// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "logprep/classify.hpp"
#include "logprep/grammar.hpp"
#include "logprep/preparation.hpp"
#include "logprep/similarity.hpp"
#include "support.hpp"

using namespace logprep;
using namespace logprep::testing;

namespace {

const VarContext kZero{0};
const VarContext kOne{1};

Term T(const std::string& text, VarContext ctx = kOne) { return parse_term(text, ctx); }

SamplePlan plan_of(int n, std::size_t total = 2000, std::uint64_t seed = 0) {
  return SamplePlan::with_total(n, total, seed);
}

UnitSpec linear_unit(Rational slope) {
  return UnitSpec::polynomial(1, {Monomial{{0}, Rational(1)}, Monomial{{1}, slope}});
}

LAPreparingTuple la_fixture(const std::string& name) {
  return decode_la(fixture_doc(name), fixtures().resolver());
}

GsaPreparedForm gsa_fixture(const std::string& name) { return decode_gsa(fixture_doc(name)); }

ERPreparingTuple er_fixture(const std::string& name) {
  return decode_er(fixture_doc(name), fixtures().resolver());
}

// sqrt|y_0| / |y_1| * (1 + y_0 / 3) on the shifted cell.
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

Term shifted_la_f() {
  return T("abs(x - 1 / (1 + t1))^(1/2) * abs(log(abs(x - 1 / (1 + t1))) + 1 / t1)^(-1/1) * "
           "(1 + (x - 1 / (1 + t1)) / 3)");
}

struct LaCase {
  LAPreparingTuple tuple;
  Term f;
  Cell cell;
};

std::vector<LaCase> la_cases() {
  return {
      {la_fixture("la_linear"), fixture_term("la_linear_f", kOne), fixture_cell("unit_cell")},
      {shifted_la(), shifted_la_f(), fixture_cell("ex237_cell")},
  };
}

struct ErCase {
  ERPreparingTuple tuple;
  Term f;
  Cell cell;
  ExpFamily family;
  VarContext ctx;
};

std::vector<ErCase> er_cases() {
  return {
      {er_fixture("xe_er"), fixture_term("xe_f", kOne), fixture_cell("xe_cell"),
       decode_family(fixture_doc("xe_family")), kOne},
      {er_fixture("intro_er"), fixture_term("intro_exp", kZero), fixture_cell("intro_cell"),
       decode_family(fixture_doc("intro_family")), kZero},
  };
}

Term shifted(const Term& t) { return Add(t, Const(Rational(1, 10))); }

}  // namespace

TEST(Unit, PositiveLinearUnit) {
  VerificationReport rep = check_unit(linear_unit(Rational(1, 2)));
  ASSERT_TRUE(rep.verified()) << rep.message;
  EXPECT_LE(rep.witnesses.at("inf"), 0.5);
  EXPECT_GE(rep.witnesses.at("sup"), 1.5);
  EXPECT_GT(rep.witnesses.at("inf"), 0.0);
}

TEST(Unit, TouchingZeroRefuted) {
  EXPECT_FALSE(check_unit(linear_unit(Rational(-1))).verified());
  EXPECT_TRUE(check_unit(linear_unit(Rational(2))).refuted());
}

TEST(Unit, TailWidensEnclosure) {
  UnitSpec tight = UnitSpec::polynomial(1, {Monomial{{0}, Rational(1)}}, 0.5);
  UnitSpec loose = UnitSpec::polynomial(1, {Monomial{{0}, Rational(1)}}, 1.0);
  EXPECT_TRUE(check_unit(tight).verified());
  EXPECT_FALSE(check_unit(loose).verified());
}

TEST(Unit, OddPowersKeepSign) {
  UnitSpec v = UnitSpec::polynomial(1, {Monomial{{0}, Rational(2)}, Monomial{{3}, Rational(1)}});
  Term poly = v.polynomial_term({Var(0)});
  for (double z : {-0.9, -0.3, 0.4, 1.0}) {
    EXPECT_NEAR(eval(poly, Point{z}, kZero).value, 2 + z * z * z, 1e-15);
    double arg[] = {z};
    EXPECT_NEAR(v.eval(arg), 2 + z * z * z, 1e-15);
  }
}

TEST(Gsa, IdentityOnUnitFiber) {
  Cell cell = fixture_cell("intro_cell");
  GsaPreparedForm form{"id", kZero, T("0", kZero), T("1", kZero), Rational(1), UnitSpec::constant(Rational(1)),
                       {}, {}, Side::Above, std::nullopt};
  EXPECT_TRUE(verify_gsa(form, T("x", kZero), cell, plan_of(0)).verified());
}

TEST(Gsa, LinearUnitAndExponentMutation) {
  Cell cell = fixture_cell("intro_cell");
  GsaPreparedForm form{"lin", kZero, T("0", kZero), T("1", kZero), Rational(1), linear_unit(Rational(1, 2)),
                       {T("1", kZero)}, {Rational(1)}, Side::Above, std::nullopt};
  Term f = T("x * (1 + x / 2)", kZero);
  EXPECT_TRUE(verify_gsa(form, f, cell, plan_of(0)).verified());
  form.q = Rational(2);
  EXPECT_TRUE(verify_gsa(form, f, cell, plan_of(0)).refuted());
}

TEST(Gsa, ShiftedCenterFixture) {
  VerificationReport rep =
      verify_gsa(gsa_fixture("gsa_shift"), fixture_term("gsa_shift_f", kOne), fixture_cell("gsa_shift_cell"), plan_of(1));
  EXPECT_TRUE(rep.verified()) << rep.message;
}

TEST(Gsa, StraddlingCenterRefuted) {
  GsaPreparedForm form = gsa_fixture("gsa_shift");
  form.theta = T("3 * t1 / 2");
  VerificationReport rep =
      verify_gsa(form, fixture_term("gsa_shift_f", kOne), fixture_cell("gsa_shift_cell"), plan_of(1));
  EXPECT_TRUE(rep.refuted());
}

TEST(La, LinearFixture) {
  LaCase c = la_cases()[0];
  EXPECT_TRUE(verify_la(c.tuple, c.f, c.cell, plan_of(1)).verified());
}

TEST(La, BrokenFixtureHasCounterexample) {
  VerificationReport rep =
      verify_la(la_fixture("la_broken"), fixture_term("la_linear_f", kOne), fixture_cell("unit_cell"), plan_of(1));
  EXPECT_TRUE(rep.refuted());
  EXPECT_TRUE(rep.counterexample.has_value());
}

TEST(La, ZeroScaleAgreesWithGsa) {
  LaCase c = la_cases()[0];
  GsaPreparedForm form{"as_gsa", kOne, T("0"), c.tuple.a, c.tuple.q[0], c.tuple.unit, c.tuple.b,
                       {c.tuple.P[0][0]}, Side::Above, std::nullopt};
  SamplePlan plan = plan_of(1);
  EXPECT_EQ(verify_la(c.tuple, c.f, c.cell, plan).verdict, verify_gsa(form, c.f, c.cell, plan).verdict);
  Term wrong = T("x * (1 + t1 * x / 3)");
  EXPECT_EQ(verify_la(c.tuple, wrong, c.cell, plan).verdict, verify_gsa(form, wrong, c.cell, plan).verdict);
}

TEST(La, ShiftedScaleFixtureAtFullBudget) {
  VerificationReport rep =
      verify_la(shifted_la(), shifted_la_f(), fixture_cell("ex237_cell"), plan_of(1, 10000, 0), 1e-9);
  EXPECT_TRUE(rep.verified()) << rep.message;
}

TEST(La, ZeroColumnPrefixViolation) {
  LAPreparingTuple t = shifted_la();
  t.zero_column_prefix = 1;
  VerificationReport rep = verify_la(t, shifted_la_f(), fixture_cell("ex237_cell"), plan_of(1));
  EXPECT_TRUE(rep.refuted());
}

TEST(La, SimultaneousSharedCenter) {
  LAPreparingTuple a = shifted_la();
  LAPreparingTuple b = shifted_la();
  b.name = "doubled";
  b.a = T("2");
  Cell cell = fixture_cell("ex237_cell");
  EXPECT_TRUE(
      verify_la_simultaneous({{a, shifted_la_f()}, {b, Mul(Const(Rational(2)), shifted_la_f())}}, cell, plan_of(1))
          .verified());
  b.scale = fixture_scale("ex237_scale_hat");
  EXPECT_TRUE(
      verify_la_simultaneous({{a, shifted_la_f()}, {b, Mul(Const(Rational(2)), shifted_la_f())}}, cell, plan_of(1))
          .refuted());
}

TEST(Er, FixturesVerify) {
  for (const ErCase& c : er_cases()) {
    VerificationReport rep = verify_er(c.tuple, c.f, c.cell, c.family, plan_of(c.ctx.n));
    EXPECT_TRUE(rep.verified()) << c.tuple.name << ": " << rep.message;
  }
}

TEST(Er, LevelZeroMatchesLa) {
  LaCase c = la_cases()[0];
  ERPreparingTuple er;
  er.name = "as_er";
  er.e = 0;
  er.scale = c.tuple.scale;
  er.a = c.tuple.a;
  er.q = c.tuple.q;
  er.unit = c.tuple.unit;
  er.b = c.tuple.b;
  er.P = c.tuple.P;
  ExpFamily empty{"none", kOne, {}, {}};
  SamplePlan plan = plan_of(1);
  EXPECT_EQ(verify_er(er, c.f, c.cell, empty, plan).verdict, verify_la(c.tuple, c.f, c.cell, plan).verdict);
  EXPECT_TRUE(verify_er(er, c.f, c.cell, empty, plan).verified());
}

TEST(Er, NestingMismatchRefuted) {
  ErCase c = er_cases()[0];
  c.tuple.e = 0;
  EXPECT_TRUE(verify_er(c.tuple, c.f, c.cell, c.family, plan_of(1)).refuted());
}

TEST(Er, MissingMemberInvalid) {
  ErCase c = er_cases()[0];
  c.tuple.exp_c = "absent";
  EXPECT_EQ(verify_er(c.tuple, c.f, c.cell, c.family, plan_of(1)).verdict, Verdict::Invalid);
}

TEST(Heir, TrivialHeirOfZeroCenter) {
  LogScale zero{"z", kOne, {T("0"), T("0")}, {1, -1}, {}};
  EXPECT_TRUE(verify_heir(T("1"), fixture_cell("unit_cell"), zero, 1, plan_of(1)).verified());
}

TEST(Heir, ShiftedScaleHeirAndSignFlip) {
  HeirCertificate heir = decode_heir(fixture_doc("ex237_heir"), fixtures().resolver());
  Cell cell = fixture_cell("ex237_cell");
  EXPECT_TRUE(verify_heir(heir.g, cell, heir.witness, heir.l, plan_of(1)).verified());
  EXPECT_TRUE(verify_heir(T("exp(1 / t1)"), cell, heir.witness, heir.l, plan_of(1)).refuted());
}

TEST(Nice, EmptyFamilyLogAnalytic) {
  Cell cell = fixture_cell("ex237_cell");
  NiceTree tree{T("t1 + log(t2)", VarContext{2}), {NiceArg{T("t1^(2/1)")}, NiceArg{T("1 + t1")}}};
  EXPECT_TRUE(verify_nice(T("t1^(2/1) + log(1 + t1)"), cell, tree, {}, plan_of(1)).verified());
}

TEST(Nice, ShiftedCenterTreeAndFault) {
  NiceCertificate nice = decode_nice(fixture_doc("ex237_nice"), fixtures().resolver());
  Cell cell = fixture_cell("ex237_cell");
  EXPECT_TRUE(verify_nice(nice.g, cell, nice.tree, nice.heirs, plan_of(1)).verified());
  EXPECT_TRUE(verify_nice(Add(nice.g, Const(Rational(1, 10))), cell, nice.tree, nice.heirs, plan_of(1)).refuted());
}

TEST(Nice, UnknownMemberInvalid) {
  NiceCertificate nice = decode_nice(fixture_doc("ex237_nice"), fixtures().resolver());
  EXPECT_EQ(verify_nice(nice.g, fixture_cell("ex237_cell"), nice.tree, {}, plan_of(1)).verdict, Verdict::Invalid);
}

TEST(Coverage, SplitFiber) {
  Cell region = fixture_cell("intro_cell");
  Cell left = make_box_cell("left", 0, {}, T("0", kZero), T("3/5", kZero));
  Cell right = make_box_cell("right", 0, {}, T("1/2", kZero), T("1", kZero));
  EXPECT_TRUE(verify_coverage(region, {left, right}, plan_of(0)).verified());
  EXPECT_TRUE(verify_coverage(region, {left}, plan_of(0)).refuted());
}

TEST(PreparationProperty, LeadingTermLaw) {
  for (const LaCase& c : la_cases()) {
    SamplePlan plan = plan_of(1);
    ASSERT_TRUE(verify_la(c.tuple, c.f, c.cell, plan).verified()) << c.tuple.name;
    VerificationReport unit = check_unit(c.tuple.unit);
    double delta = std::max(unit.witnesses.at("sup"), 1.0 / unit.witnesses.at("inf"));
    Term leading = Mul(c.tuple.a, pow_product_term(c.tuple.scale, c.tuple.q));
    std::vector<Point> pts = sample(c.cell, plan_for_scale(c.tuple.scale, c.cell, plan));
    EXPECT_TRUE(check_similar(c.f, leading, pts, delta, c.tuple.scale.ctx).verified()) << c.tuple.name;
  }
}

TEST(PreparationProperty, MutationSensitivity) {
  for (const LaCase& c : la_cases()) {
    for (std::size_t j = 0; j < c.tuple.q.size(); ++j) {
      LAPreparingTuple m = c.tuple;
      m.q[j] = m.q[j] + Rational(1, 2);
      EXPECT_TRUE(verify_la(m, c.f, c.cell, plan_of(1)).refuted()) << c.tuple.name << " q" << j;
    }
    LAPreparingTuple m = c.tuple;
    m.scale.center[0] = shifted(m.scale.center[0]);
    EXPECT_TRUE(verify_la(m, c.f, c.cell, plan_of(1)).refuted()) << c.tuple.name << " center";
  }

  GsaPreparedForm form = gsa_fixture("gsa_shift");
  Term gf = fixture_term("gsa_shift_f", kOne);
  Cell gc = fixture_cell("gsa_shift_cell");
  GsaPreparedForm mq = form;
  mq.q = mq.q + Rational(1, 2);
  EXPECT_TRUE(verify_gsa(mq, gf, gc, plan_of(1)).refuted()) << "gsa q";
  GsaPreparedForm mc = form;
  mc.theta = shifted(mc.theta);
  EXPECT_TRUE(verify_gsa(mc, gf, gc, plan_of(1)).refuted()) << "gsa center";

  for (const ErCase& c : er_cases()) {
    for (std::size_t j = 0; j < c.tuple.q.size(); ++j) {
      ERPreparingTuple m = c.tuple;
      m.q[j] = m.q[j] + Rational(1, 2);
      EXPECT_TRUE(verify_er(m, c.f, c.cell, c.family, plan_of(c.ctx.n)).refuted()) << c.tuple.name << " q" << j;
    }
    ERPreparingTuple m = c.tuple;
    m.scale.center[0] = shifted(m.scale.center[0]);
    EXPECT_TRUE(verify_er(m, c.f, c.cell, c.family, plan_of(c.ctx.n)).refuted()) << c.tuple.name << " center";
  }
}

TEST(PreparationProperty, SimpleCellRefutesNonzeroCenter) {
  Cell cell = fixture_cell("unit_cell");
  ASSERT_TRUE(simple_cell_check(cell, plan_of(1)).verified());
  LaCase base = la_cases()[0];
  for (const char* theta : {"-1/10", "-1/2", "-2", "-t1", "-t1^(2/1) - 1/100"}) {
    LAPreparingTuple t = base.tuple;
    t.scale.center[0] = T(theta);
    SamplePlan plan = plan_of(1);
    plan.fiber_strategy = FiberStrategy::GeometricLower;
    VerificationReport rep = verify_la(t, Add(base.f, T(theta)), cell, plan);
    EXPECT_TRUE(rep.refuted()) << theta;
    ASSERT_NE(rep.find("scale"), nullptr);
    EXPECT_TRUE(rep.find("scale")->refuted()) << theta;
  }
}

TEST(PreparationProperty, ErLevelBoundsExpNumber) {
  for (const ErCase& c : er_cases()) {
    ASSERT_TRUE(verify_er(c.tuple, c.f, c.cell, c.family, plan_of(c.ctx.n)).verified());
    Term product = er_product_term(c.tuple, c.family);
    EXPECT_LE(exp_number_bound(product, c.family, c.ctx).bound, c.tuple.e) << c.tuple.name;
  }
}
