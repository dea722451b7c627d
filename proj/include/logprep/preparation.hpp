// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "logprep/cell.hpp"
#include "logprep/family.hpp"
#include "logprep/report.hpp"
#include "logprep/scale.hpp"
#include "logprep/series.hpp"
#include "logprep/term.hpp"

namespace logprep {

constexpr double kDefaultTol = 1e-9;
constexpr int kUnitDepth = 6;

// Unit v on [-1,1]^s: polynomial table plus tail bound.
struct UnitSpec {
  SeriesPtr v;

  int s() const { return v ? v->arity : 0; }
  double eval(std::span<const double> z) const;
  // Explicit polynomial term in the given variables; the tail is dropped.
  Term polynomial_term(const std::vector<Term>& args) const;

  static UnitSpec constant(const Rational& c, int s = 0);
  static UnitSpec polynomial(int s, std::vector<Monomial> terms, double tail = 0.0);
};

// Interval positivity of v on [-1,1]^s with recursive subdivision.
// Witnesses inf/sup bound v over the box when verified.
VerificationReport check_unit(const UnitSpec& unit, int depth = kUnitDepth);

enum class Side { Above, Below };
const char* to_string(Side s);
Side side_from_string(const std::string& s);

struct GsaPreparedForm {
  std::string name;
  VarContext ctx;
  Term theta;
  Term a;
  Rational q;
  UnitSpec unit;
  std::vector<Term> b;
  std::vector<Rational> p;
  Side side = Side::Above;
  std::optional<double> eps;
};

struct LAPreparingTuple {
  std::string name;
  std::string scale_ref;
  LogScale scale;
  Term a;
  std::vector<Rational> q;  // length r+1
  UnitSpec unit;
  std::vector<Term> b;                    // length s
  std::vector<std::vector<Rational>> P;   // s rows of length r+1
  std::optional<int> zero_column_prefix;  // P in M_k
};

struct ERPreparingTuple {
  std::string name;
  int e = -1;
  LogScale scale;
  Term a;
  std::vector<Rational> q;
  UnitSpec unit;
  std::vector<Term> b;
  std::vector<std::vector<Rational>> P;
  // Absent exp_c means c = 0 and exp(c) = 1.
  std::optional<std::string> exp_c;
  std::shared_ptr<const ERPreparingTuple> c;
  std::vector<std::optional<std::string>> exp_d;  // empty or length s
  std::vector<std::shared_ptr<const ERPreparingTuple>> d;
};

VerificationReport verify_gsa(const GsaPreparedForm& form, const Term& f, const Cell& cell, const SamplePlan& plan,
                              double tol = kDefaultTol);

// Center, side, unit and equality checks at explicit points of the form's context.
VerificationReport verify_gsa_points(const GsaPreparedForm& form, const Term& f, std::span<const Point> points,
                                     double tol = kDefaultTol);

VerificationReport verify_la(const LAPreparingTuple& tuple, const Term& f, const Cell& cell, const SamplePlan& plan,
                             double tol = kDefaultTol);

// Several tuples sharing one center, each paired with its function.
VerificationReport verify_la_simultaneous(const std::vector<std::pair<LAPreparingTuple, Term>>& items,
                                          const Cell& cell, const SamplePlan& plan, double tol = kDefaultTol);

VerificationReport verify_family(const ExpFamily& family, const Cell& cell, const SamplePlan& plan,
                                 double tol = kDefaultTol);

VerificationReport verify_er(const ERPreparingTuple& tuple, const Term& f, const Cell& cell, const ExpFamily& family,
                             const SamplePlan& plan, double tol = kDefaultTol);

// Reassembles a * |Y|^q * exp(c) * v(phi) as a term.
Term er_product_term(const ERPreparingTuple& tuple, const ExpFamily& family);
Term la_product_term(const LAPreparingTuple& tuple);
Term gsa_product_term(const GsaPreparedForm& form);

VerificationReport verify_heir(const Term& g, const Cell& cell, const LogScale& witness, int l,
                               const SamplePlan& plan, double tol = kDefaultTol);

struct HeirCertificate {
  std::string name;
  Term g;
  LogScale witness;
  std::string witness_ref;  // document name when the witness is a reference
  int l = 1;
};

struct NiceTree;
using NiceArg = std::variant<Term, std::string, std::shared_ptr<const NiceTree>>;

// combinator(args) with the combinator written over t1..tk, one per argument.
struct NiceTree {
  Term combinator;
  std::vector<NiceArg> args;
};

VerificationReport verify_nice(const Term& g, const Cell& cell, const NiceTree& tree,
                               const std::vector<HeirCertificate>& heirs, const SamplePlan& plan,
                               double tol = kDefaultTol);

// Sample coverage of a region by a list of cells, points with x = 0 excluded.
VerificationReport verify_coverage(const Cell& region, const std::vector<Cell>& cells, const SamplePlan& plan);

}  // namespace logprep
