// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "logprep/interval.hpp"
#include "logprep/rational.hpp"
#include "logprep/series.hpp"

namespace logprep {

// Parameters t1..tn occupy indices 0..n-1; x is index n.
struct VarContext {
  int n = 0;
  int x_index() const { return n; }
  int dim() const { return n + 1; }
};

enum class Op {
  Const,
  Var,
  Add,
  Mul,
  Neg,
  Inv,
  Root,
  Abs,
  Pow,
  Log,
  Exp,
  Min,
  Max,
  TruncLog,
  TruncExp,
  Series,
  Guarded,
};

enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };

class Node;

// Shared immutable handle to an expression node.
class Term {
public:
  Term() = default;
  explicit Term(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  bool valid() const { return static_cast<bool>(p_); }
  const Node& node() const { return *p_; }
  const Node* operator->() const { return p_.get(); }
  Op op() const;
  const std::vector<Term>& kids() const;
  const Term& kid(std::size_t i) const { return kids()[i]; }

private:
  std::shared_ptr<const Node> p_;
};

struct Atom {
  Cmp cmp = Cmp::Lt;
  Term lhs;
  Term rhs;
};

struct Branch {
  std::vector<Atom> guard;  // conjunction
  bool otherwise = false;   // holds iff no other branch holds
  Term value;
};

class Node {
public:
  Op op = Op::Const;
  Rational q;   // Const value, Pow exponent, truncation lower end
  Rational q2;  // truncation upper end
  int index = 0;  // Var index, Root degree
  std::vector<Term> kids;
  SeriesPtr series;
  std::vector<Branch> branches;
  std::size_t hash = 0;
};

inline Op Term::op() const { return p_->op; }
inline const std::vector<Term>& Term::kids() const { return p_->kids; }

Term Const(const Rational& r);
Term Var(int index);
Term Add(const Term& a, const Term& b);
Term Mul(const Term& a, const Term& b);
Term Neg(const Term& a);
Term Inv(const Term& a);
Term Root(int degree, const Term& a);
Term Abs(const Term& a);
Term Pow(const Term& base, const Rational& q);
Term Log(const Term& a);
Term Exp(const Term& a);
Term Min(const Term& a, const Term& b);
Term Max(const Term& a, const Term& b);
Term TruncLog(const Rational& lo, const Rational& hi, const Term& a);
Term TruncExp(const Rational& lo, const Rational& hi, const Term& a);
Term Series(SeriesPtr def, std::vector<Term> args);
Term Guarded(std::vector<Branch> branches);

Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator-(const Term& a);
Term operator*(const Term& a, const Term& b);
Term operator/(const Term& a, const Term& b);

bool structurally_equal(const Term& a, const Term& b);
bool operator==(const Term& a, const Term& b);

struct EvalResult {
  double value = 0.0;
  int convention_hits = 0;
  bool domain_flag = false;
  int truncation_misses = 0;  // TruncLog/TruncExp evaluated on the zero branch
  int guard_overlaps = 0;     // more than one Guarded predicate held
  bool finite() const;
};

EvalResult eval(const Term& t, std::span<const double> point, const VarContext& ctx);

struct IntervalResult {
  Interval value;
  bool inconclusive = false;  // a totalization branch intersects the box
};

IntervalResult eval_interval(const Term& t, std::span<const Interval> box, const VarContext& ctx);

Term substitute(const Term& t, const std::map<int, Term>& assignment);

// Rebuilds bottom-up: fn sees each node after its children were transformed.
Term transform(const Term& t, const std::function<Term(const Term&)>& fn);
// Renumbers variables: index i becomes mapping[i].
Term remap_vars(const Term& t, const std::vector<int>& mapping);

bool uses_var(const Term& t, int index);
int max_var_index(const Term& t);  // -1 for closed terms
bool depends_only_on_t(const Term& t, const VarContext& ctx);
bool contains_op(const Term& t, Op op);
std::size_t node_count(const Term& t);

// Exact folding of closed subterms and of additive/multiplicative zeros.
Term fold_constants(const Term& t);
bool is_zero_term(const Term& t);

}  // namespace logprep
