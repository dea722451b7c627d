// SPDX-License-Identifier: Apache-2.0
#include "logprep/term.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "logprep/errors.hpp"

namespace logprep {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_rational(const Rational& r) {
  return mix(std::hash<std::int64_t>{}(r.num()), std::hash<std::int64_t>{}(r.den()));
}

Term finish(Node n) {
  std::size_t h = mix(static_cast<std::size_t>(n.op), hash_rational(n.q));
  h = mix(h, hash_rational(n.q2));
  h = mix(h, static_cast<std::size_t>(n.index));
  for (const auto& k : n.kids) h = mix(h, k->hash);
  if (n.series) h = mix(h, std::hash<std::string>{}(n.series->name));
  for (const auto& b : n.branches) {
    h = mix(h, b.otherwise ? 7u : 11u);
    for (const auto& a : b.guard) {
      h = mix(h, static_cast<std::size_t>(a.cmp));
      h = mix(h, a.lhs->hash);
      h = mix(h, a.rhs->hash);
    }
    h = mix(h, b.value->hash);
  }
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term unary(Op op, const Term& a) {
  Node n;
  n.op = op;
  n.kids = {a};
  return finish(std::move(n));
}

Term binary(Op op, const Term& a, const Term& b) {
  Node n;
  n.op = op;
  n.kids = {a, b};
  return finish(std::move(n));
}

bool compare(Cmp c, double a, double b) {
  switch (c) {
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
  }
  return false;
}

struct Evaluator {
  std::span<const double> point;
  EvalResult& res;

  bool holds(const Branch& b) {
    for (const auto& a : b.guard) {
      double l = run(a.lhs);
      double r = run(a.rhs);
      if (!compare(a.cmp, l, r)) return false;
    }
    return true;
  }

  double run(const Term& t) {
    const Node& n = t.node();
    switch (n.op) {
      case Op::Const: return n.q.to_double();
      case Op::Var: return point[static_cast<std::size_t>(n.index)];
      case Op::Add: return run(n.kids[0]) + run(n.kids[1]);
      case Op::Mul: return run(n.kids[0]) * run(n.kids[1]);
      case Op::Neg: return -run(n.kids[0]);
      case Op::Inv: {
        double v = run(n.kids[0]);
        if (v == 0.0) {
          ++res.convention_hits;
          return 0.0;
        }
        return 1.0 / v;
      }
      case Op::Root: {
        double v = run(n.kids[0]);
        if (v < 0.0) {
          if (n.index % 2 == 0) {
            ++res.convention_hits;
            return 0.0;
          }
          return -std::pow(-v, 1.0 / n.index);
        }
        return n.index == 2 ? std::sqrt(v) : (n.index == 3 ? std::cbrt(v) : std::pow(v, 1.0 / n.index));
      }
      case Op::Abs: return std::fabs(run(n.kids[0]));
      case Op::Pow: {
        double v = std::fabs(run(n.kids[0]));
        if (v == 0.0) {
          if (n.q.sign() <= 0) ++res.convention_hits;
          return 0.0;
        }
        if (n.q.is_integer()) return std::pow(v, static_cast<double>(n.q.num()));
        if (n.q == Rational(1, 2)) return std::sqrt(v);
        return std::pow(v, n.q.to_double());
      }
      case Op::Log: {
        double v = run(n.kids[0]);
        if (!(v > 0.0)) {
          ++res.convention_hits;
          return 0.0;
        }
        return std::log(v);
      }
      case Op::Exp: return std::exp(run(n.kids[0]));
      case Op::Min: return std::min(run(n.kids[0]), run(n.kids[1]));
      case Op::Max: return std::max(run(n.kids[0]), run(n.kids[1]));
      case Op::TruncLog:
      case Op::TruncExp: {
        double v = run(n.kids[0]);
        if (v < n.q.to_double() || v > n.q2.to_double()) {
          ++res.truncation_misses;
          return 0.0;
        }
        return n.op == Op::TruncLog ? std::log(v) : std::exp(v);
      }
      case Op::Series: {
        std::vector<double> z;
        z.reserve(n.kids.size());
        bool inside = true;
        for (const auto& k : n.kids) {
          double v = run(k);
          if (!(std::fabs(v) <= 1.0)) inside = false;
          z.push_back(v);
        }
        if (!inside) {
          ++res.convention_hits;
          return 0.0;
        }
        return n.series->eval(z.data());
      }
      case Op::Guarded: {
        int chosen = -1;
        int held = 0;
        int fallback = -1;
        for (std::size_t i = 0; i < n.branches.size(); ++i) {
          const auto& b = n.branches[i];
          if (b.otherwise) {
            fallback = static_cast<int>(i);
            continue;
          }
          if (holds(b)) {
            ++held;
            if (chosen < 0) chosen = static_cast<int>(i);
          }
        }
        if (held > 1) ++res.guard_overlaps;
        if (chosen < 0) chosen = fallback;
        if (chosen < 0) {
          ++res.convention_hits;
          return 0.0;
        }
        return run(n.branches[static_cast<std::size_t>(chosen)].value);
      }
    }
    return 0.0;
  }
};

// Three-valued comparison of enclosures: 1 true, 0 false, -1 unknown.
int compare_interval(Cmp c, const Interval& a, const Interval& b) {
  switch (c) {
    case Cmp::Lt:
      if (a.hi < b.lo) return 1;
      if (a.lo >= b.hi) return 0;
      return -1;
    case Cmp::Le:
      if (a.hi <= b.lo) return 1;
      if (a.lo > b.hi) return 0;
      return -1;
    case Cmp::Gt: return compare_interval(Cmp::Lt, b, a);
    case Cmp::Ge: return compare_interval(Cmp::Le, b, a);
    case Cmp::Eq:
      if (a.lo == a.hi && b.lo == b.hi && a.lo == b.lo) return 1;
      if (a.hi < b.lo || b.hi < a.lo) return 0;
      return -1;
    case Cmp::Ne: {
      int e = compare_interval(Cmp::Eq, a, b);
      return e < 0 ? -1 : 1 - e;
    }
  }
  return -1;
}

Interval rational_enclosure(const Rational& r) {
  double v = r.to_double();
  if (r.is_integer() && std::fabs(v) < 9.0e15) return Interval::point(v);
  return {round_down(v), round_up(v)};
}

struct IntervalEvaluator {
  std::span<const Interval> box;
  bool inconclusive = false;

  int branch_status(const Branch& b) {
    int status = 1;
    for (const auto& a : b.guard) {
      int s = compare_interval(a.cmp, run(a.lhs), run(a.rhs));
      if (s == 0) return 0;
      if (s < 0) status = -1;
    }
    return status;
  }

  Interval run(const Term& t) {
    const Node& n = t.node();
    switch (n.op) {
      case Op::Const: return rational_enclosure(n.q);
      case Op::Var: return box[static_cast<std::size_t>(n.index)];
      case Op::Add: return run(n.kids[0]) + run(n.kids[1]);
      case Op::Mul: return run(n.kids[0]) * run(n.kids[1]);
      case Op::Neg: return -run(n.kids[0]);
      case Op::Inv: {
        Interval v = run(n.kids[0]);
        if (!v.contains_zero()) return reciprocal(v);
        inconclusive = true;
        if (v.lo == 0.0 && v.hi == 0.0) return Interval::point(0.0);
        return Interval::entire();
      }
      case Op::Root: {
        Interval v = run(n.kids[0]);
        if (n.index % 2 == 1) return iroot(v, n.index);
        if (v.hi < 0.0) {
          inconclusive = true;
          return Interval::point(0.0);
        }
        if (v.lo < 0.0) {
          inconclusive = true;
          return hull(iroot({0.0, v.hi}, n.index), 0.0);
        }
        return iroot(v, n.index);
      }
      case Op::Abs: return iabs(run(n.kids[0]));
      case Op::Pow: {
        Interval a = iabs(run(n.kids[0]));
        double q = n.q.to_double();
        if (a.lo > 0.0) return ipow_pos(a, q);
        if (n.q.sign() > 0) return hull(ipow_pos({0.0, a.hi}, q), 0.0);
        inconclusive = true;
        if (a.hi == 0.0) return Interval::point(0.0);
        if (n.q.is_zero()) return {0.0, 1.0};
        return {0.0, std::numeric_limits<double>::infinity()};
      }
      case Op::Log: {
        Interval v = run(n.kids[0]);
        if (v.lo > 0.0) return ilog(v);
        inconclusive = true;
        if (v.hi <= 0.0) return Interval::point(0.0);
        return hull(ilog({0.0, v.hi}), 0.0);
      }
      case Op::Exp: return iexp(run(n.kids[0]));
      case Op::Min: return imin(run(n.kids[0]), run(n.kids[1]));
      case Op::Max: return imax(run(n.kids[0]), run(n.kids[1]));
      case Op::TruncLog:
      case Op::TruncExp: {
        Interval v = run(n.kids[0]);
        double lo = n.q.to_double();
        double hi = n.q2.to_double();
        if (v.hi < lo || v.lo > hi) return Interval::point(0.0);
        Interval live{std::max(v.lo, lo), std::min(v.hi, hi)};
        Interval img = n.op == Op::TruncLog ? ilog(live) : iexp(live);
        if (v.lo >= lo && v.hi <= hi) return img;
        return hull(img, 0.0);
      }
      case Op::Series: {
        std::vector<Interval> z;
        bool inside = true;
        bool outside = false;
        for (const auto& k : n.kids) {
          Interval v = run(k);
          if (v.lo < -1.0 || v.hi > 1.0) inside = false;
          if (v.hi < -1.0 || v.lo > 1.0) outside = true;
          z.push_back({std::max(v.lo, -1.0), std::min(v.hi, 1.0)});
        }
        if (inside) return n.series->enclose(z.data());
        inconclusive = true;
        if (outside) return Interval::point(0.0);
        return hull(n.series->enclose(z.data()), 0.0);
      }
      case Op::Guarded: {
        std::vector<int> status(n.branches.size(), 0);
        int fallback = -1;
        bool some_true = false;
        bool all_false = true;
        for (std::size_t i = 0; i < n.branches.size(); ++i) {
          if (n.branches[i].otherwise) {
            fallback = static_cast<int>(i);
            continue;
          }
          status[i] = branch_status(n.branches[i]);
          if (status[i] == 1) some_true = true;
          if (status[i] != 0) all_false = false;
        }
        if (fallback >= 0) status[static_cast<std::size_t>(fallback)] = some_true ? 0 : (all_false ? 1 : -1);
        for (std::size_t i = 0; i < n.branches.size(); ++i) {
          if (status[i] == 1) return run(n.branches[i].value);
        }
        bool any = false;
        Interval out{};
        for (std::size_t i = 0; i < n.branches.size(); ++i) {
          if (status[i] == 0) continue;
          Interval v = run(n.branches[i].value);
          out = any ? hull(out, v) : v;
          any = true;
        }
        if (fallback < 0) {
          // No branch may hold: the totalized value 0 is possible.
          inconclusive = true;
          out = any ? hull(out, 0.0) : Interval::point(0.0);
        }
        return out;
      }
    }
    return Interval::entire();
  }
};

void collect_max_var(const Term& t, int& best) {
  const Node& n = t.node();
  if (n.op == Op::Var) best = std::max(best, n.index);
  for (const auto& k : n.kids) collect_max_var(k, best);
  for (const auto& b : n.branches) {
    for (const auto& a : b.guard) {
      collect_max_var(a.lhs, best);
      collect_max_var(a.rhs, best);
    }
    collect_max_var(b.value, best);
  }
}

template <typename F>
Term rebuild(const Term& t, F&& leaf) {
  const Node& n = t.node();
  if (n.op == Op::Var) return leaf(t);
  if (n.op == Op::Const) return t;
  Node m = n;
  bool changed = false;
  for (auto& k : m.kids) {
    Term nk = rebuild(k, leaf);
    if (nk->hash != k->hash || !structurally_equal(nk, k)) changed = true;
    k = nk;
  }
  for (auto& b : m.branches) {
    for (auto& a : b.guard) {
      a.lhs = rebuild(a.lhs, leaf);
      a.rhs = rebuild(a.rhs, leaf);
    }
    b.value = rebuild(b.value, leaf);
    changed = true;
  }
  if (!changed) return t;
  return finish(std::move(m));
}

bool contains_op_impl(const Term& t, Op op) {
  const Node& n = t.node();
  if (n.op == op) return true;
  for (const auto& k : n.kids) {
    if (contains_op_impl(k, op)) return true;
  }
  for (const auto& b : n.branches) {
    for (const auto& a : b.guard) {
      if (contains_op_impl(a.lhs, op) || contains_op_impl(a.rhs, op)) return true;
    }
    if (contains_op_impl(b.value, op)) return true;
  }
  return false;
}

bool is_const(const Term& t, Rational* out = nullptr) {
  if (t.op() != Op::Const) return false;
  if (out) *out = t->q;
  return true;
}

}  // namespace

Term Const(const Rational& r) {
  Node n;
  n.op = Op::Const;
  n.q = r;
  return finish(std::move(n));
}

Term Var(int index) {
  Node n;
  n.op = Op::Var;
  n.index = index;
  return finish(std::move(n));
}

Term Add(const Term& a, const Term& b) { return binary(Op::Add, a, b); }
Term Mul(const Term& a, const Term& b) { return binary(Op::Mul, a, b); }
Term Neg(const Term& a) { return unary(Op::Neg, a); }
Term Inv(const Term& a) { return unary(Op::Inv, a); }

Term Root(int degree, const Term& a) {
  if (degree < 2) throw Error(ErrorKind::InvalidInput, "root degree must be at least 2");
  Node n;
  n.op = Op::Root;
  n.index = degree;
  n.kids = {a};
  return finish(std::move(n));
}

Term Abs(const Term& a) { return unary(Op::Abs, a); }

Term Pow(const Term& base, const Rational& q) {
  Node n;
  n.op = Op::Pow;
  n.q = q;
  n.kids = {base};
  return finish(std::move(n));
}

Term Log(const Term& a) { return unary(Op::Log, a); }
Term Exp(const Term& a) { return unary(Op::Exp, a); }
Term Min(const Term& a, const Term& b) { return binary(Op::Min, a, b); }
Term Max(const Term& a, const Term& b) { return binary(Op::Max, a, b); }

Term TruncLog(const Rational& lo, const Rational& hi, const Term& a) {
  if (!(Rational(0) < lo) || hi < lo) throw Error(ErrorKind::InvalidInput, "logstar interval must satisfy 0 < lo <= hi");
  Node n;
  n.op = Op::TruncLog;
  n.q = lo;
  n.q2 = hi;
  n.kids = {a};
  return finish(std::move(n));
}

Term TruncExp(const Rational& lo, const Rational& hi, const Term& a) {
  if (hi < lo) throw Error(ErrorKind::InvalidInput, "expstar interval must satisfy lo <= hi");
  Node n;
  n.op = Op::TruncExp;
  n.q = lo;
  n.q2 = hi;
  n.kids = {a};
  return finish(std::move(n));
}

Term Series(SeriesPtr def, std::vector<Term> args) {
  if (!def) throw Error(ErrorKind::InvalidInput, "series without definition");
  if (static_cast<int>(args.size()) != def->arity) {
    throw Error(ErrorKind::InvalidInput, "series '" + def->name + "' expects " + std::to_string(def->arity) +
                                             " arguments, got " + std::to_string(args.size()));
  }
  Node n;
  n.op = Op::Series;
  n.series = std::move(def);
  n.kids = std::move(args);
  return finish(std::move(n));
}

Term Guarded(std::vector<Branch> branches) {
  if (branches.empty()) throw Error(ErrorKind::InvalidInput, "piece needs at least one branch");
  int fallbacks = 0;
  for (const auto& b : branches) {
    if (b.otherwise) ++fallbacks;
    if (!b.value.valid()) throw Error(ErrorKind::InvalidInput, "piece branch without value");
  }
  if (fallbacks > 1) throw Error(ErrorKind::InvalidInput, "piece has more than one else branch");
  Node n;
  n.op = Op::Guarded;
  n.branches = std::move(branches);
  return finish(std::move(n));
}

Term operator+(const Term& a, const Term& b) { return Add(a, b); }
Term operator-(const Term& a, const Term& b) { return Add(a, Neg(b)); }
Term operator-(const Term& a) { return Neg(a); }
Term operator*(const Term& a, const Term& b) { return Mul(a, b); }
Term operator/(const Term& a, const Term& b) { return Mul(a, Inv(b)); }

bool structurally_equal(const Term& a, const Term& b) {
  if (a.valid() != b.valid()) return false;
  if (!a.valid()) return true;
  if (&a.node() == &b.node()) return true;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.hash != y.hash || x.op != y.op || !(x.q == y.q) || !(x.q2 == y.q2) || x.index != y.index) return false;
  if (x.kids.size() != y.kids.size() || x.branches.size() != y.branches.size()) return false;
  if (x.series && !(y.series && x.series->same_as(*y.series))) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (!structurally_equal(x.kids[i], y.kids[i])) return false;
  }
  for (std::size_t i = 0; i < x.branches.size(); ++i) {
    const Branch& p = x.branches[i];
    const Branch& r = y.branches[i];
    if (p.otherwise != r.otherwise || p.guard.size() != r.guard.size()) return false;
    for (std::size_t j = 0; j < p.guard.size(); ++j) {
      if (p.guard[j].cmp != r.guard[j].cmp || !structurally_equal(p.guard[j].lhs, r.guard[j].lhs) ||
          !structurally_equal(p.guard[j].rhs, r.guard[j].rhs)) {
        return false;
      }
    }
    if (!structurally_equal(p.value, r.value)) return false;
  }
  return true;
}

bool operator==(const Term& a, const Term& b) { return structurally_equal(a, b); }

bool EvalResult::finite() const { return std::isfinite(value); }

EvalResult eval(const Term& t, std::span<const double> point, const VarContext& ctx) {
  if (static_cast<int>(point.size()) != ctx.dim()) {
    throw Error(ErrorKind::InvalidInput, "point has " + std::to_string(point.size()) + " coordinates, context expects " +
                                             std::to_string(ctx.dim()));
  }
  if (max_var_index(t) >= ctx.dim()) throw Error(ErrorKind::InvalidInput, "term references a variable outside the context");
  EvalResult res;
  Evaluator ev{point, res};
  res.value = ev.run(t);
  res.domain_flag = res.convention_hits > 0;
  return res;
}

IntervalResult eval_interval(const Term& t, std::span<const Interval> box, const VarContext& ctx) {
  if (static_cast<int>(box.size()) != ctx.dim()) {
    throw Error(ErrorKind::InvalidInput, "box dimension does not match the context");
  }
  if (max_var_index(t) >= ctx.dim()) throw Error(ErrorKind::InvalidInput, "term references a variable outside the context");
  IntervalEvaluator ev{box};
  IntervalResult r;
  r.value = ev.run(t);
  r.inconclusive = ev.inconclusive;
  return r;
}

Term substitute(const Term& t, const std::map<int, Term>& assignment) {
  return rebuild(t, [&](const Term& v) {
    auto it = assignment.find(v->index);
    return it == assignment.end() ? v : it->second;
  });
}

Term transform(const Term& t, const std::function<Term(const Term&)>& fn) {
  const Node& n = t.node();
  if (n.op == Op::Const || n.op == Op::Var) return fn(t);
  Node m = n;
  for (auto& k : m.kids) k = transform(k, fn);
  for (auto& b : m.branches) {
    for (auto& a : b.guard) {
      a.lhs = transform(a.lhs, fn);
      a.rhs = transform(a.rhs, fn);
    }
    b.value = transform(b.value, fn);
  }
  return fn(finish(std::move(m)));
}

Term remap_vars(const Term& t, const std::vector<int>& mapping) {
  return rebuild(t, [&](const Term& v) {
    std::size_t i = static_cast<std::size_t>(v->index);
    if (i >= mapping.size()) throw Error(ErrorKind::InvalidInput, "variable outside remapping table");
    return mapping[i] == v->index ? v : Var(mapping[i]);
  });
}

bool uses_var(const Term& t, int index) {
  const Node& n = t.node();
  if (n.op == Op::Var) return n.index == index;
  for (const auto& k : n.kids) {
    if (uses_var(k, index)) return true;
  }
  for (const auto& b : n.branches) {
    for (const auto& a : b.guard) {
      if (uses_var(a.lhs, index) || uses_var(a.rhs, index)) return true;
    }
    if (uses_var(b.value, index)) return true;
  }
  return false;
}

int max_var_index(const Term& t) {
  int best = -1;
  collect_max_var(t, best);
  return best;
}

bool depends_only_on_t(const Term& t, const VarContext& ctx) { return !uses_var(t, ctx.x_index()); }

bool contains_op(const Term& t, Op op) { return contains_op_impl(t, op); }

std::size_t node_count(const Term& t) {
  std::size_t c = 1;
  for (const auto& k : t.kids()) c += node_count(k);
  for (const auto& b : t->branches) {
    for (const auto& a : b.guard) c += node_count(a.lhs) + node_count(a.rhs);
    c += node_count(b.value);
  }
  return c;
}

Term fold_constants(const Term& t) {
  const Node& n = t.node();
  if (n.op == Op::Const || n.op == Op::Var) return t;
  if (n.op == Op::Guarded) {
    std::vector<Branch> bs = n.branches;
    for (auto& b : bs) {
      for (auto& a : b.guard) {
        a.lhs = fold_constants(a.lhs);
        a.rhs = fold_constants(a.rhs);
      }
      b.value = fold_constants(b.value);
    }
    return Guarded(std::move(bs));
  }
  std::vector<Term> kids;
  for (const auto& k : n.kids) kids.push_back(fold_constants(k));
  Rational a, b;
  try {
    switch (n.op) {
      case Op::Add:
        if (is_const(kids[0], &a) && is_const(kids[1], &b)) return Const(a + b);
        if (is_const(kids[0], &a) && a.is_zero()) return kids[1];
        if (is_const(kids[1], &b) && b.is_zero()) return kids[0];
        return Add(kids[0], kids[1]);
      case Op::Mul:
        if (is_const(kids[0], &a) && is_const(kids[1], &b)) return Const(a * b);
        if ((is_const(kids[0], &a) && a.is_zero()) || (is_const(kids[1], &b) && b.is_zero())) return Const(0);
        if (is_const(kids[0], &a) && a == Rational(1)) return kids[1];
        if (is_const(kids[1], &b) && b == Rational(1)) return kids[0];
        return Mul(kids[0], kids[1]);
      case Op::Neg:
        if (is_const(kids[0], &a)) return Const(-a);
        return Neg(kids[0]);
      case Op::Inv:
        if (is_const(kids[0], &a)) return Const(a.is_zero() ? Rational(0) : Rational(1) / a);
        return Inv(kids[0]);
      case Op::Abs:
        if (is_const(kids[0], &a)) return Const(abs(a));
        return Abs(kids[0]);
      case Op::Min:
        if (is_const(kids[0], &a) && is_const(kids[1], &b)) return Const(a < b ? a : b);
        return Min(kids[0], kids[1]);
      case Op::Max:
        if (is_const(kids[0], &a) && is_const(kids[1], &b)) return Const(a < b ? b : a);
        return Max(kids[0], kids[1]);
      case Op::Pow:
        if (is_const(kids[0], &a) && n.q.is_integer() && n.q.num() >= 0 && n.q.num() <= 16 && !a.is_zero()) {
          Rational r(1);
          for (std::int64_t i = 0; i < n.q.num(); ++i) r = r * abs(a);
          return Const(r);
        }
        if (is_const(kids[0], &a) && a.is_zero()) return Const(0);
        return Pow(kids[0], n.q);
      case Op::Log:
        if (is_const(kids[0], &a) && (a == Rational(1) || a.sign() <= 0)) return Const(0);
        return Log(kids[0]);
      case Op::Exp:
        if (is_const(kids[0], &a) && a.is_zero()) return Const(1);
        return Exp(kids[0]);
      default: break;
    }
  } catch (const std::overflow_error&) {
    // Leave the node unfolded when exact folding overflows.
  }
  Node m = n;
  m.kids = kids;
  return finish(std::move(m));
}

bool is_zero_term(const Term& t) {
  Term f = fold_constants(t);
  return f.op() == Op::Const && f->q.is_zero();
}

}  // namespace logprep
