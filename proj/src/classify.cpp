// SPDX-License-Identifier: Apache-2.0
#include "logprep/classify.hpp"

#include <algorithm>
#include <cmath>

#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"

namespace logprep {

const FamilyMember* ExpFamily::find(const std::string& member) const {
  for (const auto& m : members) {
    if (m.name == member) return &m;
  }
  return nullptr;
}

const FamilyMember* ExpFamily::find_base(const std::string& member) const {
  for (const auto& m : base_members()) {
    if (m.name == member) return &m;
  }
  return nullptr;
}

namespace {

const char* rule_name(Op op) {
  switch (op) {
    case Op::Const: return "constant";
    case Op::Var: return "variable";
    case Op::Add: return "sum";
    case Op::Mul: return "product";
    case Op::Neg: return "negation";
    case Op::Inv: return "reciprocal";
    case Op::Root: return "root";
    case Op::Abs: return "abs";
    case Op::Pow: return "power";
    case Op::Log: return "log";
    case Op::Exp: return "exp";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::TruncLog: return "truncated-log";
    case Op::TruncExp: return "truncated-exp";
    case Op::Series: return "series";
    case Op::Guarded: return "piecewise";
  }
  return "unknown";
}

Derivation derive(const Term& t, const VarContext& ctx) {
  const Node& n = t.node();
  Derivation d;
  d.rule = rule_name(n.op);
  d.term = print_term(t, ctx);
  if (n.op == Op::Exp) {
    throw Error(ErrorKind::NotLogAnalytic, "term contains exp: " + d.term);
  }
  for (const auto& k : n.kids) d.kids.push_back(derive(k, ctx));
  for (const auto& b : n.branches) d.kids.push_back(derive(b.value, ctx));
  d.bound = replay(d);
  return d;
}

// Every Exp(h) node, outermost first.
void collect_exp(const Term& t, std::vector<Term>& out) {
  const Node& n = t.node();
  if (n.op == Op::Exp) out.push_back(t);
  for (const auto& k : n.kids) collect_exp(k, out);
  for (const auto& b : n.branches) {
    for (const auto& a : b.guard) {
      collect_exp(a.lhs, out);
      collect_exp(a.rhs, out);
    }
    collect_exp(b.value, out);
  }
}

class Matcher {
public:
  Matcher(const ExpFamily& family, const VarContext& ctx, const MatchOptions& opts)
      : family_(family), ctx_(ctx), opts_(opts) {
    if (opts_.cell) {
      SamplePlan plan = opts_.plan ? *opts_.plan : SamplePlan::with_total(ctx.n, 1000, 0);
      points_ = sample(*opts_.cell, plan);
    }
  }

  int level(const Term& t, ExpNumberBound& out) {
    const Node& n = t.node();
    if (n.op == Op::Exp) {
      std::string name = match(t, out);
      int inner = level(n.kids[0], out);
      out.matched[print_term(t, ctx_)] = name;
      return inner + 1;
    }
    int best = 0;
    for (const auto& k : n.kids) best = std::max(best, level(k, out));
    for (const auto& b : n.branches) {
      for (const auto& a : b.guard) {
        best = std::max(best, level(a.lhs, out));
        best = std::max(best, level(a.rhs, out));
      }
      best = std::max(best, level(b.value, out));
    }
    return best;
  }

private:
  std::string match(const Term& node, ExpNumberBound& out) {
    Term folded = fold_constants(node);
    for (const auto& m : family_.members) {
      if (structurally_equal(fold_constants(m.term), folded)) return m.name;
    }
    if (!points_.empty()) {
      for (const auto& m : family_.members) {
        if (numerically_equal(m.term, node)) {
          out.notes.push_back("matched " + print_term(node, ctx_) + " to " + m.name + " numerically");
          return m.name;
        }
      }
    }
    throw Error(ErrorKind::CannotConstruct, "exp node not in family: " + print_term(node, ctx_));
  }

  bool numerically_equal(const Term& a, const Term& b) const {
    for (const auto& p : points_) {
      EvalResult ra = eval(a, p, ctx_);
      EvalResult rb = eval(b, p, ctx_);
      if (ra.domain_flag || rb.domain_flag || !ra.finite() || !rb.finite()) return false;
      if (std::fabs(ra.value - rb.value) > opts_.tol * (1.0 + std::fabs(ra.value))) return false;
    }
    return true;
  }

  const ExpFamily& family_;
  const VarContext& ctx_;
  const MatchOptions& opts_;
  std::vector<Point> points_;
};

}  // namespace

int replay(const Derivation& d) {
  int best = 0;
  for (const auto& k : d.kids) best = std::max(best, replay(k));
  if (d.rule == "log") return best + 1;
  return best;
}

nlohmann::json to_json(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = d.rule;
  j["term"] = d.term;
  j["bound"] = d.bound;
  if (!d.kids.empty()) {
    j["kids"] = nlohmann::json::array();
    for (const auto& k : d.kids) j["kids"].push_back(to_json(k));
  }
  return j;
}

OrderBound order_bound(const Term& t, const VarContext& ctx) {
  OrderBound out;
  out.derivation = derive(t, ctx);
  out.bound = out.derivation.bound;
  return out;
}

Term cancel_log_exp(const Term& t) {
  return transform(t, [](const Term& n) {
    if (n.op() == Op::Log && n.kid(0).op() == Op::Exp) return n.kid(0).kid(0);
    return n;
  });
}

ExpNumberBound exp_number_bound(const Term& t, const ExpFamily& family, const VarContext& ctx,
                                const MatchOptions& opts) {
  ExpNumberBound out;
  Term simplified = cancel_log_exp(t);
  if (!structurally_equal(simplified, t)) out.notes.push_back("cancelled log(exp(h)) to h before matching");
  std::vector<Term> exps;
  collect_exp(simplified, exps);
  if (exps.empty()) {
    out.bound = 0;
    out.notes.push_back("exp-free: log-analytic");
    return out;
  }
  Matcher m(family, ctx, opts);
  out.bound = m.level(simplified, out);
  out.notes.push_back("upper bound only; exp(a+b) is not split into exp(a)*exp(b) before matching");
  return out;
}

VerificationReport algebra_check(const Term& f, const Term& g, const VarContext& ctx) {
  VerificationReport rep = make_report("algebra-closure");
  int bf = order_bound(f, ctx).bound;
  int bg = order_bound(g, ctx).bound;
  int bs = order_bound(f + g, ctx).bound;
  int bp = order_bound(f * g, ctx).bound;
  rep.witnesses["bound_f"] = bf;
  rep.witnesses["bound_g"] = bg;
  rep.witnesses["bound_sum"] = bs;
  rep.witnesses["bound_product"] = bp;
  int cap = std::max(bf, bg);
  if (bs > cap) rep.refute("sum bound exceeds max of operand bounds", {});
  if (bp > cap) rep.refute("product bound exceeds max of operand bounds", {});
  if (rep.verified()) rep.message = "sum and product stay within order " + std::to_string(cap);
  return rep;
}

}  // namespace logprep
