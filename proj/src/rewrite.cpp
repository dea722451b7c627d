// SPDX-License-Identifier: Apache-2.0
#include "logprep/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"
#include "logprep/parallel.hpp"
#include "logprep/similarity.hpp"

namespace logprep {

namespace {

constexpr std::int64_t kTruncDen = std::int64_t{1} << 20;
constexpr double kEpsMargin = 1.05;

std::string tvar(int i) { return "t" + std::to_string(i + 1); }

Term product(Term acc, const std::vector<Term>& base, const std::vector<Rational>& exps) {
  for (std::size_t j = 0; j < base.size() && j < exps.size(); ++j) {
    if (exps[j].is_zero()) continue;
    acc = acc * Pow(base[j], exps[j]);
  }
  return acc;
}

std::vector<Term> vars(int from, int count) {
  std::vector<Term> out;
  for (int i = 0; i < count; ++i) out.push_back(Var(from + i));
  return out;
}

std::map<int, Term> slot_map(const std::vector<Term>& y, const std::optional<Term>& z = std::nullopt) {
  std::map<int, Term> m;
  for (std::size_t i = 0; i < y.size(); ++i) m[static_cast<int>(i)] = y[i];
  if (z) m[static_cast<int>(y.size())] = *z;
  return m;
}

// Branch guarded by |alpha_i| <= 1 for every i, zero otherwise; no guard when alpha is empty.
Term unit_guard(const std::vector<Term>& alpha, const Term& value) {
  if (alpha.empty()) return value;
  Branch in;
  for (const auto& a : alpha) in.guard.push_back(Atom{Cmp::Le, Abs(a), Const(1)});
  in.value = value;
  Branch out;
  out.otherwise = true;
  out.value = Const(0);
  return Guarded({in, out});
}

void finalize(RewriteOutput& out) {
  bool all = true;
  for (const auto& ob : out.obligations) {
    VerificationReport r = replay(ob);
    all = all && r.verified();
    out.report.add(std::move(r));
  }
  out.trusted = all && !out.obligations.empty();
  nlohmann::json names = nlohmann::json::array();
  for (const auto& t : out.terms) names.push_back(t.name);
  out.report.data["emitted"] = names;
  out.report.data["trusted"] = out.trusted;
  out.report.data["provenance"] = out.provenance;
  if (out.report.verified()) out.report.message = out.provenance + ": all obligations replay";
}

RewriteOutput start(const std::string& provenance, const std::string& name) {
  RewriteOutput out;
  out.provenance = provenance;
  out.report = make_report(name);
  return out;
}

// Images (y_1..y_m, z) of cell points; points hitting a convention are dropped.
std::vector<Point> image_points(const BetaMap& beta, std::span<const Point> points, const VarContext& ctx,
                                VerificationReport& rep) {
  std::vector<Term> all = beta.y;
  all.push_back(beta.z);
  auto imgs = parallel_map<std::optional<Point>>(points.size(), [&](std::size_t i) -> std::optional<Point> {
    Point img;
    for (const auto& t : all) {
      EvalResult r = eval(t, points[i], ctx);
      if (r.domain_flag || !r.finite()) return std::nullopt;
      img.push_back(r.value);
    }
    return img;
  });
  std::vector<Point> out;
  std::size_t dropped = 0;
  for (auto& p : imgs) {
    if (p) {
      out.push_back(std::move(*p));
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) rep.notes.push_back(std::to_string(dropped) + " cell points skipped: beta hit a convention");
  return out;
}

VerificationReport positivity(const std::string& name, const Term& t, std::span<const Point> points,
                              const VarContext& ctx) {
  VerificationReport rep = make_report(name);
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    EvalResult r = eval(t, p, ctx);
    if (r.domain_flag || !r.finite()) {
      rep.inconclusive("evaluation hit a totalization convention", p);
      continue;
    }
    inf = std::min(inf, r.value);
    if (!(r.value > 0.0)) {
      rep.refute("value " + std::to_string(r.value) + " is not positive", p);
      break;
    }
  }
  rep.witnesses["inf"] = inf;
  return rep;
}

Rational outward_upper(double v) { return Rational::approximate(v, kTruncDen, +1); }
Rational outward_lower(double v) { return Rational::approximate(v, kTruncDen, -1); }

int depth_rec(const Term& t, int x) {
  const Node& n = t.node();
  int best = 0;
  for (const auto& k : n.kids) best = std::max(best, depth_rec(k, x));
  for (const auto& b : n.branches) {
    for (const auto& a : b.guard) {
      best = std::max(best, depth_rec(a.lhs, x));
      best = std::max(best, depth_rec(a.rhs, x));
    }
    best = std::max(best, depth_rec(b.value, x));
  }
  if (n.op == Op::Log && uses_var(n.kids[0], x)) ++best;
  return best;
}

}  // namespace

VerificationReport replay(const Obligation& ob) {
  VerificationReport rep = make_report("obligation:" + ob.name);
  rep.data["lhs"] = print_term(ob.lhs, ob.ctx);
  rep.data["rhs"] = print_term(ob.rhs, ob.ctx);
  if (ob.points.empty()) {
    rep.inconclusive("no points to replay");
    return rep;
  }
  struct Pair {
    EvalResult l;
    EvalResult r;
  };
  auto vals = parallel_map<Pair>(ob.points.size(), [&](std::size_t i) {
    return Pair{eval(ob.lhs, ob.points[i], ob.ctx), eval(ob.rhs, ob.points[i], ob.ctx)};
  });
  double max_err = 0.0;
  std::size_t conventions = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto& [l, r] = vals[i];
    const Point& p = ob.points[i];
    if (ob.live_truncation && r.truncation_misses > 0) {
      rep.refute("a truncation took its zero branch", p);
      break;
    }
    if (l.domain_flag || r.domain_flag || !l.finite() || !r.finite()) {
      if (conventions++ == 0) rep.inconclusive("evaluation hit a totalization convention", p);
      continue;
    }
    double err = std::fabs(l.value - r.value);
    max_err = std::max(max_err, err / (1.0 + std::fabs(l.value)));
    if (err > ob.tol * (1.0 + std::fabs(l.value))) {
      rep.refute("lhs " + std::to_string(l.value) + " differs from rhs " + std::to_string(r.value), p);
      break;
    }
  }
  rep.witnesses["max_rel_error"] = max_err;
  rep.witnesses["points"] = static_cast<double>(ob.points.size());
  rep.witnesses["conventions"] = static_cast<double>(conventions);
  if (rep.verified()) rep.message = "holds at " + std::to_string(ob.points.size()) + " points";
  return rep;
}

const EmittedTerm* RewriteOutput::find(const std::string& name) const {
  for (const auto& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

int x_log_depth(const Term& t, const VarContext& ctx) { return depth_rec(t, ctx.x_index()); }

RewriteOutput collapse_la(const LAPreparingTuple& tuple, const Term& f, const Cell& cell, const SamplePlan& plan,
                          double tol) {
  RewriteOutput out = start("collapse", "collapse:" + tuple.name);
  VerificationReport pre = verify_la(tuple, f, cell, plan, tol);
  pre.name = "preconditions";
  const bool shapes_ok = pre.verdict != Verdict::Invalid;
  out.report.add(pre);
  if (!shapes_ok) return out;

  const int s = static_cast<int>(tuple.b.size());
  const int r = tuple.scale.r();
  const VarContext gctx{s + 2 + r};
  std::vector<Term> w = vars(s + 1, r + 1);
  std::vector<Term> alpha;
  for (int i = 1; i <= s; ++i) alpha.push_back(product(Var(i), w, tuple.P[static_cast<std::size_t>(i - 1)]));
  Term value = product(Var(0), w, tuple.q) * tuple.unit.polynomial_term(alpha);
  Term G = unit_guard(alpha, value);
  std::string desc = "t1 = a";
  for (int i = 1; i <= s; ++i) desc += ", " + tvar(i) + " = b_" + std::to_string(i);
  for (int j = 0; j <= r; ++j) desc += ", " + tvar(s + 1 + j) + " = y_" + std::to_string(j);
  out.terms.push_back({"G", G, gctx, desc});
  std::vector<Term> eta{tuple.a};
  for (const auto& b : tuple.b) eta.push_back(b);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    out.terms.push_back({"eta_" + std::to_string(i), eta[i], cell.ctx, "cell variables"});
  }
  if (tuple.unit.v->tail_bound > 0.0) out.report.notes.push_back("unit tail dropped from the emitted polynomial");

  std::vector<Term> y = scale_terms(tuple.scale);
  std::map<int, Term> m;
  for (std::size_t i = 0; i < eta.size(); ++i) m[static_cast<int>(i)] = eta[i];
  for (int j = 0; j <= r; ++j) m[s + 1 + j] = y[static_cast<std::size_t>(j)];
  Obligation ob{"f = G(eta, Y)", cell.ctx, f, substitute(G, m),
                sample(cell, plan_for_scale(tuple.scale, cell, plan)), tol, false};
  out.obligations.push_back(std::move(ob));
  finalize(out);
  return out;
}

RewriteOutput collapse_la_log(const LAPreparingTuple& tuple, const Term& h, const Cell& cell, const SamplePlan& plan,
                              double tol) {
  RewriteOutput out = start("collapse-log", "collapse-log:" + tuple.name);
  VerificationReport pre = verify_la(tuple, h, cell, plan, tol);
  pre.name = "preconditions";
  const bool shapes_ok = pre.verdict != Verdict::Invalid;
  out.report.add(pre);
  if (!shapes_ok) return out;

  std::vector<Point> pts = sample(cell, plan_for_scale(tuple.scale, cell, plan));
  out.report.add(positivity("coefficient-positive", tuple.a, pts, cell.ctx));
  out.report.add(positivity("function-positive", h, pts, cell.ctx));

  const int s = static_cast<int>(tuple.b.size());
  const int rh = tuple.scale.r();
  const int k = s + rh + 2;
  const VarContext hctx{k + rh + 2};
  std::vector<Term> w = vars(k, rh + 2);
  std::vector<Term> w_low(w.begin(), w.begin() + rh + 1);
  std::vector<Term> alpha;
  for (int i = 1; i <= s; ++i) alpha.push_back(product(Var(i), w_low, tuple.P[static_cast<std::size_t>(i - 1)]));
  Term beta = Var(0);
  for (int j = 0; j <= rh; ++j) {
    const Rational& qj = tuple.q[static_cast<std::size_t>(j)];
    if (qj.is_zero()) continue;
    beta = beta + Const(qj) * (w[static_cast<std::size_t>(j + 1)] + Var(s + j + 1));
  }
  Term H = unit_guard(alpha, beta + Log(tuple.unit.polynomial_term(alpha)));
  std::string desc = "t1 = log a";
  for (int i = 1; i <= s; ++i) desc += ", " + tvar(i) + " = b_" + std::to_string(i);
  for (int j = 1; j <= rh; ++j) desc += ", " + tvar(s + j) + " = Theta_" + std::to_string(j);
  desc += ", " + tvar(s + rh + 1) + " = 0";
  for (int j = 0; j <= rh; ++j) desc += ", " + tvar(k + j) + " = y_" + std::to_string(j);
  desc += ", " + tvar(k + rh + 1) + " = log|y_" + std::to_string(rh) + "|";
  out.terms.push_back({"H", H, hctx, desc});

  std::vector<Term> y = scale_terms(tuple.scale);
  std::vector<Term> eta{Log(tuple.a)};
  for (const auto& b : tuple.b) eta.push_back(b);
  for (int j = 1; j <= rh; ++j) eta.push_back(tuple.scale.center[static_cast<std::size_t>(j)]);
  eta.push_back(Const(0));
  std::map<int, Term> m;
  for (std::size_t i = 0; i < eta.size(); ++i) m[static_cast<int>(i)] = eta[i];
  for (int j = 0; j <= rh; ++j) m[k + j] = y[static_cast<std::size_t>(j)];
  m[k + rh + 1] = Log(Abs(y[static_cast<std::size_t>(rh)]));
  out.obligations.push_back({"log h = H(eta, Y)", cell.ctx, Log(h), substitute(H, m), pts, tol, false});
  finalize(out);
  return out;
}

RewriteOutput reduce_order(const LogScale& scale, const Term& xi, double delta, const Cell& cell,
                           const SamplePlan& plan, const std::optional<std::vector<Point>>& points, double tol) {
  RewriteOutput out = start("reduce-order", "reduce-order:" + scale.name);
  const VarContext& ctx = scale.ctx;
  const int r = scale.r();
  if (r < 1) {
    out.report.invalid("the scale has no level above y_0 to reduce");
    return out;
  }
  if (!depends_only_on_t(xi, ctx)) {
    out.report.invalid("xi depends on x");
    return out;
  }
  if (!(delta > 1.0)) {
    out.report.invalid("delta must exceed 1");
    return out;
  }
  Rational lo = outward_lower(1.0 / delta);
  Rational hi = outward_upper(delta);
  if (!(lo.sign() > 0)) {
    out.report.invalid("delta is too large for the truncation interval");
    return out;
  }
  std::vector<Point> pts = points ? *points : sample(cell, plan_for_scale(scale, cell, plan));
  std::vector<Term> y = scale_terms(scale);

  VerificationReport sim = check_similar(y[0], xi, pts, delta, ctx);
  sim.name = "similarity";
  out.report.add(sim);

  std::vector<Term> star;
  star.push_back(TruncLog(lo, hi, y[0] / xi) + Log(Abs(xi)) - scale.center[1]);
  for (int l = 2; l <= r; ++l) {
    star.push_back(Log(Abs(star.back())) - scale.center[static_cast<std::size_t>(l)]);
  }
  int before = 0;
  int after = 0;
  for (int l = 1; l <= r; ++l) {
    const Term& s = star[static_cast<std::size_t>(l - 1)];
    before = std::max(before, x_log_depth(y[static_cast<std::size_t>(l)], ctx));
    after = std::max(after, x_log_depth(s, ctx));
    out.terms.push_back({"y_" + std::to_string(l), s, ctx, "cell variables"});
    out.obligations.push_back(
        {"y_" + std::to_string(l) + " = y_" + std::to_string(l) + "*", ctx, y[static_cast<std::size_t>(l)], s, pts,
         tol, true});
  }
  out.report.witnesses["order_before"] = before;
  out.report.witnesses["order_after"] = after;
  out.report.data["truncation"] = {lo.str(), hi.str()};
  finalize(out);
  return out;
}

RewriteOutput eliminate_exp_beta(const Term& F, const BetaMap& beta, const Term& theta, double delta,
                                 const Cell& cell, const SamplePlan& plan, double tol) {
  RewriteOutput out = start("eliminate-exp", "eliminate-exp");
  const int m = static_cast<int>(beta.y.size());
  if (beta.slot < 0 || beta.slot >= m) {
    out.report.invalid("slot must index one of the y components");
    return out;
  }
  if (max_var_index(F) > m) {
    out.report.invalid("F uses variables beyond t" + std::to_string(m + 1));
    return out;
  }
  if (max_var_index(theta) >= m) {
    out.report.invalid("Theta may only use t1..t" + std::to_string(m));
    return out;
  }
  if (contains_op(theta, Op::Exp)) {
    out.report.invalid("Theta must be free of exp");
    return out;
  }
  if (!(delta > 1.0)) {
    out.report.invalid("delta must exceed 1");
    return out;
  }
  Rational lam = outward_upper(std::log(delta));
  const VarContext gctx{m};
  Term slot = Var(beta.slot);
  Term replaced = theta * TruncExp(-lam, lam, slot - Log(theta));
  Term G = substitute(F, {{m, replaced}});
  std::string desc;
  for (int i = 0; i < m; ++i) desc += (i ? ", " : "") + tvar(i) + " = y_" + std::to_string(i + 1);
  out.terms.push_back({"G", G, gctx, desc});

  std::vector<Point> pts = sample(cell, plan);
  std::map<int, Term> ymap = slot_map(beta.y);
  Term theta_y = substitute(theta, ymap);
  VerificationReport pos = positivity("theta-positive", theta_y, pts, cell.ctx);
  if (pos.refuted()) pos.message = "log Theta undefined: " + pos.message;
  out.report.add(pos);
  if (pos.verified()) {
    VerificationReport sim = check_similar(beta.z, theta_y, pts, delta, cell.ctx);
    sim.name = "similarity";
    out.report.add(sim);
  }
  out.report.witnesses["delta"] = delta;
  out.report.witnesses["lambda"] = lam.to_double();

  out.obligations.push_back({"z = exp(y_slot)", cell.ctx, beta.z, Exp(beta.y[static_cast<std::size_t>(beta.slot)]),
                             pts, tol, false});
  out.obligations.push_back({"F(y, z) = G(y)", cell.ctx, substitute(F, slot_map(beta.y, beta.z)),
                             substitute(G, ymap), pts, tol, true});
  finalize(out);
  return out;
}

RewriteOutput eliminate_exp(const Term& F, const std::vector<Term>& g, const std::vector<Term>& h, const Term& theta,
                            double delta, const Cell& cell, const SamplePlan& plan, double tol) {
  if (h.empty()) {
    RewriteOutput out = start("eliminate-exp", "eliminate-exp");
    out.report.invalid("at least one exponent h is required");
    return out;
  }
  BetaMap beta;
  beta.y = g;
  beta.y.push_back(h.back());
  for (std::size_t i = 0; i + 1 < h.size(); ++i) beta.y.push_back(Exp(h[i]));
  beta.slot = static_cast<int>(g.size());
  beta.z = Exp(h.back());
  return eliminate_exp_beta(F, beta, theta, delta, cell, plan, tol);
}

RewriteOutput log_of_prepared(const GsaPreparedForm& form, const Term& F, const BetaMap& beta, const Cell& cell,
                              const SamplePlan& plan, double tol) {
  RewriteOutput out = start("log-prep", "log-prep:" + form.name);
  const int m = static_cast<int>(beta.y.size());
  if (!is_zero_term(fold_constants(form.theta))) {
    out.report.invalid("the prepared form must have center 0");
    return out;
  }
  if (form.ctx.n != m) {
    out.report.invalid("the form must live over t1..t" + std::to_string(m) + " and z");
    return out;
  }
  if (beta.slot < 0 || beta.slot >= m) {
    out.report.invalid("slot must index one of the y components");
    return out;
  }
  std::vector<Point> pts = sample(cell, plan);
  std::vector<Point> img = image_points(beta, pts, cell.ctx, out.report);
  VerificationReport pre = verify_gsa_points(form, F, img, tol);
  pre.name = "preconditions";
  out.report.add(pre);
  if (pre.verdict == Verdict::Invalid) return out;

  const VarContext hctx{m};
  Term z = Var(m);
  std::vector<Term> phi;
  for (std::size_t i = 0; i < form.b.size(); ++i) phi.push_back(form.b[i] * Pow(z, form.p[i]));
  Term value = Log(form.a) + Const(form.q) * Var(beta.slot) + Log(form.unit.polynomial_term(phi));
  Term H = unit_guard(phi, value);
  std::string desc;
  for (int i = 0; i < m; ++i) desc += (i ? ", " : "") + tvar(i) + " = y_" + std::to_string(i + 1);
  desc += ", x = z";
  out.terms.push_back({"H", H, hctx, desc});

  std::map<int, Term> bm = slot_map(beta.y, beta.z);
  Term Fb = substitute(F, bm);
  out.report.add(positivity("function-positive", Fb, pts, cell.ctx));
  out.obligations.push_back({"F(beta) = prepared form", cell.ctx, Fb, substitute(gsa_product_term(form), bm), pts,
                             tol, false});
  out.obligations.push_back({"z = exp(y_slot)", cell.ctx, beta.z, Exp(beta.y[static_cast<std::size_t>(beta.slot)]),
                             pts, tol, false});
  out.obligations.push_back({"log F(beta) = H(beta)", cell.ctx, Log(Fb), substitute(H, bm), pts, tol, false});
  finalize(out);
  return out;
}

RewriteOutput center_dichotomy(const DichotomyInput& in, const Cell& cell, const SamplePlan& plan, double tol) {
  RewriteOutput out = start("dichotomy", "dichotomy");
  const int m = static_cast<int>(in.beta.y.size());
  if (in.beta_ctx.n != m) {
    out.report.invalid("beta context must have one parameter per y component");
    return out;
  }
  if (in.forms.empty()) {
    out.report.invalid("at least one prepared form is required");
    return out;
  }
  if (in.combinator && max_var_index(*in.combinator) >= static_cast<int>(in.forms.size())) {
    out.report.invalid("the combinator takes one argument per form");
    return out;
  }
  Term theta = fold_constants(in.theta);
  std::vector<Point> pts = sample(cell, plan);
  std::vector<Point> img = image_points(in.beta, pts, cell.ctx, out.report);
  double eps = 0.0;
  for (const auto& df : in.forms) {
    if (!structurally_equal(fold_constants(df.form.theta), theta)) {
      out.report.invalid("form '" + df.form.name + "' does not share the center Theta");
      return out;
    }
    VerificationReport r = verify_gsa_points(df.form, df.f, img, tol);
    r.name = "form:" + df.form.name;
    double sup = 0.0;
    if (const auto* c = r.find("center")) {
      auto it = c->witnesses.find("sup_ratio");
      if (it != c->witnesses.end()) sup = it->second;
    }
    eps = std::max(eps, df.form.eps ? *df.form.eps : sup * kEpsMargin);
    out.report.add(std::move(r));
  }
  if (out.report.verdict == Verdict::Invalid) return out;

  std::optional<Term> combinator = in.combinator;
  if (!combinator && in.forms.size() == 1) combinator = Var(0);
  // Composition of the combinator with each form, logged forms through log.
  auto compose = [&](const std::vector<Term>& args) {
    std::map<int, Term> cm;
    for (std::size_t j = 0; j < args.size(); ++j) cm[static_cast<int>(j)] = args[j];
    return substitute(*combinator, cm);
  };
  std::vector<Term> direct;
  for (const auto& df : in.forms) direct.push_back(df.logged ? Log(df.f) : df.f);
  std::optional<Term> F = in.F;
  if (!F && combinator) F = compose(direct);

  if (is_zero_term(theta)) {
    out.report.data["branch"] = "zero-center";
    std::vector<Term> args;
    for (const auto& df : in.forms) {
      if (!df.logged) {
        args.push_back(df.f);
        continue;
      }
      RewriteOutput lp = log_of_prepared(df.form, df.f, in.beta, cell, plan, tol);
      lp.report.name = "log-prep:" + df.form.name;
      bool ok = lp.trusted;
      const EmittedTerm* H = lp.find("H");
      if (H) {
        out.terms.push_back({"H_" + df.form.name, H->term, H->ctx, H->variables});
        args.push_back(H->term);
      }
      for (auto& ob : lp.obligations) out.obligations.push_back(std::move(ob));
      std::erase_if(lp.report.sub, [](const VerificationReport& s) { return s.name.rfind("obligation:", 0) == 0; });
      out.report.add(std::move(lp.report));
      if (!ok || !H) {
        out.report.notes.push_back("log of '" + df.form.name + "' did not replay");
      }
    }
    if (combinator && args.size() == in.forms.size()) {
      Term H = compose(args);
      std::string desc;
      for (int i = 0; i < m; ++i) desc += (i ? ", " : "") + tvar(i) + " = y_" + std::to_string(i + 1);
      desc += ", x = z";
      out.terms.push_back({"H", H, in.beta_ctx, desc});
      std::map<int, Term> bm = slot_map(in.beta.y, in.beta.z);
      out.obligations.push_back(
          {"alpha = H(beta)", cell.ctx, substitute(*F, bm), substitute(H, bm), pts, tol, false});
    }
    finalize(out);
    if (out.obligations.empty()) out.trusted = out.report.verified();
    return out;
  }

  out.report.data["branch"] = "nonzero-center";
  out.report.witnesses["eps"] = eps;
  if (!(eps < 1.0)) {
    out.report.refute("center ratio epsilon " + std::to_string(eps) + " is not below 1");
    return out;
  }
  if (!F) {
    out.report.invalid("the nonzero-center branch needs F or a combinator");
    return out;
  }
  double delta = std::max(1.0 / (1.0 - eps), 1.0 + eps);
  out.report.witnesses["delta"] = delta;
  out.report.data["similarity"] = {{"lhs", "z"}, {"rhs", "Theta(y)"}, {"delta", delta}};
  RewriteOutput ee = eliminate_exp_beta(*F, in.beta, theta, delta, cell, plan, tol);
  for (auto& t : ee.terms) out.terms.push_back(t);
  out.obligations = ee.obligations;
  for (auto& s : ee.report.sub) {
    if (s.name.rfind("obligation:", 0) != 0) out.report.add(s);
  }
  for (const auto& [k, v] : ee.report.witnesses) out.report.witnesses[k] = v;
  finalize(out);
  return out;
}

}  // namespace logprep
