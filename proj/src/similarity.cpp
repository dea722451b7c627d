// SPDX-License-Identifier: Apache-2.0
#include "logprep/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "logprep/errors.hpp"
#include "logprep/parallel.hpp"

namespace logprep {

namespace {

struct PairEval {
  EvalResult f;
  EvalResult g;
};

std::vector<PairEval> eval_pairs(const Term& f, const Term& g, std::span<const Point> points, const VarContext& ctx) {
  return parallel_map<PairEval>(points.size(), [&](std::size_t i) {
    return PairEval{eval(f, points[i], ctx), eval(g, points[i], ctx)};
  });
}

bool clean(const EvalResult& r) { return !r.domain_flag && r.finite(); }

std::vector<Rational> with_zero_front(const std::vector<Rational>& q) {
  std::vector<Rational> full{Rational(0)};
  full.insert(full.end(), q.begin(), q.end());
  return full;
}

double abs_sum(const std::vector<Rational>& q, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < q.size(); ++i) s += std::fabs(q[i].to_double());
  return s;
}

}  // namespace

VerificationReport check_similar(const Term& f, const Term& g, std::span<const Point> points, double delta,
                                 const VarContext& ctx) {
  if (!(delta > 1.0)) throw Error(ErrorKind::InvalidInput, "similarity witness delta must exceed 1");
  VerificationReport rep = make_report("similar");
  rep.witnesses["delta"] = delta;
  auto vals = eval_pairs(f, g, points, ctx);
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  bool f_zero = false;
  bool g_zero = false;
  std::size_t used = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto& [fv, gv] = vals[i];
    if (!clean(fv) || !clean(gv)) {
      rep.inconclusive("evaluation hit a totalization convention", points[i]);
      continue;
    }
    ++used;
    if (gv.value == 0.0) {
      g_zero = true;
      rep.refute("g vanishes; similar functions have no zeros", points[i]);
      continue;
    }
    if (fv.value == 0.0) f_zero = true;
    double ratio = fv.value / gv.value;
    sup = std::max(sup, ratio);
    inf = std::min(inf, ratio);
    if (!(ratio > 1.0 / delta && ratio < delta)) {
      rep.refute("ratio f/g = " + std::to_string(ratio) + " leaves (1/delta, delta)", points[i]);
    }
  }
  rep.data["f_vanished"] = f_zero;
  rep.data["g_vanished"] = g_zero;
  if (used > 0 && std::isfinite(sup)) {
    rep.witnesses["sup_ratio"] = sup;
    rep.witnesses["inf_ratio"] = inf;
  }
  rep.witnesses["points"] = static_cast<double>(used);
  if (used == 0) rep.inconclusive("no usable points");
  if (rep.verified()) rep.message = "ratio stays inside (1/delta, delta) on " + std::to_string(used) + " points";
  return rep;
}

DeltaSearch search_delta(const Term& f, const Term& g, std::span<const Point> points, const VarContext& ctx,
                         double margin) {
  DeltaSearch out;
  out.report = make_report("delta-search");
  auto vals = eval_pairs(f, g, points, ctx);
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto& [fv, gv] = vals[i];
    if (!clean(fv) || !clean(gv)) {
      out.report.inconclusive("evaluation hit a totalization convention", points[i]);
      continue;
    }
    if (gv.value == 0.0 || fv.value == 0.0) {
      out.report.refute("a function vanishes; no similarity witness exists", points[i]);
      return out;
    }
    double ratio = fv.value / gv.value;
    if (ratio < 0.0) {
      out.report.refute("f and g have different signs", points[i]);
      return out;
    }
    ++used;
    sup = std::max(sup, ratio);
    inf = std::min(inf, ratio);
  }
  if (used == 0) {
    out.report.inconclusive("no usable points");
    return out;
  }
  SimilarityWitness w;
  w.sup_ratio = sup;
  w.inf_ratio = inf;
  w.points = used;
  w.delta = std::max(sup, 1.0 / inf) * (1.0 + margin);
  w.delta = std::max(w.delta, 1.0 + margin);
  out.witness = w;
  out.report.witnesses["delta"] = w.delta;
  out.report.witnesses["sup_ratio"] = sup;
  out.report.witnesses["inf_ratio"] = inf;
  out.report.message = "witness found on " + std::to_string(used) + " points";
  return out;
}

LogStep log_step(double delta, double M, const LogScale& s, int l, const Term& psi, const Cell& cell,
                 const SamplePlan& plan) {
  s.validate();
  if (l < 1 || l > s.r()) throw Error(ErrorKind::InvalidInput, "log_step level must lie in 1..r");
  LogStep out;
  out.report = make_report("log-step");
  std::vector<Point> pts = sample(cell, plan_for_scale(s, cell, plan));
  std::vector<Term> ys = scale_terms(s);

  std::vector<Point> region_m = region_filter(s, {RegionMode::Gt, 1, M}, pts);
  VerificationReport premise = check_similar(Abs(ys[static_cast<std::size_t>(l - 1)]), psi, region_m, delta, s.ctx);
  premise.name = "premise";
  out.report.add(premise);
  if (!out.report.verified()) return out;

  out.N = std::max(M, 2.0 * std::log(delta));
  out.report.witnesses["N"] = out.N;
  std::vector<Point> region_n = region_filter(s, {RegionMode::Gt, 1, out.N}, pts);
  VerificationReport bracket = make_report("bracket");
  const Term& theta = s.center[static_cast<std::size_t>(l)];
  std::size_t used = 0;
  for (const auto& p : region_n) {
    ScaleValues v = scale_values(s, p);
    EvalResult pv = eval(psi, p, s.ctx);
    EvalResult tv = eval(theta, p, s.ctx);
    if (pv.domain_flag || tv.domain_flag || v.convention || !(pv.value > 0.0)) {
      bracket.inconclusive("Psi or Theta_l not cleanly defined", p);
      continue;
    }
    ++used;
    double yl = std::fabs(v.y[static_cast<std::size_t>(l)]);
    double mid = std::fabs(std::log(pv.value) - tv.value);
    if (!(yl / 2.0 < mid && mid < 2.0 * yl)) {
      bracket.refute("|log Psi - Theta_l| leaves (|y_l|/2, 2|y_l|)", p);
      break;
    }
  }
  bracket.witnesses["points"] = static_cast<double>(used);
  if (used == 0) bracket.inconclusive("C_{>N} contains no samples");
  if (bracket.verified()) bracket.witnesses["delta"] = 2.0;
  out.report.add(bracket);
  if (out.report.verified()) out.report.message = "factor-2 bracket holds on C_{>N}";
  return out;
}

ChainMu chain_mu(const LogScale& s, const Term& psi, const std::vector<Rational>& q, double M, double delta,
                 const Cell& cell, const SamplePlan& plan, double margin) {
  s.validate();
  const int r = s.r();
  if (r < 1) throw Error(ErrorKind::InvalidInput, "chain_mu needs r >= 1");
  if (static_cast<int>(q.size()) != r) throw Error(ErrorKind::InvalidInput, "q must have length r");
  ChainMu out;
  out.report = make_report("chain-mu");
  std::vector<Point> pts = sample(cell, plan_for_scale(s, cell, plan));
  std::vector<Term> ys = scale_terms(s);

  VerificationReport premise =
      check_similar(Abs(ys[1]), psi, region_filter(s, {RegionMode::Gt, 1, M}, pts), delta, s.ctx);
  premise.name = "premise";
  out.report.add(premise);
  if (!out.report.verified()) return out;

  out.psi.push_back(psi);
  double N = M;
  double d = delta;
  for (int l = 2; l <= r; ++l) {
    LogStep step = log_step(d, N, s, l, out.psi.back(), cell, plan);
    step.report.name = "log-step-" + std::to_string(l);
    out.report.add(step.report);
    if (!out.report.verified()) return out;
    N = step.N;
    d = 2.0;
    out.psi.push_back(Abs(Log(out.psi.back()) - s.center[static_cast<std::size_t>(l)]));
  }
  out.N = N;

  std::optional<Term> mu;
  for (int l = 1; l <= r; ++l) {
    const Rational& ql = q[static_cast<std::size_t>(l - 1)];
    if (ql.is_zero()) continue;
    Term f = Pow(out.psi[static_cast<std::size_t>(l - 1)], ql);
    mu = mu ? Mul(*mu, f) : f;
  }
  out.mu = mu ? *mu : Const(1);
  double predicted = std::pow(delta, std::fabs(q[0].to_double())) * std::pow(2.0, abs_sum(q, 1));
  if (!(predicted > 1.0)) predicted = 1.0 + margin;
  out.delta = predicted;
  out.report.witnesses["N"] = N;
  out.report.witnesses["delta"] = predicted;

  std::vector<Point> region_n = region_filter(s, {RegionMode::Gt, 1, N}, pts);
  VerificationReport fin = check_similar(pow_product_term(s, with_zero_front(q)), out.mu, region_n, predicted, s.ctx);
  fin.name = "product-similarity";
  out.report.add(fin);
  if (out.report.verified()) out.report.message = "product of |y_j|^{q_j} is similar to mu on C_{>N}";
  return out;
}

CenterStep center_step(const LogScale& s, const Term& psi, const std::vector<Rational>& q, double delta,
                       const Cell& cell, const SamplePlan& plan) {
  s.validate();
  const int r = s.r();
  if (r < 1) throw Error(ErrorKind::InvalidInput, "center_step needs r >= 1");
  if (static_cast<int>(q.size()) != r) throw Error(ErrorKind::InvalidInput, "q must have length r");
  CenterStep out;
  out.report = make_report("center-step");
  std::vector<Point> pts = sample(cell, plan_for_scale(s, cell, plan));
  std::vector<Term> ys = scale_terms(s);

  Term lead = Mul(psi, pow_product_term(s, with_zero_front(q)));
  VerificationReport premise = check_similar(ys[0], lead, pts, delta, s.ctx);
  premise.name = "premise";
  out.report.add(premise);
  if (!out.report.verified()) return out;

  double kappa = std::max(1.0 / delta, delta);
  std::vector<double> lambda;
  for (const auto& v : q) lambda.push_back(v.to_double());
  FindMResult fm = find_M(s, cell, std::log(kappa), lambda, plan);
  out.report.add(fm.report);
  if (!out.report.verified()) return out;
  out.M = fm.M;

  Term gamma = Abs(Log(Abs(psi)) - s.center[1]);
  VerificationReport bracket =
      check_similar(Abs(ys[1]), gamma, region_filter(s, {RegionMode::Gt, 1, out.M}, pts), 2.0, s.ctx);
  bracket.name = "first-level-similarity";
  out.report.add(bracket);
  if (!out.report.verified()) return out;

  ChainMu chain = chain_mu(s, gamma, q, out.M, 2.0, cell, plan);
  out.report.add(chain.report);
  if (!out.report.verified()) return out;
  out.N = chain.N;
  out.xi = Mul(psi, chain.mu);
  out.delta = delta * chain.delta;

  VerificationReport fin =
      check_similar(ys[0], out.xi, region_filter(s, {RegionMode::Gt, 1, out.N}, pts), out.delta, s.ctx);
  fin.name = "center-similarity";
  out.report.add(fin);
  out.report.witnesses["M"] = out.M;
  out.report.witnesses["N"] = out.N;
  out.report.witnesses["delta"] = out.delta;
  if (out.report.verified()) out.report.message = "y_0 is similar to xi = Psi * mu on C_{>N}";
  return out;
}

}  // namespace logprep
