// SPDX-License-Identifier: Apache-2.0
#include "logprep/scale.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "logprep/errors.hpp"
#include "logprep/parallel.hpp"

namespace logprep {

namespace {

constexpr double kEpsMargin = 0.05;

struct PointValues {
  bool breakdown = false;
  int breakdown_level = 0;
  ScaleValues v;
};

PointValues values_or_breakdown(const LogScale& s, const Point& p) {
  PointValues out;
  try {
    out.v = scale_values(s, p);
  } catch (const ScaleBreakdown& e) {
    out.breakdown = true;
    out.breakdown_level = e.level();
  }
  return out;
}

std::string level_name(const char* prefix, int j) { return std::string(prefix) + std::to_string(j); }

}  // namespace

void LogScale::validate() const {
  if (center.empty()) throw Error(ErrorKind::InvalidInput, "scale '" + name + "' has no center");
  if (signs.size() != center.size()) {
    throw Error(ErrorKind::InvalidInput, "scale '" + name + "' sign pattern length differs from r+1");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorKind::InvalidInput, "scale '" + name + "' sign must be + or -");
  }
  if (!eps.empty() && eps.size() != center.size()) {
    throw Error(ErrorKind::InvalidInput, "scale '" + name + "' epsilon witnesses length differs from r+1");
  }
  for (std::size_t j = 0; j < center.size(); ++j) {
    if (!center[j].valid() || !depends_only_on_t(center[j], ctx)) {
      throw Error(ErrorKind::InvalidInput, "scale '" + name + "' center " + std::to_string(j) + " depends on x");
    }
    if (!eps.empty() && eps[j]) {
      if (eps[j]->theta_zero && !is_zero_term(center[j])) {
        throw Error(ErrorKind::InvalidInput,
                    "scale '" + name + "' marks level " + std::to_string(j) + " theta-zero but its center is nonzero");
      }
      if (!eps[j]->theta_zero && !(eps[j]->value > 0.0 && eps[j]->value < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "scale '" + name + "' epsilon witness must lie in (0,1)");
      }
    }
  }
}

std::vector<Term> scale_terms(const LogScale& s) {
  std::vector<Term> ys;
  ys.push_back(Var(s.ctx.x_index()) - s.center[0]);
  for (int j = 1; j <= s.r(); ++j) ys.push_back(Log(Abs(ys.back())) - s.center[static_cast<std::size_t>(j)]);
  return ys;
}

ScaleValues scale_values(const LogScale& s, std::span<const double> point) {
  ScaleValues out;
  out.y.reserve(s.center.size());
  double x = point[static_cast<std::size_t>(s.ctx.x_index())];
  for (std::size_t j = 0; j < s.center.size(); ++j) {
    EvalResult th = eval(s.center[j], point, s.ctx);
    if (th.domain_flag || !th.finite()) out.convention = true;
    if (j == 0) {
      out.y.push_back(x - th.value);
    } else {
      double prev = out.y.back();
      if (prev == 0.0) throw ScaleBreakdown(static_cast<int>(j));
      out.y.push_back(std::log(std::fabs(prev)) - th.value);
    }
  }
  return out;
}

SamplePlan plan_for_scale(const LogScale& s, const Cell& cell, const SamplePlan& plan) {
  SamplePlan p = plan;
  if (p.fiber_strategy != FiberStrategy::Auto) return p;
  p.fiber_strategy = FiberStrategy::Uniform;
  if (cell.lower && (structurally_equal(fold_constants(*cell.lower), fold_constants(s.center[0])) ||
                     is_zero_term(*cell.lower))) {
    p.fiber_strategy = FiberStrategy::GeometricLower;
  }
  return p;
}

VerificationReport verify_scale(const LogScale& s, const Cell& cell, const SamplePlan& plan) {
  s.validate();
  VerificationReport rep = make_report("scale:" + s.name);
  std::vector<Point> pts = sample(cell, plan_for_scale(s, cell, plan));
  auto vals = parallel_map<PointValues>(pts.size(), [&](std::size_t i) { return values_or_breakdown(s, pts[i]); });

  const int r = s.r();
  std::vector<bool> zero_center(static_cast<std::size_t>(r + 1));
  for (int j = 0; j <= r; ++j) zero_center[static_cast<std::size_t>(j)] = is_zero_term(s.center[static_cast<std::size_t>(j)]);

  VerificationReport signs = make_report("sign-constancy");
  std::vector<VerificationReport> small;
  for (int j = 0; j <= r; ++j) small.push_back(make_report(level_name("smallness-level-", j)));
  VerificationReport logbound = make_report("log-bound");
  std::vector<double> sup(static_cast<std::size_t>(r + 1), 0.0);
  std::size_t used = 0;
  const int x_idx = s.ctx.x_index();

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    const PointValues& pv = vals[i];
    if (pv.breakdown) {
      rep.inconclusive("scale breakdown at level " + std::to_string(pv.breakdown_level), p);
      continue;
    }
    if (pv.v.convention) {
      rep.inconclusive("center evaluation hit a totalization convention", p);
      continue;
    }
    ++used;
    const auto& y = pv.v.y;
    for (int j = 0; j <= r; ++j) {
      double yj = y[static_cast<std::size_t>(j)];
      int sg = yj > 0 ? 1 : (yj < 0 ? -1 : 0);
      if (sg != s.signs[static_cast<std::size_t>(j)]) {
        signs.refute("y_" + std::to_string(j) + " = " + std::to_string(yj) + " violates the declared sign", p);
      }
      if (zero_center[static_cast<std::size_t>(j)]) continue;
      double denom = j == 0 ? std::fabs(p[static_cast<std::size_t>(x_idx)])
                            : std::fabs(std::log(std::fabs(y[static_cast<std::size_t>(j - 1)])));
      double ratio = denom == 0.0 ? std::numeric_limits<double>::infinity() : std::fabs(yj) / denom;
      if (!std::isnan(ratio)) sup[static_cast<std::size_t>(j)] = std::max(sup[static_cast<std::size_t>(j)], ratio);
      auto& sm = small[static_cast<std::size_t>(j)];
      if (!(ratio < 1.0)) {
        sm.refute("ratio " + std::to_string(ratio) + " is not below 1 at level " + std::to_string(j), p);
      } else if (!s.eps.empty() && s.eps[static_cast<std::size_t>(j)] && !s.eps[static_cast<std::size_t>(j)]->theta_zero &&
                 !(ratio < s.eps[static_cast<std::size_t>(j)]->value)) {
        sm.refute("ratio " + std::to_string(ratio) + " exceeds the declared epsilon at level " + std::to_string(j), p);
      }
    }
    for (int l = 1; l <= r; ++l) {
      double lhs = std::fabs(y[static_cast<std::size_t>(l)]);
      double rhs = std::fabs(std::log(std::fabs(y[static_cast<std::size_t>(l - 1)])));
      if (lhs > rhs + 1e-12 * (1.0 + rhs)) {
        logbound.refute("|y_" + std::to_string(l) + "| exceeds |log|y_" + std::to_string(l - 1) + "||", p);
      }
    }
  }
  if (used == 0 && rep.verdict == Verdict::Verified) rep.inconclusive("no usable samples");

  rep.add(std::move(signs));
  for (int j = 0; j <= r; ++j) {
    auto& sm = small[static_cast<std::size_t>(j)];
    double sj = sup[static_cast<std::size_t>(j)];
    if (zero_center[static_cast<std::size_t>(j)]) {
      sm.message = "center is the zero term";
      sm.data["theta_zero"] = true;
    } else {
      sm.witnesses["sup_ratio"] = sj;
      double eps = sj * (1.0 + kEpsMargin);
      if (eps >= 1.0) {
        eps = 0.5 * (1.0 + sj);
        sm.notes.push_back("margin capped: sup estimate is close to 1");
      }
      sm.witnesses["epsilon"] = eps;
      rep.witnesses[level_name("sup_ratio_", j)] = sj;
      if (sm.verified()) rep.witnesses[level_name("epsilon_", j)] = eps;
    }
    rep.add(std::move(sm));
  }
  rep.add(std::move(logbound));
  rep.witnesses["samples"] = static_cast<double>(used);
  rep.notes.push_back("sampled evidence: epsilon witnesses are sup estimates with a 5% margin, not proofs");
  if (rep.verified()) rep.message = "all scale conditions hold on " + std::to_string(used) + " samples";
  return rep;
}

CenterRecovery recover_center(const std::function<std::vector<double>(const Point&)>& values_at, const Cell& cell,
                              const SamplePlan& plan, double tol) {
  CenterRecovery out;
  out.report = make_report("center-recovery");
  out.points = sample(cell, plan);
  const int x_idx = cell.ctx.x_index();
  std::map<Point, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const Point& p = out.points[i];
    std::vector<double> y = values_at(p);
    std::vector<double> th(y.size());
    th[0] = p[static_cast<std::size_t>(x_idx)] - y[0];
    for (std::size_t j = 1; j < y.size(); ++j) th[j] = std::log(std::fabs(y[j - 1])) - y[j];
    out.theta.push_back(std::move(th));
    groups[Point(p.begin(), p.end() - 1)].push_back(i);
  }
  double worst = 0.0;
  std::size_t worst_idx = 0;
  for (const auto& [t, idx] : groups) {
    std::size_t levels = out.theta[idx[0]].size();
    for (std::size_t j = 0; j < levels; ++j) {
      std::vector<double> col;
      for (auto i : idx) col.push_back(out.theta[i][j]);
      std::vector<double> sorted = col;
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
      double med = sorted[sorted.size() / 2];
      auto [mn, mx] = std::minmax_element(col.begin(), col.end());
      out.max_spread = std::max(out.max_spread, *mx - *mn);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        double dev = std::fabs(col[k] - med) / (1.0 + std::fabs(med));
        if (!(dev <= worst)) {
          worst = std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev;
          worst_idx = idx[k];
        }
      }
    }
  }
  out.report.witnesses["max_spread"] = out.max_spread;
  out.report.witnesses["max_relative_deviation"] = worst;
  if (worst > tol) {
    out.report.refute("recovered center is inconsistent across samples with equal t", out.points[worst_idx]);
  } else {
    out.report.message = "center recovered consistently on " + std::to_string(out.points.size()) + " samples";
  }
  return out;
}

double pow_product_values(const std::vector<double>& y, const std::vector<Rational>& q) {
  if (q.size() != y.size()) throw Error(ErrorKind::InvalidInput, "exponent vector length differs from r+1");
  double acc = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j].is_zero()) continue;
    if (y[j] == 0.0) {
      if (q[j].sign() > 0) return 0.0;
      return std::numeric_limits<double>::infinity();
    }
    acc += q[j].to_double() * std::log(std::fabs(y[j]));
  }
  return std::exp(acc);
}

double pow_product(const LogScale& s, std::span<const double> point, const std::vector<Rational>& q) {
  return pow_product_values(scale_values(s, point).y, q);
}

Term pow_product_term(const LogScale& s, const std::vector<Rational>& q) {
  if (static_cast<int>(q.size()) != s.r() + 1) {
    throw Error(ErrorKind::InvalidInput, "exponent vector length differs from r+1");
  }
  std::vector<Term> ys = scale_terms(s);
  std::optional<Term> acc;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j].is_zero()) continue;
    Term f = Pow(ys[j], q[j]);
    acc = acc ? Mul(*acc, f) : f;
  }
  return acc ? *acc : Const(1);
}

LogScale lift_scale(const LogScale& s, int l, const Cell& lifted_cell, const SamplePlan& plan) {
  s.validate();
  if (l < 1 || l > s.r()) throw Error(ErrorKind::InvalidInput, "lift level must lie in 1..r");
  std::vector<Term> ys = scale_terms(s);
  Term expected = Log(Abs(ys[static_cast<std::size_t>(l - 1)]));
  if (!lifted_cell.lifted() || !structurally_equal(*lifted_cell.lift_f, expected)) {
    throw Error(ErrorKind::InvalidInput, "lifted cell was not produced by lifting along log|y_" + std::to_string(l - 1) + "|");
  }
  LogScale out;
  out.name = s.name + "^" + std::to_string(l);
  out.ctx = s.ctx;
  out.center.assign(s.center.begin() + l, s.center.end());
  out.signs.assign(s.signs.begin() + l, s.signs.end());
  if (!s.eps.empty()) out.eps.assign(s.eps.begin() + l, s.eps.end());

  for (const auto& p : sample(*lifted_cell.base, plan)) {
    PointValues base = values_or_breakdown(s, p);
    if (base.breakdown) continue;
    Point q = p;
    q.back() = std::log(std::fabs(base.v.y[static_cast<std::size_t>(l - 1)]));
    PointValues lifted = values_or_breakdown(out, q);
    if (lifted.breakdown) throw Error(ErrorKind::Internal, "lifted scale breaks down where the base scale does not");
    for (std::size_t k = 0; k < lifted.v.y.size(); ++k) {
      double a = base.v.y[static_cast<std::size_t>(l) + k];
      double b = lifted.v.y[k];
      if (std::fabs(a - b) > 1e-9 * (1.0 + std::fabs(a))) {
        throw Error(ErrorKind::Internal, "lifted scale composition identity fails");
      }
    }
  }
  return out;
}

double iterated_exp(int r, double v) {
  for (int i = 0; i < r; ++i) v = std::exp(v);
  return v;
}

double iterated_log(int k, double v) {
  for (int i = 0; i < k; ++i) v = std::log(v);
  return v;
}

std::vector<Point> region_filter(const LogScale& s, const Region& region, std::span<const Point> points) {
  if (!(region.M > 0.0)) throw Error(ErrorKind::InvalidInput, "region bound M must be positive");
  if (region.mode == RegionMode::Le && (region.level < 1 || region.level > s.r())) {
    throw Error(ErrorKind::InvalidInput, "region level must lie in 1..r");
  }
  std::vector<Point> out;
  for (const auto& p : points) {
    PointValues pv = values_or_breakdown(s, p);
    if (pv.breakdown) continue;
    const auto& y = pv.v.y;
    bool keep = true;
    if (region.mode == RegionMode::Gt) {
      for (int l = 1; l <= s.r(); ++l) keep = keep && std::fabs(y[static_cast<std::size_t>(l)]) > region.M;
    } else {
      keep = std::fabs(y[static_cast<std::size_t>(region.level)]) <= region.M;
    }
    if (keep) out.push_back(p);
  }
  return out;
}

FindMResult find_M(const LogScale& s, const Cell& cell, double c, const std::vector<double>& lambda,
                   const SamplePlan& plan) {
  s.validate();
  const int r = s.r();
  if (r < 1) throw Error(ErrorKind::InvalidInput, "find_M needs r >= 1");
  if (static_cast<int>(lambda.size()) != r) throw Error(ErrorKind::InvalidInput, "lambda must have length r");
  FindMResult out;
  out.report = make_report("find-M");
  const double M0 = iterated_exp(r, 1.0);
  std::vector<Point> pts = sample(cell, plan_for_scale(s, cell, plan));
  auto vals = parallel_map<PointValues>(pts.size(), [&](std::size_t i) { return values_or_breakdown(s, pts[i]); });

  auto min_level = [r](const std::vector<double>& y) {
    double m = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= r; ++l) m = std::min(m, std::fabs(y[static_cast<std::size_t>(l)]));
    return m;
  };
  double M = M0;
  for (const auto& pv : vals) {
    if (pv.breakdown || pv.v.convention) continue;
    const auto& y = pv.v.y;
    double level_min = min_level(y);
    if (!(level_min > M0)) continue;
    double y1 = std::fabs(y[1]);
    bool ok = std::fabs(c) <= y1 / 4.0;
    for (int l = 1; l <= r && ok; ++l) {
      ok = std::fabs(lambda[static_cast<std::size_t>(l - 1)]) * iterated_log(l, y1) <= y1 / (4.0 * r);
    }
    if (!ok) M = std::max(M, level_min);
  }
  out.M = M;
  out.report.witnesses["M"] = M;
  out.report.witnesses["M_start"] = M0;

  std::size_t inside = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& pv = vals[i];
    if (pv.breakdown || pv.v.convention) continue;
    const auto& y = pv.v.y;
    if (!(min_level(y) > M)) continue;
    ++inside;
    double combo = c;
    for (int k = 1; k <= r; ++k) combo += lambda[static_cast<std::size_t>(k - 1)] * std::log(std::fabs(y[static_cast<std::size_t>(k)]));
    if (!(std::fabs(combo) <= std::fabs(y[1]) / 2.0)) {
      out.report.refute("target inequality fails on C_{>M}", pts[i]);
      break;
    }
  }
  out.report.witnesses["samples_in_region"] = static_cast<double>(inside);
  if (inside == 0) {
    out.report.inconclusive("C_{>M} contains no samples; the cell does not reach the asymptotic regime");
  } else if (out.report.verified()) {
    out.report.message = "target inequality holds on " + std::to_string(inside) + " samples of C_{>M}";
  }
  return out;
}

}  // namespace logprep
