// SPDX-License-Identifier: Apache-2.0
#include "logprep/cell.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "logprep/errors.hpp"

namespace logprep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double radical_inverse(std::uint64_t k, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % static_cast<std::uint64_t>(base));
    k /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

double clean_eval(const Term& t, const Point& p, const VarContext& ctx, bool* ok) {
  EvalResult r = eval(t, p, ctx);
  *ok = !r.domain_flag && r.finite();
  return r.value;
}

Point with_x(const Point& t, double x) {
  Point p = t;
  p.push_back(x);
  return p;
}

}  // namespace

void Cell::validate() const {
  if (static_cast<int>(t_box.size()) != ctx.n) {
    throw Error(ErrorKind::InvalidInput, "cell '" + name + "' has " + std::to_string(t_box.size()) +
                                             " parameter intervals, context expects " + std::to_string(ctx.n));
  }
  for (const auto& [lo, hi] : t_box) {
    if (!(lo < hi)) throw Error(ErrorKind::InvalidInput, "cell '" + name + "' has an empty parameter interval");
  }
  for (const auto* b : {&lower, &upper}) {
    if (*b && !depends_only_on_t(**b, ctx)) {
      throw Error(ErrorKind::InvalidInput, "cell '" + name + "' fiber bound depends on x");
    }
    if (*b && max_var_index(**b) >= ctx.dim()) {
      throw Error(ErrorKind::InvalidInput, "cell '" + name + "' fiber bound uses a variable outside the context");
    }
  }
}

const char* to_string(TStrategy s) { return s == TStrategy::StratifiedGrid ? "stratified-grid" : "low-discrepancy"; }

const char* to_string(FiberStrategy s) {
  switch (s) {
    case FiberStrategy::Auto: return "auto";
    case FiberStrategy::Uniform: return "uniform";
    case FiberStrategy::GeometricLower: return "geometric-toward-lower";
    case FiberStrategy::GeometricUpper: return "geometric-toward-upper";
  }
  return "auto";
}

TStrategy t_strategy_from_string(const std::string& s) {
  if (s == "stratified-grid") return TStrategy::StratifiedGrid;
  if (s == "low-discrepancy") return TStrategy::LowDiscrepancy;
  throw Error(ErrorKind::InvalidInput, "unknown t strategy '" + s + "'");
}

FiberStrategy fiber_strategy_from_string(const std::string& s) {
  if (s == "auto") return FiberStrategy::Auto;
  if (s == "uniform") return FiberStrategy::Uniform;
  if (s == "geometric-toward-lower") return FiberStrategy::GeometricLower;
  if (s == "geometric-toward-upper") return FiberStrategy::GeometricUpper;
  throw Error(ErrorKind::InvalidInput, "unknown fiber strategy '" + s + "'");
}

SamplePlan SamplePlan::with_total(int n, std::size_t total, std::uint64_t seed) {
  SamplePlan p;
  p.seed = seed;
  double per = std::pow(static_cast<double>(std::max<std::size_t>(total, 1)), 1.0 / (n + 1));
  int c = std::max(2, static_cast<int>(std::lround(per)));
  p.counts.assign(static_cast<std::size_t>(n + 1), c);
  return p;
}

std::size_t SamplePlan::total() const {
  std::size_t t = 1;
  for (int c : counts) t *= static_cast<std::size_t>(c);
  return t;
}

void SamplePlan::validate(int n) const {
  if (static_cast<int>(counts.size()) != n + 1) {
    throw Error(ErrorKind::InvalidInput, "sample plan needs " + std::to_string(n + 1) + " axis counts");
  }
  for (int c : counts) {
    if (c < 2) throw Error(ErrorKind::InvalidInput, "sample plan counts must be at least 2 per axis");
  }
  if (!(boundary_margin > 0.0 && boundary_margin < 0.5)) {
    throw Error(ErrorKind::InvalidInput, "boundary margin must lie in (0, 1/2)");
  }
  if (!(unbounded_cap > 0.0)) throw Error(ErrorKind::InvalidInput, "unbounded cap must be positive");
}

std::vector<Point> sample_t(const Cell& cell, const SamplePlan& plan) {
  plan.validate(cell.ctx.n);
  const int n = cell.ctx.n;
  std::mt19937_64 rng(plan.seed);
  double m = plan.boundary_margin;
  auto place = [&](int axis, double u) {
    double lo = cell.t_box[static_cast<std::size_t>(axis)].first.to_double();
    double hi = cell.t_box[static_cast<std::size_t>(axis)].second.to_double();
    return lo + (hi - lo) * (m + (1.0 - 2.0 * m) * u);
  };
  std::vector<Point> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  if (plan.t_strategy == TStrategy::StratifiedGrid) {
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      int c = plan.counts[static_cast<std::size_t>(a)];
      for (int k = 0; k < c; ++k) axes[static_cast<std::size_t>(a)].push_back(place(a, (k + unit_draw(rng)) / c));
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      Point t(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) t[static_cast<std::size_t>(a)] = axes[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
      out.push_back(std::move(t));
      int a = n - 1;
      while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == axes[static_cast<std::size_t>(a)].size()) {
        idx[static_cast<std::size_t>(a)] = 0;
        --a;
      }
      if (a < 0) break;
    }
    return out;
  }
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(plan.counts[static_cast<std::size_t>(a)]);
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (auto& s : shift) s = unit_draw(rng);
  for (std::size_t k = 1; k <= total; ++k) {
    Point t(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      double u = radical_inverse(k, kPrimes[a % 16]) + shift[static_cast<std::size_t>(a)];
      t[static_cast<std::size_t>(a)] = place(a, u - std::floor(u));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::pair<double, double> fiber_at(const Cell& cell, const Point& t) {
  double lo = -kInf;
  double hi = kInf;
  bool ok = true;
  if (cell.lower) {
    double v = clean_eval(*cell.lower, with_x(t, 0.0), cell.ctx, &ok);
    if (ok) {
      lo = v;
    } else if (!cell.lifted()) {
      throw Error(ErrorKind::InvalidInput, "lower fiber bound of cell '" + cell.name + "' is not finite at a sample");
    }
  }
  if (cell.upper) {
    double v = clean_eval(*cell.upper, with_x(t, 0.0), cell.ctx, &ok);
    if (ok) {
      hi = v;
    } else if (!cell.lifted()) {
      throw Error(ErrorKind::InvalidInput, "upper fiber bound of cell '" + cell.name + "' is not finite at a sample");
    }
  }
  return {lo, hi};
}

std::vector<Point> sample(const Cell& cell, const SamplePlan& plan) {
  cell.validate();
  if (cell.lifted()) {
    std::vector<Point> base = sample(*cell.base, plan);
    std::vector<Point> out;
    out.reserve(base.size());
    for (auto& p : base) {
      bool ok = true;
      double v = clean_eval(*cell.lift_f, p, cell.ctx, &ok);
      if (!ok) continue;
      p.back() = v;
      out.push_back(std::move(p));
    }
    return out;
  }
  std::vector<Point> ts = sample_t(cell, plan);
  std::mt19937_64 rng(plan.seed ^ 0x5bd1e995ULL);
  const int c = plan.counts.back();
  const double m = plan.boundary_margin;
  std::vector<Point> out;
  out.reserve(ts.size() * static_cast<std::size_t>(c));
  for (const auto& t : ts) {
    auto [lo, hi] = fiber_at(cell, t);
    if (!(lo < hi)) throw DegenerateCell(t);
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      lo = -plan.unbounded_cap;
      hi = plan.unbounded_cap;
    } else if (!std::isfinite(lo)) {
      lo = hi - plan.unbounded_cap;
    } else if (!std::isfinite(hi)) {
      hi = lo + plan.unbounded_cap;
    }
    double w = hi - lo;
    for (int k = 0; k < c; ++k) {
      double u = (k + unit_draw(rng)) / c;
      double x = 0.0;
      switch (plan.fiber_strategy) {
        case FiberStrategy::Auto:
        case FiberStrategy::Uniform: x = lo + w * (m + (1.0 - 2.0 * m) * u); break;
        case FiberStrategy::GeometricLower:
        case FiberStrategy::GeometricUpper: {
          double g = std::exp(std::log(m) + (std::log1p(-m) - std::log(m)) * u);
          x = plan.fiber_strategy == FiberStrategy::GeometricLower ? lo + w * g : hi - w * g;
          break;
        }
      }
      if (x <= lo) x = std::nextafter(lo, kInf);
      if (x >= hi) x = std::nextafter(hi, -kInf);
      if (!(lo < x && x < hi)) throw DegenerateCell(t);
      if (cell.nonzero_fiber && std::fabs(x) <= cell.zero_exclusion) continue;
      out.push_back(with_x(t, x));
    }
  }
  return out;
}

Cell lift(const Cell& cell, const Term& f, const SamplePlan& plan) {
  std::vector<Point> pts = sample(cell, plan);
  std::map<Point, std::vector<std::pair<double, double>>> by_t;
  for (const auto& p : pts) {
    bool ok = true;
    double v = clean_eval(f, p, cell.ctx, &ok);
    if (!ok) {
      throw Error(ErrorKind::UnsupportedLift, "lift function hits a totalization convention at a sample");
    }
    Point t(p.begin(), p.end() - 1);
    by_t[t].push_back({p.back(), v});
  }
  int direction = 0;
  for (auto& [t, vals] : by_t) {
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 1; i < vals.size(); ++i) {
      double d = vals[i].second - vals[i - 1].second;
      if (d == 0.0) continue;
      int s = d > 0 ? 1 : -1;
      if (direction == 0) direction = s;
      if (s != direction) {
        throw Error(ErrorKind::UnsupportedLift, "lift function is not monotone in x on the cell samples");
      }
    }
  }
  if (direction == 0) throw Error(ErrorKind::UnsupportedLift, "lift function is constant in x on the cell samples");
  Cell out;
  out.name = cell.name + "^f";
  out.ctx = cell.ctx;
  out.t_box = cell.t_box;
  const int xi = cell.ctx.x_index();
  auto image = [&](const std::optional<Term>& b) -> std::optional<Term> {
    if (!b) return std::nullopt;
    return substitute(f, {{xi, *b}});
  };
  out.lift_decreasing = direction < 0;
  if (out.lift_decreasing) {
    out.lower = image(cell.upper);
    out.upper = image(cell.lower);
  } else {
    out.lower = image(cell.lower);
    out.upper = image(cell.upper);
  }
  out.base = std::make_shared<const Cell>(cell);
  out.lift_f = f;
  return out;
}

VerificationReport simple_cell_check(const Cell& cell, const SamplePlan& plan) {
  VerificationReport r = make_report("simple-cell");
  if (!cell.lower || !is_zero_term(*cell.lower)) {
    r.verdict = Verdict::Refuted;
    r.message = "fiber lower bound is not the zero term";
    return r;
  }
  for (const auto& t : sample_t(cell, plan)) {
    auto [lo, hi] = fiber_at(cell, t);
    (void)lo;
    if (!(hi > 0.0)) {
      Point p = t;
      p.push_back(hi);
      r.refute("fiber upper bound is not positive", p);
      return r;
    }
  }
  r.message = "fibers are ]0, d_t[ on all parameter samples";
  return r;
}

bool cell_contains(const Cell& cell, const Point& p) {
  Point t(p.begin(), p.end() - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < cell.t_box[i].first.to_double() || t[i] > cell.t_box[i].second.to_double()) return false;
  }
  auto [lo, hi] = fiber_at(cell, t);
  return lo < p.back() && p.back() < hi;
}

Cell make_box_cell(std::string name, int n, std::vector<std::pair<Rational, Rational>> t_box,
                   std::optional<Term> lower, std::optional<Term> upper) {
  Cell c;
  c.name = std::move(name);
  c.ctx.n = n;
  c.t_box = std::move(t_box);
  c.lower = std::move(lower);
  c.upper = std::move(upper);
  c.validate();
  return c;
}

}  // namespace logprep
