// SPDX-License-Identifier: Apache-2.0
#include "logprep/preparation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logprep/classify.hpp"
#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"
#include "logprep/parallel.hpp"
#include "logprep/similarity.hpp"

namespace logprep {

namespace {

constexpr std::size_t kMaxUnitBoxes = 200000;
constexpr double kPhiSlack = 1e-12;
constexpr double kCoefficientAtol = 1e-300;

Point with_dummy_x(const Point& t) {
  Point p = t;
  p.push_back(0.0);
  return p;
}

// Shared data of every prepared product a * |Y|^q * exp(c) * v(phi).
struct ProductData {
  const LogScale* scale = nullptr;
  Term a;
  std::vector<Rational> q;
  const UnitSpec* unit = nullptr;
  std::vector<Term> b;
  std::vector<std::vector<Rational>> P;
  std::optional<Term> exp_c;
  std::vector<std::optional<Term>> exp_d;
};

enum class PointStatus { Ok, Convention, Breakdown };

struct PointEval {
  PointStatus status = PointStatus::Ok;
  double a = 0.0;
  double lead = 0.0;
  double rhs = 0.0;
  double f = 0.0;
  double phi_max = 0.0;
  std::size_t phi_arg = 0;
};

PointEval eval_point(const ProductData& d, const Term& f, const Point& p) {
  PointEval out;
  const VarContext& ctx = d.scale->ctx;
  ScaleValues sv;
  try {
    sv = scale_values(*d.scale, p);
  } catch (const ScaleBreakdown&) {
    out.status = PointStatus::Breakdown;
    return out;
  }
  EvalResult ar = eval(d.a, p, ctx);
  EvalResult fr = eval(f, p, ctx);
  if (sv.convention || ar.domain_flag || fr.domain_flag || !ar.finite() || !fr.finite()) {
    out.status = PointStatus::Convention;
    return out;
  }
  out.a = ar.value;
  out.f = fr.value;
  double lead = ar.value * pow_product_values(sv.y, d.q);
  if (d.exp_c) {
    EvalResult cr = eval(*d.exp_c, p, ctx);
    if (cr.domain_flag) {
      out.status = PointStatus::Convention;
      return out;
    }
    lead *= cr.value;
  }
  std::vector<double> phi(d.b.size());
  for (std::size_t j = 0; j < d.b.size(); ++j) {
    EvalResult br = eval(d.b[j], p, ctx);
    if (br.domain_flag) {
      out.status = PointStatus::Convention;
      return out;
    }
    double v = br.value * pow_product_values(sv.y, d.P[j]);
    if (j < d.exp_d.size() && d.exp_d[j]) {
      EvalResult dr = eval(*d.exp_d[j], p, ctx);
      if (dr.domain_flag) {
        out.status = PointStatus::Convention;
        return out;
      }
      v *= dr.value;
    }
    phi[j] = v;
    if (std::fabs(v) > out.phi_max) {
      out.phi_max = std::fabs(v);
      out.phi_arg = j;
    }
  }
  out.lead = lead;
  out.rhs = lead * d.unit->eval(phi);
  return out;
}

// Size and dependency checks; failures are malformed input.
bool check_shapes(const ProductData& d, VerificationReport& rep) {
  const int r = d.scale->r();
  const VarContext& ctx = d.scale->ctx;
  if (!d.unit->v) {
    rep.invalid("unit has no coefficient table");
    return false;
  }
  if (static_cast<int>(d.q.size()) != r + 1) {
    rep.invalid("q has length " + std::to_string(d.q.size()) + ", expected r+1 = " + std::to_string(r + 1));
    return false;
  }
  if (static_cast<int>(d.b.size()) != d.unit->s()) {
    rep.invalid("b has " + std::to_string(d.b.size()) + " entries but the unit has arity " +
                std::to_string(d.unit->s()));
    return false;
  }
  if (d.P.size() != d.b.size()) {
    rep.invalid("P must have one row per base function");
    return false;
  }
  for (const auto& row : d.P) {
    if (static_cast<int>(row.size()) != r + 1) {
      rep.invalid("every row of P must have length r+1");
      return false;
    }
  }
  if (!d.exp_d.empty() && d.exp_d.size() != d.b.size()) {
    rep.invalid("exp(d) must be empty or have one entry per base function");
    return false;
  }
  if (!depends_only_on_t(d.a, ctx)) {
    rep.invalid("coefficient a depends on x");
    return false;
  }
  for (std::size_t j = 0; j < d.b.size(); ++j) {
    if (!depends_only_on_t(d.b[j], ctx)) {
      rep.invalid("base function b_" + std::to_string(j + 1) + " depends on x");
      return false;
    }
  }
  return true;
}

VerificationReport check_product(const ProductData& d, const Term& f, std::span<const Point> pts, double tol) {
  VerificationReport rep = make_report("pointwise");
  const bool a_zero = is_zero_term(d.a);
  const double tail = d.unit->v ? d.unit->v->tail_bound : 0.0;
  auto evals = parallel_map<PointEval>(pts.size(), [&](std::size_t i) { return eval_point(d, f, pts[i]); });

  VerificationReport coef = make_report("coefficient");
  VerificationReport phi = make_report("phi-range");
  VerificationReport eq = make_report("equality");
  double max_rel = 0.0;
  double phi_sup = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const PointEval& e = evals[i];
    if (e.status == PointStatus::Breakdown) {
      eq.inconclusive("scale breaks down at a sample", pts[i]);
      continue;
    }
    if (e.status == PointStatus::Convention) {
      eq.inconclusive("evaluation hit a totalization convention", pts[i]);
      continue;
    }
    ++used;
    if (!a_zero && !(std::fabs(e.a) > kCoefficientAtol)) coef.refute("coefficient a vanishes at a sample", pts[i]);
    phi_sup = std::max(phi_sup, e.phi_max);
    if (e.phi_max > 1.0 + kPhiSlack) {
      phi.refute("phi_" + std::to_string(e.phi_arg + 1) + " leaves [-1,1]", pts[i]);
    }
    double err = std::fabs(e.f - e.rhs);
    double allowed = tol * (1.0 + std::fabs(e.f)) + std::fabs(e.lead) * tail;
    double rel = err / (1.0 + std::fabs(e.f));
    max_rel = std::max(max_rel, rel);
    if (!(err <= allowed)) {
      eq.refute("f differs from the prepared product by " + std::to_string(err), pts[i]);
    }
  }
  if (used == 0) eq.inconclusive("no usable samples");
  coef.data["zero_term"] = a_zero;
  phi.witnesses["sup_abs_phi"] = phi_sup;
  eq.witnesses["max_relative_error"] = max_rel;
  eq.witnesses["samples"] = static_cast<double>(used);
  rep.add(coef);
  rep.add(phi);
  rep.add(eq);
  if (rep.verified()) rep.message = "prepared product matches on " + std::to_string(used) + " samples";
  return rep;
}

bool same_center(const LogScale& a, const LogScale& b) {
  if (a.center.size() != b.center.size()) return false;
  for (std::size_t j = 0; j < a.center.size(); ++j) {
    if (!structurally_equal(fold_constants(a.center[j]), fold_constants(b.center[j]))) return false;
  }
  return true;
}

VerificationReport leading_term(const Term& f, const Term& a, const LogScale& scale, const std::vector<Rational>& q,
                                const VerificationReport& unit_rep, std::span<const Point> pts) {
  auto inf = unit_rep.witnesses.find("inf");
  auto sup = unit_rep.witnesses.find("sup");
  double delta = std::max(sup->second, 1.0 / inf->second) * (1.0 + kDefaultWitnessMargin);
  VerificationReport rep = check_similar(f, a * pow_product_term(scale, q), pts, delta, scale.ctx);
  rep.name = "leading-term";
  return rep;
}

ProductData la_data(const LAPreparingTuple& t) {
  ProductData d;
  d.scale = &t.scale;
  d.a = t.a;
  d.q = t.q;
  d.unit = &t.unit;
  d.b = t.b;
  d.P = t.P;
  return d;
}

Term member_log(const FamilyMember& m) { return cancel_log_exp(Log(m.term)); }

class ErVerifier {
public:
  ErVerifier(const Cell& cell, const ExpFamily& family, const SamplePlan& plan, double tol)
      : cell_(cell), family_(family), plan_(plan), tol_(tol) {}

  VerificationReport run(const ERPreparingTuple& t, const Term& f) {
    VerificationReport rep = make_report("er:" + t.name);
    rep.add(verify_family(family_, cell_, plan_, tol_));
    if (t.e >= 0) {
      VerificationReport sc = verify_scale(t.scale, cell_, plan_);
      sc.name = "scale";
      rep.add(sc);
      top_ = &t.scale;
      pts_ = sample(cell_, plan_for_scale(t.scale, cell_, plan_));
    } else {
      pts_ = sample(cell_, plan_);
    }
    rep.add(level(t, f, "tuple"));
    rep.witnesses["e"] = t.e;
    rep.witnesses["samples"] = static_cast<double>(pts_.size());
    if (rep.verified()) rep.message = "(e,r)-preparation verified at level " + std::to_string(t.e);
    return rep;
  }

private:
  VerificationReport level(const ERPreparingTuple& t, const Term& f, const std::string& label) {
    VerificationReport rep = make_report(label);
    rep.witnesses["e"] = t.e;
    if (t.e < -1) {
      rep.invalid("level must be at least -1");
      return rep;
    }
    if (t.e == -1) return zero_function(f, rep);

    if (!same_center(t.scale, *top_)) {
      rep.refute("nested tuple uses a center different from the outer scale");
      return rep;
    }
    ProductData d;
    d.scale = &t.scale;
    d.a = t.a;
    d.q = t.q;
    d.unit = &t.unit;
    d.b = t.b;
    d.P = t.P;
    const FamilyMember* mc = nullptr;
    if (!exponential_slot(t, t.exp_c, t.c, "exp(c)", rep, mc)) return rep;
    if (mc) d.exp_c = mc->term;
    std::vector<const FamilyMember*> md(t.exp_d.size(), nullptr);
    if (!t.exp_d.empty() && t.d.size() != t.exp_d.size()) {
      rep.invalid("exp(d) names and nested d tuples differ in length");
      return rep;
    }
    for (std::size_t j = 0; j < t.exp_d.size(); ++j) {
      if (!exponential_slot(t, t.exp_d[j], t.d[j], "exp(d_" + std::to_string(j + 1) + ")", rep, md[j])) return rep;
      d.exp_d.push_back(md[j] ? std::optional<Term>(md[j]->term) : std::nullopt);
    }
    if (!check_shapes(d, rep)) return rep;

    rep.add(check_product(d, f, pts_, tol_));

    if (t.c) rep.add(level(*t.c, mc ? member_log(*mc) : Const(0), "c"));
    for (std::size_t j = 0; j < t.d.size(); ++j) {
      if (t.d[j]) rep.add(level(*t.d[j], md[j] ? member_log(*md[j]) : Const(0), "d_" + std::to_string(j + 1)));
    }
    if (mc) rep.add(plus_condition(*mc, t.c ? t.c->e : -1));
    for (std::size_t j = 0; j < md.size(); ++j) {
      if (md[j]) rep.add(plus_condition(*md[j], t.d[j] ? t.d[j]->e : -1));
    }
    return rep;
  }

  bool exponential_slot(const ERPreparingTuple& t, const std::optional<std::string>& name,
                        const std::shared_ptr<const ERPreparingTuple>& nested, const std::string& what,
                        VerificationReport& rep, const FamilyMember*& member) {
    member = nullptr;
    if (!name) {
      if (nested && nested->e != -1) {
        rep.invalid(what + " has a nested tuple but no family member");
        return false;
      }
      return true;
    }
    member = family_.find(*name);
    if (!member) {
      rep.invalid(what + " names missing family member '" + *name + "'");
      return false;
    }
    if (!nested) {
      rep.invalid(what + " names a member but carries no nested tuple");
      return false;
    }
    if (nested->e > t.e - 1) {
      rep.refute("nesting depth mismatch: " + what + " is prepared at level " + std::to_string(nested->e) +
                 " inside a level " + std::to_string(t.e) + " tuple");
      return false;
    }
    return true;
  }

  VerificationReport zero_function(const Term& f, VerificationReport& rep) {
    const VarContext& ctx = cell_.ctx;
    std::size_t used = 0;
    for (const auto& p : pts_) {
      EvalResult r = eval(f, p, ctx);
      if (r.domain_flag) {
        rep.inconclusive("evaluation hit a totalization convention", p);
        continue;
      }
      ++used;
      if (!(std::fabs(r.value) <= tol_)) {
        rep.refute("level -1 requires the zero function", p);
        break;
      }
    }
    rep.witnesses["samples"] = static_cast<double>(used);
    return rep;
  }

  // Linear-combination condition: log(member) = sum c_k log(E_k) with each
  // log(E_k) of exponential number at most the member's nested level.
  VerificationReport plus_condition(const FamilyMember& m, int nested_level) {
    VerificationReport rep = make_report("linear-combination:" + m.name);
    if (m.witness.empty()) {
      rep.notes.push_back("no linear-combination witness supplied; condition not checked");
      return rep;
    }
    ExpFamily base;
    base.ctx = family_.ctx;
    base.members = family_.base_members();
    int worst = -1;
    for (const auto& [name, coeff] : m.witness) {
      if (coeff.is_zero()) continue;
      const FamilyMember* e = family_.find_base(name);
      if (!e) {
        rep.invalid("witness names missing base member '" + name + "'");
        return rep;
      }
      int bound = 0;
      try {
        bound = exp_number_bound(member_log(*e), base, family_.ctx).bound;
      } catch (const Error& err) {
        rep.refute(std::string("cannot bound the exponential number: ") + err.what());
        return rep;
      }
      worst = std::max(worst, bound);
      if (bound > nested_level) {
        rep.refute("log(" + name + ") has exponential number bound " + std::to_string(bound) +
                   " above the nested level " + std::to_string(nested_level));
      }
    }
    rep.witnesses["max_bound"] = worst;
    rep.witnesses["level"] = nested_level;
    if (rep.verified()) rep.message = "log(" + m.name + ") is a rational combination within level";
    return rep;
  }

  const Cell& cell_;
  const ExpFamily& family_;
  const SamplePlan& plan_;
  double tol_;
  const LogScale* top_ = nullptr;
  std::vector<Point> pts_;
};

Term polynomial_part(const UnitSpec& unit, const std::vector<Term>& args) { return unit.polynomial_term(args); }

double eval_nice(const NiceTree& tree, const Point& p, const VarContext& ctx,
                 const std::map<std::string, const HeirCertificate*>& heirs, bool& convention) {
  Point args;
  for (const auto& arg : tree.args) {
    if (const Term* t = std::get_if<Term>(&arg)) {
      EvalResult r = eval(*t, p, ctx);
      convention = convention || r.domain_flag;
      args.push_back(r.value);
    } else if (const std::string* name = std::get_if<std::string>(&arg)) {
      EvalResult r = eval(heirs.at(*name)->g, p, ctx);
      convention = convention || r.domain_flag;
      args.push_back(r.value);
    } else {
      args.push_back(eval_nice(*std::get<std::shared_ptr<const NiceTree>>(arg), p, ctx, heirs, convention));
    }
  }
  args.push_back(0.0);
  EvalResult r = eval(tree.combinator, args, VarContext{static_cast<int>(tree.args.size())});
  convention = convention || r.domain_flag;
  return r.value;
}

void collect_tree(const NiceTree& tree, const VarContext& ctx, std::vector<std::string>& names,
                  VerificationReport& rep) {
  if (contains_op(tree.combinator, Op::Exp)) rep.invalid("combinator must be log-analytic (no exp)");
  if (max_var_index(tree.combinator) >= static_cast<int>(tree.args.size())) {
    rep.invalid("combinator uses more variables than the tree has arguments");
  }
  for (const auto& arg : tree.args) {
    if (const Term* t = std::get_if<Term>(&arg)) {
      if (contains_op(*t, Op::Exp)) rep.invalid("tree argument must be log-analytic (no exp)");
      if (!depends_only_on_t(*t, ctx)) rep.invalid("tree argument depends on x");
    } else if (const std::string* name = std::get_if<std::string>(&arg)) {
      names.push_back(*name);
    } else {
      collect_tree(*std::get<std::shared_ptr<const NiceTree>>(arg), ctx, names, rep);
    }
  }
}

}  // namespace

double UnitSpec::eval(std::span<const double> z) const { return v->eval(z.data()); }

Term UnitSpec::polynomial_term(const std::vector<Term>& args) const {
  std::optional<Term> acc;
  for (const auto& m : v->terms) {
    Term mono = Const(m.coeff);
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
      int e = m.exponents[i];
      if (e == 0) continue;
      // Pow is |b|^q, so odd powers keep one signed factor.
      Term f = e == 1 ? args[i] : (e % 2 == 0 ? Pow(args[i], Rational(e)) : Mul(Pow(args[i], Rational(e - 1)), args[i]));
      mono = Mul(mono, f);
    }
    acc = acc ? Add(*acc, mono) : mono;
  }
  return fold_constants(acc ? *acc : Const(0));
}

UnitSpec UnitSpec::constant(const Rational& c, int s) {
  return polynomial(s, {Monomial{std::vector<int>(static_cast<std::size_t>(s), 0), c}}, 0.0);
}

UnitSpec UnitSpec::polynomial(int s, std::vector<Monomial> terms, double tail) {
  auto def = std::make_shared<SeriesDef>();
  def->name = "unit";
  def->arity = s;
  def->tail_bound = tail;
  for (auto& m : terms) {
    if (static_cast<int>(m.exponents.size()) != s) throw Error(ErrorKind::InvalidInput, "monomial arity differs from s");
    for (int e : m.exponents) {
      if (e < 0) throw Error(ErrorKind::InvalidInput, "unit exponents must be nonnegative");
    }
  }
  def->terms = std::move(terms);
  return UnitSpec{def};
}

VerificationReport check_unit(const UnitSpec& unit, int depth) {
  VerificationReport rep = make_report("unit-positivity");
  if (!unit.v) {
    rep.invalid("unit has no coefficient table");
    return rep;
  }
  const int s = unit.s();
  struct Box {
    std::vector<Interval> b;
    int depth;
  };
  std::vector<Box> stack{{std::vector<Interval>(static_cast<std::size_t>(s), Interval{-1.0, 1.0}), 0}};
  double inf = std::numeric_limits<double>::infinity();
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t processed = 0;
  bool undecided = false;
  while (!stack.empty()) {
    Box box = std::move(stack.back());
    stack.pop_back();
    if (++processed > kMaxUnitBoxes) {
      rep.inconclusive("subdivision budget exhausted");
      break;
    }
    Interval enc = unit.v->enclose(box.b.data());
    if (enc.lo > 0.0) {
      inf = std::min(inf, enc.lo);
      sup = std::max(sup, enc.hi);
      continue;
    }
    Point mid;
    for (const auto& iv : box.b) mid.push_back(iv.mid());
    if (enc.hi <= 0.0 || unit.v->eval(mid.data()) + unit.v->tail_bound <= 0.0) {
      rep.refute("unit not positive: v <= 0 at the reported point of [-1,1]^s", mid);
      return rep;
    }
    if (box.depth >= depth) {
      undecided = true;
      continue;
    }
    for (int mask = 0; mask < (1 << s); ++mask) {
      Box child{box.b, box.depth + 1};
      for (int i = 0; i < s; ++i) {
        Interval& iv = child.b[static_cast<std::size_t>(i)];
        double m = iv.mid();
        iv = (mask >> i) & 1 ? Interval{m, iv.hi} : Interval{iv.lo, m};
      }
      stack.push_back(std::move(child));
    }
  }
  if (undecided) rep.inconclusive("enclosure touches 0 at subdivision depth " + std::to_string(depth));
  if (rep.verified()) {
    rep.witnesses["inf"] = inf;
    rep.witnesses["sup"] = sup;
    rep.message = "v([-1,1]^s) is enclosed in [" + std::to_string(inf) + ", " + std::to_string(sup) + "]";
  }
  rep.witnesses["boxes"] = static_cast<double>(processed);
  return rep;
}

const char* to_string(Side s) { return s == Side::Above ? "above" : "below"; }

Side side_from_string(const std::string& s) {
  if (s == "above") return Side::Above;
  if (s == "below") return Side::Below;
  throw Error(ErrorKind::InvalidInput, "side must be 'above' or 'below', got '" + s + "'");
}

VerificationReport verify_la(const LAPreparingTuple& t, const Term& f, const Cell& cell, const SamplePlan& plan,
                             double tol) {
  VerificationReport rep = make_report("la:" + t.name);
  ProductData d = la_data(t);
  if (!check_shapes(d, rep)) return rep;
  if (t.zero_column_prefix) {
    int k = *t.zero_column_prefix;
    if (k < 0 || k > t.scale.r() + 1) {
      rep.invalid("zero column prefix must lie in 0..r+1");
      return rep;
    }
    for (std::size_t i = 0; i < t.P.size(); ++i) {
      for (int j = 0; j < k; ++j) {
        if (!t.P[i][static_cast<std::size_t>(j)].is_zero()) {
          rep.refute("P is not in M_" + std::to_string(k) + ": entry (" + std::to_string(i + 1) + "," +
                     std::to_string(j) + ") is nonzero");
          return rep;
        }
      }
    }
  }
  VerificationReport sc = verify_scale(t.scale, cell, plan);
  sc.name = "scale";
  rep.add(sc);
  VerificationReport unit_rep = check_unit(t.unit);
  rep.add(unit_rep);
  std::vector<Point> pts = sample(cell, plan_for_scale(t.scale, cell, plan));
  rep.add(check_product(d, f, pts, tol));
  if (!is_zero_term(t.a) && unit_rep.verified()) {
    rep.add(leading_term(f, t.a, t.scale, t.q, unit_rep, pts));
  }
  rep.witnesses["samples"] = static_cast<double>(pts.size());
  if (rep.verified()) rep.message = "LA-preparing tuple verified on " + std::to_string(pts.size()) + " samples";
  return rep;
}

VerificationReport verify_gsa(const GsaPreparedForm& form, const Term& f, const Cell& cell, const SamplePlan& plan,
                              double tol) {
  VerificationReport rep = make_report("gsa:" + form.name);
  LAPreparingTuple t;
  t.name = form.name;
  t.scale.name = form.name + ":center";
  t.scale.ctx = form.ctx;
  t.scale.center = {form.theta};
  t.scale.signs = {form.side == Side::Above ? 1 : -1};
  if (form.eps) t.scale.eps = {EpsWitness{false, *form.eps}};
  if (!depends_only_on_t(form.theta, form.ctx)) {
    rep.invalid("center depends on x");
    return rep;
  }
  if (form.p.size() != form.b.size()) {
    rep.invalid("p must have one exponent per base function");
    return rep;
  }
  t.a = form.a;
  t.q = {form.q};
  t.unit = form.unit;
  t.b = form.b;
  for (const auto& pj : form.p) t.P.push_back({pj});

  std::vector<Point> pts = sample(cell, plan_for_scale(t.scale, cell, plan));
  for (const auto& p : pts) {
    if (p.back() == 0.0) {
      rep.invalid("the cell must exclude x = 0");
      return rep;
    }
  }
  VerificationReport inner = verify_la(t, f, cell, plan, tol);
  for (auto& s : inner.sub) {
    if (s.name == "scale") {
      s.name = "center";
      for (auto& c : s.sub) {
        if (c.name == "sign-constancy" && !c.verified()) {
          c.message += "; the cell straddles the center and needs a finer decomposition";
        }
      }
    }
    rep.add(s);
  }
  rep.witnesses = inner.witnesses;
  if (rep.verified()) rep.message = "globally subanalytic preparation verified";
  return rep;
}

VerificationReport verify_gsa_points(const GsaPreparedForm& form, const Term& f, std::span<const Point> points,
                                     double tol) {
  VerificationReport rep = make_report("gsa:" + form.name);
  LogScale scale;
  scale.name = form.name + ":center";
  scale.ctx = form.ctx;
  scale.center = {form.theta};
  scale.signs = {form.side == Side::Above ? 1 : -1};
  if (!depends_only_on_t(form.theta, form.ctx)) {
    rep.invalid("center depends on x");
    return rep;
  }
  if (form.p.size() != form.b.size()) {
    rep.invalid("p must have one exponent per base function");
    return rep;
  }
  ProductData d;
  d.scale = &scale;
  d.a = form.a;
  d.q = {form.q};
  d.unit = &form.unit;
  d.b = form.b;
  for (const auto& pj : form.p) d.P.push_back({pj});
  if (!check_shapes(d, rep)) return rep;

  VerificationReport center = make_report("center");
  const bool theta_zero = is_zero_term(form.theta);
  double sup = 0.0;
  for (const auto& p : points) {
    EvalResult th = eval(form.theta, p, form.ctx);
    if (th.domain_flag) {
      center.inconclusive("center hit a totalization convention", p);
      continue;
    }
    double x = p.back();
    double y0 = x - th.value;
    if (x == 0.0) {
      center.invalid("points must exclude x = 0");
      break;
    }
    if (!(form.side == Side::Above ? y0 > 0.0 : y0 < 0.0)) {
      center.refute(std::string("x is not ") + to_string(form.side) +
                        " the center; the region needs a finer decomposition",
                    p);
      break;
    }
    sup = std::max(sup, std::fabs(y0) / std::fabs(x));
  }
  center.witnesses["sup_ratio"] = sup;
  if (!theta_zero && center.verified()) {
    if (!(sup < 1.0)) center.refute("|x - theta| / |x| reaches " + std::to_string(sup));
    if (form.eps && !(sup < *form.eps)) center.refute("observed ratio exceeds the declared epsilon");
  }
  center.data["theta_zero"] = theta_zero;
  rep.add(center);
  VerificationReport unit_rep = check_unit(form.unit);
  rep.add(unit_rep);
  rep.add(check_product(d, f, points, tol));
  if (rep.verified()) rep.message = "prepared form holds at " + std::to_string(points.size()) + " points";
  return rep;
}

VerificationReport verify_la_simultaneous(const std::vector<std::pair<LAPreparingTuple, Term>>& items,
                                          const Cell& cell, const SamplePlan& plan, double tol) {
  VerificationReport rep = make_report("simultaneous");
  if (items.empty()) {
    rep.invalid("no tuples supplied");
    return rep;
  }
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (!same_center(items[0].first.scale, items[i].first.scale)) {
      rep.refute("tuple '" + items[i].first.name + "' does not share the center of '" + items[0].first.name + "'");
      return rep;
    }
  }
  for (const auto& [t, f] : items) rep.add(verify_la(t, f, cell, plan, tol));
  if (rep.verified()) rep.message = std::to_string(items.size()) + " tuples share one center and verify";
  return rep;
}

VerificationReport verify_family(const ExpFamily& family, const Cell& cell, const SamplePlan& plan, double tol) {
  VerificationReport rep = make_report("family");
  std::vector<Point> pts = sample(cell, plan);
  auto check_positive = [&](const FamilyMember& m) {
    for (const auto& p : pts) {
      EvalResult r = eval(m.term, p, family.ctx);
      if (r.domain_flag) {
        rep.inconclusive("member '" + m.name + "' hit a totalization convention", p);
        return;
      }
      if (!(r.value > 0.0)) {
        rep.refute("member '" + m.name + "' is not positive", p);
        return;
      }
    }
  };
  for (const auto& m : family.members) check_positive(m);
  if (!family.base.empty()) {
    for (const auto& m : family.base) check_positive(m);
  }
  for (const auto& m : family.members) {
    if (m.witness.empty()) continue;
    std::vector<std::pair<const FamilyMember*, double>> combo;
    for (const auto& [name, c] : m.witness) {
      const FamilyMember* e = family.find_base(name);
      if (!e) {
        rep.invalid("witness of '" + m.name + "' names missing base member '" + name + "'");
        return rep;
      }
      combo.emplace_back(e, c.to_double());
    }
    for (const auto& p : pts) {
      double lhs = std::log(eval(m.term, p, family.ctx).value);
      double rhs = 0.0;
      for (const auto& [e, c] : combo) rhs += c * std::log(eval(e->term, p, family.ctx).value);
      if (!(std::fabs(lhs - rhs) <= tol * (1.0 + std::fabs(lhs)))) {
        rep.refute("linear-combination witness of '" + m.name + "' fails", p);
        break;
      }
    }
  }
  rep.witnesses["members"] = static_cast<double>(family.members.size());
  if (rep.verified()) rep.message = "members positive and witnesses consistent";
  return rep;
}

VerificationReport verify_er(const ERPreparingTuple& tuple, const Term& f, const Cell& cell, const ExpFamily& family,
                             const SamplePlan& plan, double tol) {
  ErVerifier v(cell, family, plan, tol);
  return v.run(tuple, f);
}

Term la_product_term(const LAPreparingTuple& t) {
  std::vector<Term> phi;
  for (std::size_t j = 0; j < t.b.size(); ++j) phi.push_back(t.b[j] * pow_product_term(t.scale, t.P[j]));
  return t.a * pow_product_term(t.scale, t.q) * polynomial_part(t.unit, phi);
}

Term gsa_product_term(const GsaPreparedForm& form) {
  Term y0 = Var(form.ctx.x_index()) - form.theta;
  std::vector<Term> phi;
  for (std::size_t j = 0; j < form.b.size(); ++j) phi.push_back(form.b[j] * Pow(y0, form.p[j]));
  return form.a * Pow(y0, form.q) * polynomial_part(form.unit, phi);
}

Term er_product_term(const ERPreparingTuple& t, const ExpFamily& family) {
  if (t.e == -1) return Const(0);
  auto member = [&](const std::optional<std::string>& name) -> Term {
    if (!name) return Const(1);
    const FamilyMember* m = family.find(*name);
    if (!m) throw Error(ErrorKind::InvalidInput, "missing family member '" + *name + "'");
    return m->term;
  };
  std::vector<Term> phi;
  for (std::size_t j = 0; j < t.b.size(); ++j) {
    Term pj = t.b[j] * pow_product_term(t.scale, t.P[j]);
    if (j < t.exp_d.size()) pj = pj * member(t.exp_d[j]);
    phi.push_back(pj);
  }
  return t.a * pow_product_term(t.scale, t.q) * member(t.exp_c) * polynomial_part(t.unit, phi);
}

VerificationReport verify_heir(const Term& g, const Cell& cell, const LogScale& witness, int l,
                               const SamplePlan& plan, double tol) {
  VerificationReport rep = make_report("heir");
  if (l < 1 || l > witness.r()) {
    rep.invalid("heir level must lie in 1..r");
    return rep;
  }
  if (!depends_only_on_t(g, cell.ctx)) {
    rep.invalid("heir candidate depends on x");
    return rep;
  }
  VerificationReport sc = verify_scale(witness, cell, plan);
  sc.name = "witness-scale";
  rep.add(sc);
  if (rep.refuted()) return rep;
  const Term& theta = witness.center[static_cast<std::size_t>(l)];
  std::vector<Point> ts = sample_t(cell, plan);
  double max_rel = 0.0;
  VerificationReport eq = make_report("exp-of-center");
  for (const auto& t : ts) {
    Point p = with_dummy_x(t);
    EvalResult gr = eval(g, p, cell.ctx);
    EvalResult tr = eval(theta, p, cell.ctx);
    if (gr.domain_flag || tr.domain_flag) {
      eq.inconclusive("evaluation hit a totalization convention", p);
      continue;
    }
    double target = std::exp(tr.value);
    double err = std::fabs(gr.value - target);
    max_rel = std::max(max_rel, err / (1.0 + std::fabs(gr.value)));
    if (!(err <= tol * (1.0 + std::fabs(gr.value)))) {
      eq.refute("g differs from exp(Theta_" + std::to_string(l) + ")", p);
      break;
    }
  }
  eq.witnesses["max_relative_error"] = max_rel;
  eq.witnesses["samples"] = static_cast<double>(ts.size());
  rep.add(eq);
  if (rep.verified()) rep.message = "g = exp(Theta_" + std::to_string(l) + ") for a verified scale";
  return rep;
}

VerificationReport verify_nice(const Term& g, const Cell& cell, const NiceTree& tree,
                               const std::vector<HeirCertificate>& heirs, const SamplePlan& plan, double tol) {
  VerificationReport rep = make_report("nice");
  std::vector<std::string> names;
  collect_tree(tree, cell.ctx, names, rep);
  if (rep.verdict == Verdict::Invalid) return rep;
  std::map<std::string, const HeirCertificate*> verified;
  for (const auto& name : names) {
    if (verified.count(name)) continue;
    auto it = std::find_if(heirs.begin(), heirs.end(), [&](const HeirCertificate& h) { return h.name == name; });
    if (it == heirs.end()) {
      rep.invalid("tree references member '" + name + "' without a heir certificate");
      return rep;
    }
    VerificationReport hr = verify_heir(it->g, cell, it->witness, it->l, plan, tol);
    hr.name = "heir:" + name;
    bool ok = hr.verified();
    rep.sub.push_back(hr);
    if (!ok) {
      rep.invalid("tree references unverified member '" + name + "'");
      return rep;
    }
    verified[name] = &*it;
  }
  std::vector<Point> ts = sample_t(cell, plan);
  VerificationReport eq = make_report("construction");
  double max_rel = 0.0;
  for (const auto& t : ts) {
    Point p = with_dummy_x(t);
    bool conv = false;
    double value = eval_nice(tree, p, cell.ctx, verified, conv);
    EvalResult gr = eval(g, p, cell.ctx);
    if (conv || gr.domain_flag) {
      eq.inconclusive("evaluation hit a totalization convention", p);
      continue;
    }
    double err = std::fabs(gr.value - value);
    max_rel = std::max(max_rel, err / (1.0 + std::fabs(gr.value)));
    if (!(err <= tol * (1.0 + std::fabs(gr.value)))) {
      eq.refute("construction tree differs from g", p);
      break;
    }
  }
  eq.witnesses["max_relative_error"] = max_rel;
  eq.witnesses["samples"] = static_cast<double>(ts.size());
  rep.add(eq);
  rep.witnesses["heirs"] = static_cast<double>(verified.size());
  if (rep.verified()) rep.message = "g is constructed from " + std::to_string(verified.size()) + " verified heirs";
  return rep;
}

VerificationReport verify_coverage(const Cell& region, const std::vector<Cell>& cells, const SamplePlan& plan) {
  VerificationReport rep = make_report("coverage");
  std::vector<Point> pts = sample(region, plan);
  std::size_t used = 0;
  std::size_t overlaps = 0;
  for (const auto& p : pts) {
    if (p.back() == 0.0) continue;
    ++used;
    int hits = 0;
    for (const auto& c : cells) hits += cell_contains(c, p) ? 1 : 0;
    if (hits == 0) {
      rep.refute("sample not covered by any cell", p);
      break;
    }
    if (hits > 1) ++overlaps;
  }
  rep.witnesses["samples"] = static_cast<double>(used);
  rep.witnesses["overlaps"] = static_cast<double>(overlaps);
  if (rep.verified()) rep.message = "every nonzero-x sample lies in a cell";
  return rep;
}

}  // namespace logprep
