// SPDX-License-Identifier: Apache-2.0
#include "logprep/documents.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"

namespace logprep {

namespace {

// Cursor into a document that names its own path in errors.
class Reader {
public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const { throw DecodeError(path_, msg); }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) throw DecodeError(path_ + "." + key, "missing required field");
    return Reader(j_.at(key), path_ + "." + key);
  }

  std::vector<Reader> items() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }

  double number() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string()) {
      const std::string s = j_.get<std::string>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
      if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    fail("expected a number");
  }

  Rational rational() const {
    if (j_.is_number_integer()) return Rational(j_.get<std::int64_t>());
    if (!j_.is_string()) fail("expected a rational written as a string");
    try {
      return Rational::parse(j_.get<std::string>());
    } catch (const std::exception& e) {
      fail(std::string("bad rational: ") + e.what());
    }
  }

  Term term(const VarContext& ctx) const {
    std::string text = str();
    try {
      Term t = parse_term(text, ctx);
      if (max_var_index(t) > ctx.x_index()) fail("term uses a variable outside t1..t" + std::to_string(ctx.n) + ", x");
      return t;
    } catch (const ParseError& e) {
      fail(std::string("parse error: ") + e.what());
    }
  }

  std::vector<Term> terms(const VarContext& ctx) const {
    std::vector<Term> out;
    for (const auto& r : items()) out.push_back(r.term(ctx));
    return out;
  }

  std::vector<Rational> rationals() const {
    std::vector<Rational> out;
    for (const auto& r : items()) out.push_back(r.rational());
    return out;
  }

  void expect_kind(const std::string& kind) const {
    if (!j_.is_object()) fail("expected an object");
    if (j_.contains("schema-version") && j_.at("schema-version") != kSchemaVersion) {
      throw DecodeError(path_ + ".schema-version", "unsupported schema version");
    }
    if (j_.contains("kind") && at("kind").str() != kind) {
      throw DecodeError(path_ + ".kind", "expected kind '" + kind + "'");
    }
  }

private:
  const Json& j_;
  std::string path_;
};

Json header(const std::string& kind, const std::string& name) {
  Json j = Json::object();
  j["schema-version"] = kSchemaVersion;
  j["kind"] = kind;
  j["name"] = name;
  return j;
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json strings(const std::vector<Term>& ts, const VarContext& ctx) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(print_term(t, ctx));
  return a;
}

Json rationals(const std::vector<Rational>& qs) {
  Json a = Json::array();
  for (const auto& q : qs) a.push_back(q.str());
  return a;
}

Json matrix(const std::vector<std::vector<Rational>>& P) {
  Json a = Json::array();
  for (const auto& row : P) a.push_back(rationals(row));
  return a;
}

std::vector<std::vector<Rational>> read_matrix(const Reader& r) {
  std::vector<std::vector<Rational>> P;
  for (const auto& row : r.items()) P.push_back(row.rationals());
  return P;
}

VarContext read_ctx(const Reader& r) {
  int n = r.at("n").integer();
  if (n < 0) r.at("n").fail("parameter count must be nonnegative");
  return VarContext{n};
}

std::string read_name(const Reader& r) { return r.has("name") ? r.at("name").str() : std::string(); }

// A reference by name or an inline object.
Json resolve_ref(const Reader& r, const Resolver& resolve) {
  if (r.json().is_string()) {
    if (!resolve) r.fail("reference '" + r.str() + "' needs a workspace");
    try {
      return resolve(r.str());
    } catch (const DecodeError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(std::string("cannot resolve reference: ") + e.what());
    }
  }
  return r.json();
}

template <typename Fn>
auto wrap_invariants(const Reader& r, Fn&& fn) {
  try {
    return fn();
  } catch (const DecodeError&) {
    throw;
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

}  // namespace

Workspace Workspace::of_file(const std::filesystem::path& file) {
  auto dir = file.parent_path();
  return Workspace(dir.empty() ? std::filesystem::path(".") : dir);
}

Json Workspace::load(const std::string& name) const {
  std::filesystem::path p = dir_ / (name + ".doc");
  if (!std::filesystem::exists(p)) throw DecodeError(name, "no document " + p.string());
  return read_document(p);
}

Resolver Workspace::resolver() const {
  return [ws = *this](const std::string& name) { return ws.load(name); };
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_document(const std::filesystem::path& path) {
  std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DecodeError(path.string(), std::string("malformed document: ") + e.what());
  }
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

void write_document(const std::filesystem::path& path, const Json& doc) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out << dump_document(doc);
    if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

VarContext infer_context(std::string_view text) {
  static const std::regex var(R"(\bt([0-9]+)\b)");
  int n = 0;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), var); it != std::sregex_iterator(); ++it) {
    n = std::max(n, std::stoi((*it)[1].str()));
  }
  return VarContext{n};
}

std::string kind_of(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  return r.at("kind").str();
}

Json encode(const Cell& cell) {
  if (cell.lifted()) throw Error(ErrorKind::InvalidInput, "lifted cells are not serializable");
  Json j = header("cell", cell.name);
  j["n"] = cell.ctx.n;
  Json box = Json::array();
  for (const auto& [lo, hi] : cell.t_box) box.push_back({lo.str(), hi.str()});
  j["t_box"] = box;
  j["lower"] = cell.lower ? Json(print_term(*cell.lower, cell.ctx)) : Json();
  j["upper"] = cell.upper ? Json(print_term(*cell.upper, cell.ctx)) : Json();
  j["nonzero_fiber"] = cell.nonzero_fiber;
  j["zero_exclusion"] = cell.zero_exclusion;
  return j;
}

Cell decode_cell(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("cell");
  Cell c;
  c.name = read_name(r);
  c.ctx = read_ctx(r);
  for (const auto& iv : r.at("t_box").items()) {
    auto ends = iv.items();
    if (ends.size() != 2) iv.fail("expected [lo, hi]");
    c.t_box.emplace_back(ends[0].rational(), ends[1].rational());
  }
  if (r.has("lower")) c.lower = r.at("lower").term(c.ctx);
  if (r.has("upper")) c.upper = r.at("upper").term(c.ctx);
  if (r.has("nonzero_fiber")) c.nonzero_fiber = r.at("nonzero_fiber").boolean();
  if (r.has("zero_exclusion")) c.zero_exclusion = r.at("zero_exclusion").number();
  wrap_invariants(r, [&] {
    c.validate();
    return 0;
  });
  return c;
}

Json encode(const LogScale& s) {
  Json j = header("scale", s.name);
  j["n"] = s.ctx.n;
  j["center"] = strings(s.center, s.ctx);
  Json signs = Json::array();
  for (int v : s.signs) signs.push_back(v > 0 ? "+" : "-");
  j["signs"] = signs;
  if (!s.eps.empty()) {
    Json eps = Json::array();
    for (const auto& e : s.eps) {
      if (!e) {
        eps.push_back(nullptr);
      } else if (e->theta_zero) {
        eps.push_back("theta-zero");
      } else {
        eps.push_back(e->value);
      }
    }
    j["eps"] = eps;
  }
  return j;
}

LogScale decode_scale(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("scale");
  LogScale s;
  s.name = read_name(r);
  s.ctx = read_ctx(r);
  s.center = r.at("center").terms(s.ctx);
  for (const auto& v : r.at("signs").items()) {
    std::string t = v.str();
    if (t != "+" && t != "-") v.fail("sign must be '+' or '-'");
    s.signs.push_back(t == "+" ? 1 : -1);
  }
  if (r.has("eps")) {
    for (const auto& e : r.at("eps").items()) {
      if (e.json().is_null()) {
        s.eps.emplace_back();
      } else if (e.json().is_string() && e.str() == "theta-zero") {
        s.eps.push_back(EpsWitness{true, 0.0});
      } else {
        s.eps.push_back(EpsWitness{false, e.number()});
      }
    }
  }
  wrap_invariants(r, [&] {
    s.validate();
    return 0;
  });
  return s;
}

Json encode(const UnitSpec& unit) {
  Json j = Json::object();
  j["arity"] = unit.s();
  Json terms = Json::array();
  for (const auto& m : unit.v->terms) terms.push_back({{"exponents", m.exponents}, {"coeff", m.coeff.str()}});
  j["terms"] = terms;
  j["tail"] = unit.v->tail_bound;
  return j;
}

UnitSpec decode_unit(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  int s = r.at("arity").integer();
  if (s < 0) r.at("arity").fail("arity must be nonnegative");
  std::vector<Monomial> terms;
  for (const auto& m : r.at("terms").items()) {
    Monomial mono;
    for (const auto& e : m.at("exponents").items()) mono.exponents.push_back(e.integer());
    mono.coeff = m.at("coeff").rational();
    terms.push_back(std::move(mono));
  }
  double tail = r.has("tail") ? r.at("tail").number() : 0.0;
  return wrap_invariants(r, [&] { return UnitSpec::polynomial(s, std::move(terms), tail); });
}

Json encode(const GsaPreparedForm& f) {
  Json j = header("gsa-form", f.name);
  j["n"] = f.ctx.n;
  j["theta"] = print_term(f.theta, f.ctx);
  j["a"] = print_term(f.a, f.ctx);
  j["q"] = f.q.str();
  j["unit"] = encode(f.unit);
  j["b"] = strings(f.b, f.ctx);
  j["p"] = rationals(f.p);
  j["side"] = to_string(f.side);
  if (f.eps) j["eps"] = *f.eps;
  return j;
}

GsaPreparedForm decode_gsa(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("gsa-form");
  GsaPreparedForm f;
  f.name = read_name(r);
  f.ctx = read_ctx(r);
  f.theta = r.at("theta").term(f.ctx);
  f.a = r.at("a").term(f.ctx);
  f.q = r.at("q").rational();
  f.unit = decode_unit(r.at("unit").json(), r.path() + ".unit");
  f.b = r.at("b").terms(f.ctx);
  f.p = r.at("p").rationals();
  std::string side = r.at("side").str();
  if (side != "above" && side != "below") r.at("side").fail("side must be 'above' or 'below'");
  f.side = side_from_string(side);
  if (r.has("eps")) f.eps = r.at("eps").number();
  return f;
}

Json encode(const LAPreparingTuple& t) {
  Json j = header("la-tuple", t.name);
  j["scale"] = t.scale_ref.empty() ? encode(t.scale) : Json(t.scale_ref);
  const VarContext& ctx = t.scale.ctx;
  j["a"] = print_term(t.a, ctx);
  j["q"] = rationals(t.q);
  j["unit"] = encode(t.unit);
  j["b"] = strings(t.b, ctx);
  j["P"] = matrix(t.P);
  if (t.zero_column_prefix) j["zero_column_prefix"] = *t.zero_column_prefix;
  return j;
}

LAPreparingTuple decode_la(const Json& doc, const Resolver& resolve, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("la-tuple");
  LAPreparingTuple t;
  t.name = read_name(r);
  Reader sr = r.at("scale");
  if (sr.json().is_string()) t.scale_ref = sr.str();
  Json sdoc = resolve_ref(sr, resolve);
  t.scale = decode_scale(sdoc, sr.path());
  const VarContext& ctx = t.scale.ctx;
  t.a = r.at("a").term(ctx);
  t.q = r.at("q").rationals();
  t.unit = decode_unit(r.at("unit").json(), r.path() + ".unit");
  t.b = r.at("b").terms(ctx);
  t.P = read_matrix(r.at("P"));
  if (r.has("zero_column_prefix")) t.zero_column_prefix = r.at("zero_column_prefix").integer();
  return t;
}

Json encode(const ERPreparingTuple& t) {
  Json j = header("er-tuple", t.name);
  j["e"] = t.e;
  if (t.e == -1) return j;
  j["scale"] = encode(t.scale);
  const VarContext& ctx = t.scale.ctx;
  j["a"] = print_term(t.a, ctx);
  j["q"] = rationals(t.q);
  j["unit"] = encode(t.unit);
  j["b"] = strings(t.b, ctx);
  j["P"] = matrix(t.P);
  j["exp_c"] = t.exp_c ? Json(*t.exp_c) : Json();
  j["c"] = t.c ? encode(*t.c) : Json();
  Json ed = Json::array();
  for (const auto& e : t.exp_d) ed.push_back(e ? Json(*e) : Json());
  j["exp_d"] = ed;
  Json d = Json::array();
  for (const auto& di : t.d) d.push_back(di ? encode(*di) : Json());
  j["d"] = d;
  return j;
}

ERPreparingTuple decode_er(const Json& doc, const Resolver& resolve, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("er-tuple");
  ERPreparingTuple t;
  t.name = read_name(r);
  t.e = r.at("e").integer();
  if (t.e < -1) r.at("e").fail("level must be at least -1");
  if (t.e == -1) return t;
  Reader sr = r.at("scale");
  t.scale = decode_scale(resolve_ref(sr, resolve), sr.path());
  const VarContext& ctx = t.scale.ctx;
  t.a = r.at("a").term(ctx);
  t.q = r.at("q").rationals();
  t.unit = decode_unit(r.at("unit").json(), r.path() + ".unit");
  t.b = r.at("b").terms(ctx);
  t.P = read_matrix(r.at("P"));
  if (r.has("exp_c")) t.exp_c = r.at("exp_c").str();
  if (r.has("c")) {
    Reader cr = r.at("c");
    t.c = std::make_shared<const ERPreparingTuple>(decode_er(resolve_ref(cr, resolve), resolve, cr.path()));
  }
  if (r.has("exp_d")) {
    for (const auto& e : r.at("exp_d").items()) {
      if (e.json().is_null()) {
        t.exp_d.emplace_back();
      } else {
        t.exp_d.emplace_back(e.str());
      }
    }
  }
  if (r.has("d")) {
    for (const auto& dr : r.at("d").items()) {
      if (dr.json().is_null()) {
        t.d.emplace_back();
      } else {
        t.d.push_back(std::make_shared<const ERPreparingTuple>(decode_er(resolve_ref(dr, resolve), resolve, dr.path())));
      }
    }
  }
  return t;
}

Json encode(const ExpFamily& f) {
  Json j = header("family", f.name);
  j["n"] = f.ctx.n;
  auto members = [&](const std::vector<FamilyMember>& ms) {
    Json a = Json::array();
    for (const auto& m : ms) {
      Json e = {{"name", m.name}, {"term", print_term(m.term, f.ctx)}};
      if (!m.witness.empty()) {
        Json w = Json::object();
        for (const auto& [k, v] : m.witness) w[k] = v.str();
        e["witness"] = w;
      }
      a.push_back(e);
    }
    return a;
  };
  j["members"] = members(f.members);
  if (!f.base.empty()) j["base"] = members(f.base);
  return j;
}

ExpFamily decode_family(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("family");
  ExpFamily f;
  f.name = read_name(r);
  f.ctx = read_ctx(r);
  auto members = [&](const Reader& list) {
    std::vector<FamilyMember> out;
    for (const auto& m : list.items()) {
      FamilyMember fm;
      fm.name = m.at("name").str();
      fm.term = m.at("term").term(f.ctx);
      if (m.has("witness")) {
        Reader w = m.at("witness");
        if (!w.json().is_object()) w.fail("expected an object of coefficients");
        for (const auto& [k, v] : w.json().items()) fm.witness[k] = Reader(v, w.path() + "." + k).rational();
      }
      out.push_back(std::move(fm));
    }
    return out;
  };
  f.members = members(r.at("members"));
  if (r.has("base")) f.base = members(r.at("base"));
  return f;
}

Json encode(const HeirCertificate& h) {
  Json j = header("heir", h.name);
  j["n"] = h.witness.ctx.n;
  j["g"] = print_term(h.g, h.witness.ctx);
  j["witness"] = h.witness_ref.empty() ? encode(h.witness) : Json(h.witness_ref);
  j["l"] = h.l;
  return j;
}

HeirCertificate decode_heir(const Json& doc, const Resolver& resolve, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("heir");
  HeirCertificate h;
  h.name = read_name(r);
  VarContext ctx = read_ctx(r);
  h.g = r.at("g").term(ctx);
  Reader wr = r.at("witness");
  if (wr.json().is_string()) h.witness_ref = wr.str();
  h.witness = decode_scale(resolve_ref(wr, resolve), wr.path());
  if (h.witness.ctx.n != ctx.n) wr.fail("witness scale has a different parameter count");
  h.l = r.at("l").integer();
  return h;
}

namespace {

Json encode_tree(const NiceTree& tree, const VarContext& ctx) {
  VarContext kctx{static_cast<int>(tree.args.size())};
  Json j = {{"combinator", print_term(tree.combinator, kctx)}};
  Json args = Json::array();
  for (const auto& a : tree.args) {
    if (const auto* t = std::get_if<Term>(&a)) {
      args.push_back({{"term", print_term(*t, ctx)}});
    } else if (const auto* h = std::get_if<std::string>(&a)) {
      args.push_back({{"heir", *h}});
    } else {
      args.push_back({{"tree", encode_tree(*std::get<std::shared_ptr<const NiceTree>>(a), ctx)}});
    }
  }
  j["args"] = args;
  return j;
}

NiceTree decode_tree(const Reader& r, const VarContext& ctx) {
  NiceTree tree;
  auto args = r.at("args").items();
  tree.combinator = r.at("combinator").term(VarContext{static_cast<int>(args.size())});
  for (const auto& a : args) {
    if (a.has("term")) {
      tree.args.emplace_back(a.at("term").term(ctx));
    } else if (a.has("heir")) {
      tree.args.emplace_back(a.at("heir").str());
    } else if (a.has("tree")) {
      tree.args.emplace_back(std::make_shared<const NiceTree>(decode_tree(a.at("tree"), ctx)));
    } else {
      a.fail("argument needs one of 'term', 'heir' or 'tree'");
    }
  }
  return tree;
}

}  // namespace

Json encode(const NiceCertificate& n) {
  Json j = header("nice", n.name);
  j["n"] = n.ctx.n;
  j["g"] = print_term(n.g, n.ctx);
  j["tree"] = encode_tree(n.tree, n.ctx);
  Json heirs = Json::array();
  for (std::size_t i = 0; i < n.heirs.size(); ++i) {
    bool ref = i < n.heir_refs.size() && !n.heir_refs[i].empty();
    heirs.push_back(ref ? Json(n.heir_refs[i]) : encode(n.heirs[i]));
  }
  j["heirs"] = heirs;
  return j;
}

NiceCertificate decode_nice(const Json& doc, const Resolver& resolve, const std::string& path) {
  Reader r(doc, path);
  r.expect_kind("nice");
  NiceCertificate n;
  n.name = read_name(r);
  n.ctx = read_ctx(r);
  n.g = r.at("g").term(n.ctx);
  n.tree = decode_tree(r.at("tree"), n.ctx);
  if (r.has("heirs")) {
    for (const auto& h : r.at("heirs").items()) {
      n.heir_refs.push_back(h.json().is_string() ? h.str() : std::string());
      n.heirs.push_back(decode_heir(resolve_ref(h, resolve), resolve, h.path()));
    }
  }
  return n;
}

Json encode(const VerificationReport& rep) {
  Json j = Json::object();
  j["name"] = rep.name;
  j["verdict"] = to_string(rep.verdict);
  j["message"] = rep.message;
  Json w = Json::object();
  for (const auto& [k, v] : rep.witnesses) w[k] = number(v);
  j["witnesses"] = w;
  if (rep.counterexample) {
    Json c = Json::array();
    for (double v : *rep.counterexample) c.push_back(number(v));
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  j["notes"] = rep.notes;
  Json sub = Json::array();
  for (const auto& s : rep.sub) sub.push_back(encode(s));
  j["sub"] = sub;
  j["data"] = rep.data;
  return j;
}

VerificationReport decode_report(const Json& doc, const std::string& path) {
  Reader r(doc, path);
  VerificationReport rep;
  rep.name = r.at("name").str();
  try {
    rep.verdict = verdict_from_string(r.at("verdict").str());
  } catch (const std::invalid_argument& e) {
    r.at("verdict").fail(e.what());
  }
  if (r.has("message")) rep.message = r.at("message").str();
  if (r.has("witnesses")) {
    Reader w = r.at("witnesses");
    if (!w.json().is_object()) w.fail("expected an object");
    for (const auto& [k, v] : w.json().items()) rep.witnesses[k] = Reader(v, w.path() + "." + k).number();
  }
  if (r.has("counterexample")) {
    Point p;
    for (const auto& v : r.at("counterexample").items()) p.push_back(v.number());
    rep.counterexample = p;
  }
  if (r.has("notes")) {
    for (const auto& n : r.at("notes").items()) rep.notes.push_back(n.str());
  }
  if (r.has("sub")) {
    for (const auto& s : r.at("sub").items()) rep.sub.push_back(decode_report(s.json(), s.path()));
  }
  if (r.has("data")) rep.data = r.at("data").json();
  return rep;
}

Json encode(const RewriteOutput& out) {
  Json j = header("rewrite", out.provenance);
  j["provenance"] = out.provenance;
  j["trusted"] = out.trusted;
  Json terms = Json::array();
  for (const auto& t : out.terms) {
    terms.push_back(
        {{"name", t.name}, {"n", t.ctx.n}, {"term", print_term(t.term, t.ctx)}, {"variables", t.variables}});
  }
  j["terms"] = terms;
  j["report"] = encode(out.report);
  return j;
}

}  // namespace logprep
