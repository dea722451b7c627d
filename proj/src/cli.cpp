// SPDX-License-Identifier: Apache-2.0
#include "logprep/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "logprep/classify.hpp"
#include "logprep/documents.hpp"
#include "logprep/errors.hpp"
#include "logprep/grammar.hpp"
#include "logprep/preparation.hpp"
#include "logprep/rewrite.hpp"
#include "logprep/similarity.hpp"

namespace logprep {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double margin = 1e-3;
  std::string t_strategy = "stratified-grid";
  std::string fiber_strategy = "auto";
  std::string out;
  std::string emit;

  std::string file;
  std::vector<std::string> files;
  std::string cell;
  std::string f;
  std::string g;
  std::string family;
  std::string xi;
  double delta = 0.0;
  bool log = false;
  int n = -1;
};

std::string strip_comments(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#') out += line + "\n";
    pos = end + 1;
  }
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Runner {
public:
  explicit Runner(const Options& opt) : opt_(opt) {}

  std::optional<Json> emitted;

  SamplePlan plan(int n) const {
    SamplePlan p = SamplePlan::with_total(n, opt_.samples, opt_.seed);
    p.boundary_margin = opt_.margin;
    p.t_strategy = t_strategy_from_string(opt_.t_strategy);
    p.fiber_strategy = fiber_strategy_from_string(opt_.fiber_strategy);
    return p;
  }

  Workspace workspace() const { return Workspace::of_file(opt_.file.empty() ? fs::path(".") / "x" : fs::path(opt_.file)); }

  Json doc(const std::string& arg) const {
    if (fs::is_regular_file(arg)) return read_document(arg);
    return workspace().load(arg);
  }

  Json main_doc() const { return read_document(opt_.file); }

  Cell cell() const {
    if (opt_.cell.empty()) throw Error(ErrorKind::InvalidInput, "--cell is required");
    return decode_cell(doc(opt_.cell), opt_.cell);
  }

  static Term term_arg(const std::string& arg, const VarContext& ctx, const std::string& flag) {
    if (arg.empty()) throw Error(ErrorKind::InvalidInput, flag + " is required");
    std::string text = arg;
    if (arg.front() == '@') {
      text = strip_comments(read_text(arg.substr(1)));
    } else if (fs::is_regular_file(arg)) {
      text = strip_comments(read_text(arg));
    }
    return parse_term(text, ctx);
  }

  VerificationReport parse() const {
    VerificationReport rep = make_report("parse");
    std::string text = strip_comments(read_text(opt_.file));
    VarContext ctx = opt_.n >= 0 ? VarContext{opt_.n} : infer_context(text);
    Term t = parse_term(text, ctx);
    std::string printed = print_term(t, ctx);
    rep.data["term"] = printed;
    rep.data["n"] = ctx.n;
    rep.witnesses["nodes"] = static_cast<double>(node_count(t));
    if (!structurally_equal(parse_term(printed, ctx), t)) rep.refute("printed form does not parse back to the same tree");
    if (rep.verified()) rep.message = printed;
    return rep;
  }

  VerificationReport classify_order() const {
    VerificationReport rep = make_report("classify-order");
    std::string text = strip_comments(read_text(opt_.file));
    VarContext ctx = opt_.n >= 0 ? VarContext{opt_.n} : infer_context(text);
    Term t = parse_term(text, ctx);
    try {
      OrderBound b = order_bound(t, ctx);
      rep.witnesses["bound"] = b.bound;
      rep.data["derivation"] = to_json(b.derivation);
      rep.message = "log-analytic of order at most " + std::to_string(b.bound);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotLogAnalytic) throw;
      rep.invalid(e.what());
    }
    return rep;
  }

  VerificationReport classify_expnum() const {
    VerificationReport rep = make_report("classify-expnum");
    if (opt_.family.empty()) throw Error(ErrorKind::InvalidInput, "--family is required");
    ExpFamily fam = decode_family(doc(opt_.family), opt_.family);
    std::string text = strip_comments(read_text(opt_.file));
    VarContext ctx = opt_.n >= 0 ? VarContext{opt_.n} : fam.ctx;
    Term t = parse_term(text, ctx);
    MatchOptions mo;
    std::optional<Cell> c;
    if (!opt_.cell.empty()) {
      c = cell();
      mo.cell = &*c;
      mo.plan = plan(c->ctx.n);
      mo.tol = opt_.tol;
    }
    try {
      ExpNumberBound b = exp_number_bound(t, fam, ctx, mo);
      rep.witnesses["bound"] = b.bound;
      rep.data["matched"] = b.matched;
      rep.notes = b.notes;
      rep.message = "exponential number at most " + std::to_string(b.bound);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CannotConstruct) throw;
      rep.invalid(e.what());
    }
    return rep;
  }

  VerificationReport verify_scale_cmd() const {
    Cell c = cell();
    LogScale s = decode_scale(main_doc(), opt_.file);
    return verify_scale(s, c, plan(c.ctx.n));
  }

  VerificationReport verify_gsa_cmd() const {
    Cell c = cell();
    GsaPreparedForm form = decode_gsa(main_doc(), opt_.file);
    return verify_gsa(form, term_arg(opt_.f, form.ctx, "--f"), c, plan(c.ctx.n), opt_.tol);
  }

  VerificationReport verify_la_cmd() const {
    Cell c = cell();
    LAPreparingTuple t = decode_la(main_doc(), workspace().resolver(), opt_.file);
    return verify_la(t, term_arg(opt_.f, t.scale.ctx, "--f"), c, plan(c.ctx.n), opt_.tol);
  }

  VerificationReport verify_er_cmd() const {
    Cell c = cell();
    if (opt_.family.empty()) throw Error(ErrorKind::InvalidInput, "--family is required");
    ExpFamily fam = decode_family(doc(opt_.family), opt_.family);
    ERPreparingTuple t = decode_er(main_doc(), workspace().resolver(), opt_.file);
    return verify_er(t, term_arg(opt_.f, c.ctx, "--f"), c, fam, plan(c.ctx.n), opt_.tol);
  }

  VerificationReport verify_family_cmd() const {
    Cell c = cell();
    ExpFamily fam = decode_family(main_doc(), opt_.file);
    return verify_family(fam, c, plan(c.ctx.n), opt_.tol);
  }

  VerificationReport verify_heir_cmd() const {
    Cell c = cell();
    HeirCertificate h = decode_heir(main_doc(), workspace().resolver(), opt_.file);
    VerificationReport rep = verify_heir(h.g, c, h.witness, h.l, plan(c.ctx.n), opt_.tol);
    rep.name = "heir:" + h.name;
    return rep;
  }

  VerificationReport verify_nice_cmd() const {
    Cell c = cell();
    NiceCertificate nc = decode_nice(main_doc(), workspace().resolver(), opt_.file);
    VerificationReport rep = verify_nice(nc.g, c, nc.tree, nc.heirs, plan(c.ctx.n), opt_.tol);
    rep.name = "nice:" + nc.name;
    return rep;
  }

  VerificationReport similarity_check() const {
    Cell c = cell();
    if (!(opt_.delta > 1.0)) throw Error(ErrorKind::InvalidInput, "--delta must exceed 1");
    auto pts = sample(c, plan(c.ctx.n));
    return check_similar(term_arg(opt_.f, c.ctx, "--f"), term_arg(opt_.g, c.ctx, "--g"), pts, opt_.delta, c.ctx);
  }

  VerificationReport similarity_search() const {
    Cell c = cell();
    auto pts = sample(c, plan(c.ctx.n));
    DeltaSearch ds = search_delta(term_arg(opt_.f, c.ctx, "--f"), term_arg(opt_.g, c.ctx, "--g"), pts, c.ctx);
    return ds.report;
  }

  VerificationReport finish(RewriteOutput out) {
    Json j = encode(out);
    j.erase("report");
    out.report.data["rewrite"] = j;
    emitted = encode(out);
    return out.report;
  }

  VerificationReport rewrite_collapse() {
    Cell c = cell();
    LAPreparingTuple t = decode_la(main_doc(), workspace().resolver(), opt_.file);
    Term f = term_arg(opt_.f, t.scale.ctx, "--f");
    return finish(opt_.log ? collapse_la_log(t, f, c, plan(c.ctx.n), opt_.tol)
                           : collapse_la(t, f, c, plan(c.ctx.n), opt_.tol));
  }

  VerificationReport rewrite_reduce() {
    Cell c = cell();
    LogScale s = decode_scale(main_doc(), opt_.file);
    Term xi = term_arg(opt_.xi, s.ctx, "--xi");
    return finish(reduce_order(s, xi, opt_.delta, c, plan(c.ctx.n), std::nullopt, opt_.tol));
  }

  static BetaMap read_beta(const Json& j, const VarContext& cell_ctx) {
    const std::string path = "$.beta";
    if (!j.contains("beta")) throw DecodeError(path, "missing required field");
    const Json& b = j.at("beta");
    BetaMap beta;
    if (!b.contains("y") || !b.at("y").is_array()) throw DecodeError(path + ".y", "expected an array of terms");
    for (const auto& y : b.at("y")) beta.y.push_back(parse_term(y.get<std::string>(), cell_ctx));
    if (!b.contains("z")) throw DecodeError(path + ".z", "missing required field");
    beta.z = parse_term(b.at("z").get<std::string>(), cell_ctx);
    if (!b.contains("slot") || !b.at("slot").is_number_integer()) {
      throw DecodeError(path + ".slot", "expected the 1-based index of exp's argument among y");
    }
    beta.slot = b.at("slot").get<int>() - 1;
    return beta;
  }

  static Term field_term(const Json& j, const std::string& key, const VarContext& ctx) {
    if (!j.contains(key) || !j.at(key).is_string()) throw DecodeError("$." + key, "expected a term string");
    try {
      return parse_term(j.at(key).get<std::string>(), ctx);
    } catch (const ParseError& e) {
      throw DecodeError("$." + key, std::string("parse error: ") + e.what());
    }
  }

  VerificationReport rewrite_eliminate() {
    Cell c = cell();
    Json j = main_doc();
    std::vector<Term> g;
    std::vector<Term> h;
    for (const auto& t : j.value("g", Json::array())) g.push_back(parse_term(t.get<std::string>(), c.ctx));
    for (const auto& t : j.value("h", Json::array())) h.push_back(parse_term(t.get<std::string>(), c.ctx));
    VarContext bctx{static_cast<int>(g.size() + h.size())};
    Term F = field_term(j, "F", bctx);
    Term theta = field_term(j, "theta", bctx);
    double delta = opt_.delta > 0.0 ? opt_.delta : j.value("delta", 0.0);
    return finish(eliminate_exp(F, g, h, theta, delta, c, plan(c.ctx.n), opt_.tol));
  }

  VerificationReport rewrite_log_prep() {
    Cell c = cell();
    Json j = main_doc();
    BetaMap beta = read_beta(j, c.ctx);
    VarContext bctx{static_cast<int>(beta.y.size())};
    if (!j.contains("form")) throw DecodeError("$.form", "missing required field");
    Json fj = j.at("form").is_string() ? workspace().load(j.at("form").get<std::string>()) : j.at("form");
    GsaPreparedForm form = decode_gsa(fj, "$.form");
    return finish(log_of_prepared(form, field_term(j, "F", bctx), beta, c, plan(c.ctx.n), opt_.tol));
  }

  VerificationReport rewrite_dichotomy() {
    Cell c = cell();
    Json j = main_doc();
    DichotomyInput in;
    in.beta = read_beta(j, c.ctx);
    in.beta_ctx = VarContext{static_cast<int>(in.beta.y.size())};
    in.theta = field_term(j, "theta", in.beta_ctx);
    if (!j.contains("forms") || !j.at("forms").is_array()) throw DecodeError("$.forms", "expected an array");
    for (std::size_t i = 0; i < j.at("forms").size(); ++i) {
      const Json& e = j.at("forms")[i];
      std::string path = "$.forms[" + std::to_string(i) + "]";
      if (!e.contains("form")) throw DecodeError(path + ".form", "missing required field");
      Json fj = e.at("form").is_string() ? workspace().load(e.at("form").get<std::string>()) : e.at("form");
      DichotomyForm df;
      df.form = decode_gsa(fj, path + ".form");
      df.f = field_term(e, "f", in.beta_ctx);
      df.logged = e.value("logged", false);
      in.forms.push_back(std::move(df));
    }
    if (j.contains("combinator")) {
      in.combinator = field_term(j, "combinator", VarContext{static_cast<int>(in.forms.size())});
    }
    if (j.contains("F")) in.F = field_term(j, "F", in.beta_ctx);
    return finish(center_dichotomy(in, c, plan(c.ctx.n), opt_.tol));
  }

  VerificationReport report_merge() const {
    VerificationReport rep = make_report("merge");
    for (const auto& f : opt_.files) {
      Json j = read_document(f);
      rep.add(decode_report(j.contains("report") ? j.at("report") : j, f));
    }
    if (rep.verified()) rep.message = "all " + std::to_string(opt_.files.size()) + " reports verified";
    return rep;
  }

private:
  const Options& opt_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Term engine and certificate checker for log-exp-analytic preparations", "logprep"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--samples", opt.samples, "Total sample budget")->capture_default_str();
  app.add_option("--seed", opt.seed, "Sampling seed")->capture_default_str();
  app.add_option("--tol", opt.tol, "Relative equality tolerance")->capture_default_str();
  app.add_option("--margin", opt.margin, "Boundary margin of the fiber sampler")->capture_default_str();
  app.add_option("--t-strategy", opt.t_strategy, "stratified-grid | low-discrepancy")->capture_default_str();
  app.add_option("--fiber-strategy", opt.fiber_strategy,
                 "auto | uniform | geometric-toward-lower | geometric-toward-upper")
      ->capture_default_str();
  app.add_option("--out", opt.out, "Report output path (stdout when absent)");

  Runner runner(opt);
  std::function<VerificationReport()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->callback([&action, &runner, fn] { action = [&runner, fn] { return (runner.*fn)(); }; });
    return sub;
  };
  auto file_arg = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("file", opt.file, what)->required();
  };
  auto cell_opt = [&](CLI::App* sub) { sub->add_option("--cell", opt.cell, "Cell document path or name")->required(); };

  auto* parse = leaf(&app, "parse", "Parse and print a term file", &Runner::parse);
  file_arg(parse, "Term file");
  parse->add_option("--n", opt.n, "Parameter count (inferred when absent)");

  auto* classify = app.add_subcommand("classify", "Order and exponential-number bounds");
  classify->require_subcommand(1);
  auto* order = leaf(classify, "order", "Log-analytic order bound", &Runner::classify_order);
  file_arg(order, "Term file");
  order->add_option("--n", opt.n, "Parameter count (inferred when absent)");
  auto* expnum = leaf(classify, "expnum", "Exponential number bound", &Runner::classify_expnum);
  file_arg(expnum, "Term file");
  expnum->add_option("--family", opt.family, "Family document")->required();
  expnum->add_option("--cell", opt.cell, "Cell for numeric matching");
  expnum->add_option("--n", opt.n, "Parameter count (the family's when absent)");

  auto* verify = app.add_subcommand("verify", "Check a certificate on a cell");
  verify->require_subcommand(1);
  auto* vs = leaf(verify, "scale", "Logarithmic scale", &Runner::verify_scale_cmd);
  file_arg(vs, "Scale document");
  cell_opt(vs);
  auto* vg = leaf(verify, "gsa", "Subanalytic prepared form", &Runner::verify_gsa_cmd);
  file_arg(vg, "Prepared form document");
  cell_opt(vg);
  vg->add_option("--f", opt.f, "Prepared function (term text or file)")->required();
  auto* vl = leaf(verify, "la", "Log-analytic preparing tuple", &Runner::verify_la_cmd);
  file_arg(vl, "Tuple document");
  cell_opt(vl);
  vl->add_option("--f", opt.f, "Prepared function (term text or file)")->required();
  auto* ve = leaf(verify, "er", "Exponential preparing tuple", &Runner::verify_er_cmd);
  file_arg(ve, "Tuple document");
  cell_opt(ve);
  ve->add_option("--f", opt.f, "Prepared function (term text or file)")->required();
  ve->add_option("--family", opt.family, "Family document")->required();
  auto* vf = leaf(verify, "family", "Positivity and witnesses of a family", &Runner::verify_family_cmd);
  file_arg(vf, "Family document");
  cell_opt(vf);
  auto* vh = leaf(verify, "heir", "Heir certificate", &Runner::verify_heir_cmd);
  file_arg(vh, "Heir document");
  cell_opt(vh);
  auto* vn = leaf(verify, "nice", "Nice construction tree", &Runner::verify_nice_cmd);
  file_arg(vn, "Nice document");
  cell_opt(vn);

  auto* sim = app.add_subcommand("similarity", "Similarity witnesses");
  sim->require_subcommand(1);
  auto* sc = leaf(sim, "check", "Check f ~ g with a given delta", &Runner::similarity_check);
  cell_opt(sc);
  sc->add_option("--f", opt.f, "Numerator term")->required();
  sc->add_option("--g", opt.g, "Denominator term")->required();
  sc->add_option("--delta", opt.delta, "Witness delta > 1")->required();
  auto* ss = leaf(sim, "search", "Find the smallest witness delta on samples", &Runner::similarity_search);
  cell_opt(ss);
  ss->add_option("--f", opt.f, "Numerator term")->required();
  ss->add_option("--g", opt.g, "Denominator term")->required();

  auto* rw = app.add_subcommand("rewrite", "Constructive rewrites with replayed obligations");
  rw->require_subcommand(1);
  rw->add_option("--emit", opt.emit, "Write emitted terms to this path");
  auto* rc = leaf(rw, "collapse", "Collapse a preparing tuple into one term", &Runner::rewrite_collapse);
  file_arg(rc, "Tuple document");
  cell_opt(rc);
  rc->add_option("--f", opt.f, "Prepared function")->required();
  rc->add_flag("--log", opt.log, "Emit log of the function instead");
  auto* rr = leaf(rw, "reduce-order", "Replace y_1 by a truncated-log form", &Runner::rewrite_reduce);
  file_arg(rr, "Scale document");
  cell_opt(rr);
  rr->add_option("--xi", opt.xi, "Parameter function similar to y_0")->required();
  rr->add_option("--delta", opt.delta, "Similarity witness")->required();
  auto* re = leaf(rw, "eliminate-exp", "Remove exp(h_l) using a similar center", &Runner::rewrite_eliminate);
  file_arg(re, "Problem document");
  cell_opt(re);
  re->add_option("--delta", opt.delta, "Similarity witness (overrides the document)");
  auto* rl = leaf(rw, "log-prep", "Log of a zero-center prepared form", &Runner::rewrite_log_prep);
  file_arg(rl, "Problem document");
  cell_opt(rl);
  auto* rd = leaf(rw, "dichotomy", "Zero or nonzero common center", &Runner::rewrite_dichotomy);
  file_arg(rd, "Problem document");
  cell_opt(rd);

  auto* rep = app.add_subcommand("report", "Report utilities");
  rep->require_subcommand(1);
  auto* rm = leaf(rep, "merge", "Conjunction of several reports", &Runner::report_merge);
  rm->add_option("files", opt.files, "Report documents")->required();

  std::vector<const char*> argv{"logprep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (!action) {
    err << app.help();
    return 2;
  }

  VerificationReport report;
  try {
    report = action();
  } catch (const std::exception& e) {
    report = make_report("error");
    report.invalid(e.what());
  }

  Json run = Json::object();
  run["samples"] = opt.samples;
  run["seed"] = opt.seed;
  run["tol"] = opt.tol;
  run["margin"] = opt.margin;
  Json docj = Json::object();
  docj["schema-version"] = kSchemaVersion;
  docj["kind"] = "report";
  docj["command"] = args;
  docj["run"] = run;
  docj["timestamp"] = timestamp();
  docj["report"] = encode(report);
  try {
    if (!opt.emit.empty() && runner.emitted) write_document(opt.emit, *runner.emitted);
    if (opt.out.empty()) {
      out << dump_document(docj);
    } else {
      write_document(opt.out, docj);
      out << to_string(report.verdict) << ": " << report.message << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code(report.verdict);
}

}  // namespace logprep
