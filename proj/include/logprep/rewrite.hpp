// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logprep/cell.hpp"
#include "logprep/preparation.hpp"
#include "logprep/report.hpp"
#include "logprep/scale.hpp"
#include "logprep/term.hpp"

namespace logprep {

// Pointwise equality lhs = rhs replayed at fixed points.
struct Obligation {
  std::string name;
  VarContext ctx;
  Term lhs;
  Term rhs;
  std::vector<Point> points;
  double tol = kDefaultTol;
  bool live_truncation = true;  // rhs must never take a truncation zero branch
};

VerificationReport replay(const Obligation& ob);

struct EmittedTerm {
  std::string name;
  Term term;
  VarContext ctx;
  std::string variables;  // meaning of t1..tk in this term
};

struct RewriteOutput {
  std::string provenance;
  std::vector<EmittedTerm> terms;
  std::vector<Obligation> obligations;
  VerificationReport report;
  bool trusted = false;

  const EmittedTerm* find(const std::string& name) const;
};

// Number of nested Log nodes applied to x-dependent arguments (TruncLog excluded).
int x_log_depth(const Term& t, const VarContext& ctx);

// g = G(eta(t), Y(t,x)) with eta = (a, b_1..b_s) and G guarded on |alpha_i| <= 1.
RewriteOutput collapse_la(const LAPreparingTuple& tuple, const Term& f, const Cell& cell, const SamplePlan& plan,
                          double tol = kDefaultTol);

// log h = H(eta(t), Y_{r-1}(t,x), log|y_{r-1}|) for a positive function prepared on an (r-1)-scale.
RewriteOutput collapse_la_log(const LAPreparingTuple& tuple, const Term& h, const Cell& cell, const SamplePlan& plan,
                              double tol = kDefaultTol);

// y_1* = logstar_[1/delta, delta](y_0/xi) + log|xi| - Theta_1 and y_l* = log|y_{l-1}*| - Theta_l.
RewriteOutput reduce_order(const LogScale& scale, const Term& xi, double delta, const Cell& cell,
                           const SamplePlan& plan, const std::optional<std::vector<Point>>& points = std::nullopt,
                           double tol = kDefaultTol);

// F over t1..t_m (the y slots, m = k+l) with x standing for z = exp(h_l); Theta over t1..t_m.
// Emits G(y) = F(y, Theta(y) * expstar_lambda(y_{k+1} - log Theta(y))) with lambda = log delta.
RewriteOutput eliminate_exp(const Term& F, const std::vector<Term>& g, const std::vector<Term>& h, const Term& theta,
                            double delta, const Cell& cell, const SamplePlan& plan, double tol = kDefaultTol);

// beta = (y_1..y_m, z) as terms on the cell; slot is the index of h_l among the y's.
struct BetaMap {
  std::vector<Term> y;
  Term z;
  int slot = 0;
};

RewriteOutput eliminate_exp_beta(const Term& F, const BetaMap& beta, const Term& theta, double delta,
                                 const Cell& cell, const SamplePlan& plan, double tol = kDefaultTol);

// F(y,z) = a(y)|z|^q v(b(y)|z|^p) with center 0; emits H with log F(beta) = H(beta).
RewriteOutput log_of_prepared(const GsaPreparedForm& form, const Term& F, const BetaMap& beta, const Cell& cell,
                              const SamplePlan& plan, double tol = kDefaultTol);

struct DichotomyForm {
  GsaPreparedForm form;
  Term f;              // the prepared function over the beta context
  bool logged = false;  // enters the combinator through log
};

struct DichotomyInput {
  VarContext beta_ctx;  // t1..tm are the y slots, x is z
  std::vector<DichotomyForm> forms;
  std::optional<Term> combinator;  // over t1..tk, one per form
  std::optional<Term> F;           // alpha = F(beta); defaults to the combinator composition
  Term theta;
  BetaMap beta;
};

RewriteOutput center_dichotomy(const DichotomyInput& in, const Cell& cell, const SamplePlan& plan,
                               double tol = kDefaultTol);

}  // namespace logprep
