// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logprep/cell.hpp"
#include "logprep/family.hpp"
#include "logprep/report.hpp"
#include "logprep/term.hpp"

namespace logprep {

struct Derivation {
  std::string rule;
  std::string term;
  int bound = 0;
  std::vector<Derivation> kids;
};

struct OrderBound {
  int bound = 0;
  Derivation derivation;
};

// Upper bound on the log-analytic order. Throws NotLogAnalytic on Exp nodes.
OrderBound order_bound(const Term& t, const VarContext& ctx);

// Recomputes a bound from the rules recorded in a derivation tree.
int replay(const Derivation& d);

nlohmann::json to_json(const Derivation& d);

struct ExpNumberBound {
  int bound = 0;
  std::map<std::string, std::string> matched;  // printed exp node -> member name
  std::vector<std::string> notes;
};

struct MatchOptions {
  const Cell* cell = nullptr;  // enables numeric confirmation
  std::optional<SamplePlan> plan;
  double tol = 1e-9;
};

// Upper bound on the exponential number with respect to a family. Throws
// CannotConstruct naming the first unmatched Exp node.
ExpNumberBound exp_number_bound(const Term& t, const ExpFamily& family, const VarContext& ctx,
                                const MatchOptions& opts = {});

// log(exp(h)) -> h everywhere.
Term cancel_log_exp(const Term& t);

VerificationReport algebra_check(const Term& f, const Term& g, const VarContext& ctx);

}  // namespace logprep
