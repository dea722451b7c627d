// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "logprep/cell.hpp"
#include "logprep/report.hpp"
#include "logprep/scale.hpp"
#include "logprep/term.hpp"

namespace logprep {

constexpr double kDefaultWitnessMargin = 0.05;

struct SimilarityWitness {
  double delta = 0.0;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  std::size_t points = 0;
};

// f ~ g with witness delta: 1/delta < f/g < delta at every point.
VerificationReport check_similar(const Term& f, const Term& g, std::span<const Point> points, double delta,
                                 const VarContext& ctx);

struct DeltaSearch {
  std::optional<SimilarityWitness> witness;
  VerificationReport report;
};

DeltaSearch search_delta(const Term& f, const Term& g, std::span<const Point> points, const VarContext& ctx,
                         double margin = kDefaultWitnessMargin);

struct LogStep {
  double N = 0.0;
  VerificationReport report;
};

// Premise |y_{l-1}| ~ Psi on C_{>M}; yields |y_l|/2 < |log Psi - Theta_l| < 2|y_l| on C_{>N}.
LogStep log_step(double delta, double M, const LogScale& s, int l, const Term& psi, const Cell& cell,
                 const SamplePlan& plan);

struct ChainMu {
  double N = 0.0;
  Term mu;
  double delta = 0.0;
  std::vector<Term> psi;  // Psi_1..Psi_r
  VerificationReport report;
};

// Premise |y_1| ~ Psi on C_{>M} with witness delta; q = (q_1..q_r).
ChainMu chain_mu(const LogScale& s, const Term& psi, const std::vector<Rational>& q, double M, double delta,
                 const Cell& cell, const SamplePlan& plan, double margin = kDefaultWitnessMargin);

struct CenterStep {
  double M = 0.0;
  double N = 0.0;
  Term xi;
  double delta = 0.0;
  VerificationReport report;
};

// Premise y_0 ~ Psi * prod_{j>=1} |y_j|^{q_j} on C with witness delta.
CenterStep center_step(const LogScale& s, const Term& psi, const std::vector<Rational>& q, double delta,
                       const Cell& cell, const SamplePlan& plan);

}  // namespace logprep
