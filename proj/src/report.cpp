// SPDX-License-Identifier: Apache-2.0
#include "logprep/report.hpp"

#include <stdexcept>

namespace logprep {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Refuted: return "refuted";
    case Verdict::Invalid: return "invalid-input";
  }
  return "invalid-input";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "verified") return Verdict::Verified;
  if (s == "inconclusive") return Verdict::Inconclusive;
  if (s == "refuted") return Verdict::Refuted;
  if (s == "invalid-input") return Verdict::Invalid;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

Verdict combine(Verdict a, Verdict b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Verified: return 0;
    case Verdict::Refuted: return 1;
    case Verdict::Invalid: return 2;
    case Verdict::Inconclusive: return 3;
  }
  return 2;
}

void VerificationReport::add(VerificationReport r) {
  Verdict before = verdict;
  verdict = combine(verdict, r.verdict);
  if (verdict != before) {
    message = r.name + ": " + r.message;
    if (r.counterexample) counterexample = r.counterexample;
  }
  sub.push_back(std::move(r));
}

void VerificationReport::refute(const std::string& msg, std::optional<Point> where) {
  if (verdict != Verdict::Refuted && verdict != Verdict::Invalid) {
    verdict = Verdict::Refuted;
    message = msg;
    counterexample = std::move(where);
  }
}

void VerificationReport::invalid(const std::string& msg) {
  if (verdict != Verdict::Invalid) {
    verdict = Verdict::Invalid;
    message = msg;
    counterexample.reset();
  }
}

void VerificationReport::inconclusive(const std::string& msg, std::optional<Point> where) {
  if (verdict == Verdict::Verified) {
    verdict = Verdict::Inconclusive;
    message = msg;
    if (where) counterexample = where;
  }
}

const VerificationReport* VerificationReport::find(const std::string& sub_name) const {
  for (const auto& s : sub) {
    if (s.name == sub_name) return &s;
  }
  return nullptr;
}

VerificationReport make_report(std::string name) {
  VerificationReport r;
  r.name = std::move(name);
  return r;
}

}  // namespace logprep
