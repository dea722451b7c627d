// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace logprep {

using Point = std::vector<double>;

enum class Verdict { Verified, Inconclusive, Refuted, Invalid };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);
// Conjunction: invalid > refuted > inconclusive > verified.
Verdict combine(Verdict a, Verdict b);
int exit_code(Verdict v);

struct VerificationReport {
  std::string name;
  Verdict verdict = Verdict::Verified;
  std::string message;
  std::map<std::string, double> witnesses;
  std::optional<Point> counterexample;
  std::vector<std::string> notes;
  std::vector<VerificationReport> sub;
  nlohmann::json data = nlohmann::json::object();

  bool verified() const { return verdict == Verdict::Verified; }
  bool refuted() const { return verdict == Verdict::Refuted; }

  // Adds a sub-report and folds its verdict into this one.
  void add(VerificationReport r);
  void refute(const std::string& msg, std::optional<Point> where = std::nullopt);
  void invalid(const std::string& msg);
  void inconclusive(const std::string& msg, std::optional<Point> where = std::nullopt);
  const VerificationReport* find(const std::string& sub_name) const;
};

VerificationReport make_report(std::string name);

}  // namespace logprep
