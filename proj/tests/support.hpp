// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "logprep/documents.hpp"
#include "logprep/grammar.hpp"
#include "logprep/term.hpp"

namespace logprep::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(LOGPREP_FIXTURE_DIR) / name;
}

inline Workspace fixtures() { return Workspace(LOGPREP_FIXTURE_DIR); }

inline Json fixture_doc(const std::string& name) { return read_document(fixture(name + ".doc")); }

inline Cell fixture_cell(const std::string& name) { return decode_cell(fixture_doc(name)); }

inline LogScale fixture_scale(const std::string& name) { return decode_scale(fixture_doc(name)); }

inline Term fixture_term(const std::string& name, VarContext ctx) {
  return parse_term(read_text(fixture(name + ".term")), ctx);
}

struct TermGen {
  explicit TermGen(std::uint64_t seed, VarContext ctx) : rng(seed), ctx(ctx) {}

  std::mt19937_64 rng;
  VarContext ctx;
  bool allow_exp = false;
  bool allow_log = true;
  bool allow_guards = false;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Rational small_rational() {
    std::int64_t num = std::uniform_int_distribution<std::int64_t>(-9, 9)(rng);
    std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
    return Rational(num, den);
  }

  Term leaf() {
    if (pick(3) == 0) return Const(small_rational());
    return Var(pick(ctx.dim()));
  }

  Term term(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(allow_guards ? 14 : 13)) {
      case 0: return leaf();
      case 1: return Add(term(depth - 1), term(depth - 1));
      case 2: return Mul(term(depth - 1), term(depth - 1));
      case 3: return Neg(term(depth - 1));
      case 4: return Inv(term(depth - 1));
      case 5: return Root(2 + pick(2), term(depth - 1));
      case 6: return Abs(term(depth - 1));
      case 7: return Pow(term(depth - 1), Rational(1 + pick(5), 1 + pick(3)));
      case 8: return allow_log ? Log(term(depth - 1)) : Abs(term(depth - 1));
      case 9: return allow_exp ? Exp(term(depth - 1)) : Neg(term(depth - 1));
      case 10: return Min(term(depth - 1), term(depth - 1));
      case 11: return Max(term(depth - 1), term(depth - 1));
      case 12: return TruncLog(Rational(1, 2), Rational(3, 2), term(depth - 1));
      default: {
        Branch b{{Atom{Cmp::Lt, term(depth - 1), term(depth - 1)}}, false, term(depth - 1)};
        Branch e{{}, true, term(depth - 1)};
        return Guarded({b, e});
      }
    }
  }

  Point point(double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Point p(ctx.dim());
    for (auto& v : p) v = u(rng);
    return p;
  }
};

}  // namespace logprep::testing
