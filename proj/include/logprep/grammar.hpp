// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "logprep/errors.hpp"
#include "logprep/series.hpp"
#include "logprep/term.hpp"

namespace logprep {

// Text grammar:
//   expr    := mulexpr (("+" | "-") mulexpr)*
//   mulexpr := unary (("*" | "/") unary)*       a leading bare "1 /" builds Inv
//   unary   := "-" unary | power                "-" before a literal builds a negative constant
//   power   := primary ["^" "(" ["-"] int ["/" int] ")"]
//   primary := number ["/" number] | "t"k | "x" | "(" expr ")" | call | piece
//   call    := abs|log|exp "(" e ")" | root "(" n "," e ")" | min|max "(" e "," e ")"
//            | logstar|expstar "(" r ["," r] "," e ")" | series "(" name ";" e,... ")" | name "(" e,... ")"
//   piece   := "piece" "{" cond "->" e (";" cond "->" e)* [";" "else" "->" e] "}"
//   cond    := e cmp e ("&&" e cmp e)*
Term parse_term(std::string_view text, const VarContext& ctx,
                const SeriesRegistry& registry = SeriesRegistry::builtin());

std::string print_term(const Term& t, const VarContext& ctx);

std::string to_string(Cmp c);

}  // namespace logprep
