// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "logprep/rational.hpp"
#include "logprep/term.hpp"

namespace logprep {

struct FamilyMember {
  std::string name;
  Term term;
  // Optional witness: log(term) = sum_k coeff_k * log(base member k).
  std::map<std::string, Rational> witness;
};

// Named positive functions on a cell. `base` holds the reference family used by
// linear-combination witnesses; when empty the members themselves serve as base.
struct ExpFamily {
  std::string name;
  VarContext ctx;
  std::vector<FamilyMember> members;
  std::vector<FamilyMember> base;

  const FamilyMember* find(const std::string& member) const;
  const FamilyMember* find_base(const std::string& member) const;
  const std::vector<FamilyMember>& base_members() const { return base.empty() ? members : base; }
};

}  // namespace logprep
