// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "logprep/cell.hpp"
#include "logprep/family.hpp"
#include "logprep/preparation.hpp"
#include "logprep/report.hpp"
#include "logprep/rewrite.hpp"
#include "logprep/scale.hpp"
#include "logprep/term.hpp"

namespace logprep {

inline constexpr const char* kSchemaVersion = "logprep/1";

using Json = nlohmann::json;

// Loads the document named `name` for cross-references.
using Resolver = std::function<Json(const std::string& name)>;

// Directory of documents; `name` resolves to <dir>/<name>.doc.
class Workspace {
public:
  explicit Workspace(std::filesystem::path dir) : dir_(std::move(dir)) {}
  static Workspace of_file(const std::filesystem::path& file);

  const std::filesystem::path& dir() const { return dir_; }
  Json load(const std::string& name) const;
  Resolver resolver() const;

private:
  std::filesystem::path dir_;
};

Json read_document(const std::filesystem::path& path);
std::string dump_document(const Json& doc);
// Writes through a temporary file and a rename.
void write_document(const std::filesystem::path& path, const Json& doc);

// Context sized by the largest t-index occurring in the text.
VarContext infer_context(std::string_view text);
std::string read_text(const std::filesystem::path& path);

std::string kind_of(const Json& doc, const std::string& path = "$");

Json encode(const Cell& cell);
Cell decode_cell(const Json& doc, const std::string& path = "$");

Json encode(const LogScale& scale);
LogScale decode_scale(const Json& doc, const std::string& path = "$");

Json encode(const UnitSpec& unit);
UnitSpec decode_unit(const Json& doc, const std::string& path = "$");

Json encode(const GsaPreparedForm& form);
GsaPreparedForm decode_gsa(const Json& doc, const std::string& path = "$");

Json encode(const LAPreparingTuple& tuple);
LAPreparingTuple decode_la(const Json& doc, const Resolver& resolve = {}, const std::string& path = "$");

Json encode(const ERPreparingTuple& tuple);
ERPreparingTuple decode_er(const Json& doc, const Resolver& resolve = {}, const std::string& path = "$");

Json encode(const ExpFamily& family);
ExpFamily decode_family(const Json& doc, const std::string& path = "$");

Json encode(const HeirCertificate& heir);
HeirCertificate decode_heir(const Json& doc, const Resolver& resolve = {}, const std::string& path = "$");

// A function g claimed nice, its construction tree and the heirs the tree names.
struct NiceCertificate {
  std::string name;
  VarContext ctx;
  Term g;
  NiceTree tree;
  std::vector<HeirCertificate> heirs;
  std::vector<std::string> heir_refs;  // per heir: document name, or empty when inline
};

Json encode(const NiceCertificate& nice);
NiceCertificate decode_nice(const Json& doc, const Resolver& resolve = {}, const std::string& path = "$");

Json encode(const VerificationReport& report);
VerificationReport decode_report(const Json& doc, const std::string& path = "$");

Json encode(const RewriteOutput& out);

}  // namespace logprep
