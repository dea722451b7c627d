// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "logprep/cli.hpp"
#include "logprep/documents.hpp"
#include "logprep/errors.hpp"
#include "support.hpp"

using namespace logprep;
using namespace logprep::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json doc() const { return Json::parse(out); }
};

CliRun cli(std::vector<std::string> args) {
  for (auto& a : args) {
    if (a.rfind("fx:", 0) == 0) a = fixture(a.substr(3)).string();
  }
  std::ostringstream out;
  std::ostringstream err;
  CliRun run;
  run.code = run_cli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

Json reencode(const Json& doc, const Resolver& resolve) {
  const std::string kind = kind_of(doc);
  if (kind == "cell") return encode(decode_cell(doc));
  if (kind == "scale") return encode(decode_scale(doc));
  if (kind == "gsa-form") return encode(decode_gsa(doc));
  if (kind == "la-tuple") return encode(decode_la(doc, resolve));
  if (kind == "er-tuple") return encode(decode_er(doc, resolve));
  if (kind == "family") return encode(decode_family(doc));
  if (kind == "heir") return encode(decode_heir(doc, resolve));
  if (kind == "nice") return encode(decode_nice(doc, resolve));
  return Json();
}

class TempDir : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("logprep_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

Json without_timestamp(Json doc) {
  doc.erase("timestamp");
  return doc;
}

}  // namespace

TEST(Documents, EntityFixturesRoundTrip) {
  int entities = 0;
  for (const auto& entry : fs::directory_iterator(LOGPREP_FIXTURE_DIR)) {
    if (entry.path().extension() != ".doc") continue;
    Json doc = read_document(entry.path());
    Json back = reencode(doc, fixtures().resolver());
    if (back.is_null()) continue;
    ++entities;
    EXPECT_EQ(back, doc) << entry.path().filename();
  }
  EXPECT_GE(entities, 20);
}

TEST(Documents, ReportRoundTrip) {
  VerificationReport rep = make_report("outer");
  rep.witnesses["eps"] = 0.25;
  rep.witnesses["sup"] = INFINITY;
  rep.notes.push_back("a note");
  VerificationReport sub = make_report("inner");
  sub.refute("ratio too large", Point{0.5, 0.25});
  rep.add(sub);
  Json doc = encode(rep);
  VerificationReport back = decode_report(doc);
  EXPECT_EQ(back.verdict, Verdict::Refuted);
  EXPECT_EQ(back.message, rep.message);
  EXPECT_TRUE(std::isinf(back.witnesses.at("sup")));
  EXPECT_EQ(encode(back), doc);
}

TEST(Documents, ShiftedScaleHasOneLevel) {
  LogScale s = fixture_scale("ex237_scale");
  EXPECT_EQ(s.r(), 1);
  EXPECT_EQ(s.signs, (std::vector<int>{1, -1}));
}

TEST(Documents, MissingCenterNamesPath) {
  Json doc = fixture_doc("ex237_scale");
  doc.erase("center");
  try {
    decode_scale(doc);
    FAIL() << "expected a decode error";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.path(), "$.center");
  }
}

TEST(Documents, BadCenterEntryNamesIndex) {
  Json doc = fixture_doc("ex237_scale");
  doc["center"][1] = "log(";
  try {
    decode_scale(doc);
    FAIL() << "expected a decode error";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.path(), "$.center[1]");
  }
}

TEST(Documents, UnknownReferenceFails) {
  Json doc = fixture_doc("la_linear");
  doc["scale"] = "no_such_scale";
  EXPECT_THROW(decode_la(doc, fixtures().resolver()), Error);
}

TEST(Documents, ContextInference) {
  EXPECT_EQ(infer_context("x + t3 * t1").n, 3);
  EXPECT_EQ(infer_context("x").n, 0);
}

TEST_F(TempDir, AtomicWriteReplacesFile) {
  fs::path target = dir / "doc.json";
  write_document(target, Json{{"a", 1}});
  write_document(target, Json{{"a", 2}});
  EXPECT_EQ(read_document(target).at("a"), 2);
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
}

TEST_F(TempDir, MalformedDocumentIsDecodeError) {
  fs::path target = dir / "bad.doc";
  std::ofstream(target) << "{ \"kind\": ";
  EXPECT_THROW(read_document(target), DecodeError);
}

TEST(Cli, ClassifyOrder) {
  CliRun run = cli({"classify", "order", "fx:example_1_3.term"});
  EXPECT_EQ(run.code, 0);
  EXPECT_EQ(run.doc()["report"]["witnesses"]["bound"], 3);
  EXPECT_EQ(run.doc()["schema-version"], kSchemaVersion);
}

TEST(Cli, ClassifyExpNumbers) {
  CliRun a = cli({"classify", "expnum", "fx:intro_exp.term", "--family", "fx:intro_family.doc"});
  CliRun b = cli({"classify", "expnum", "fx:intro_log.term", "--family", "fx:intro_family.doc"});
  CliRun c = cli({"classify", "expnum", "fx:intro_expexp.term", "--family", "fx:intro_family2.doc"});
  EXPECT_EQ(a.doc()["report"]["witnesses"]["bound"], 1);
  EXPECT_EQ(b.doc()["report"]["witnesses"]["bound"], 1);
  EXPECT_EQ(c.doc()["report"]["witnesses"]["bound"], 2);
}

TEST(Cli, VerifyScaleVerdicts) {
  CliRun good = cli({"verify", "scale", "fx:ex237_scale.doc", "--cell", "fx:ex237_cell.doc", "--samples", "10000",
                     "--seed", "7"});
  EXPECT_EQ(good.code, 0);
  CliRun bad = cli({"verify", "scale", "fx:ex237_scale_mutated.doc", "--cell", "ex237_cell", "--samples", "2000"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(bad.doc()["report"]["counterexample"].is_null());
}

TEST(Cli, BrokenTupleRefutedWithPoint) {
  CliRun run = cli({"verify", "la", "fx:la_broken.doc", "--cell", "unit_cell", "--f", "@" + fixture("la_linear_f.term").string()});
  EXPECT_EQ(run.code, 1);
  ASSERT_TRUE(run.doc()["report"]["counterexample"].is_array());
  EXPECT_EQ(run.doc()["report"]["counterexample"].size(), 2u);
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
  CliRun run = cli({"bogus"});
  EXPECT_EQ(run.code, 2);
  EXPECT_NE((run.out + run.err).find("Usage"), std::string::npos);
}

TEST(Cli, MissingFileIsInvalidInput) {
  CliRun run = cli({"verify", "scale", "fx:does_not_exist.doc", "--cell", "ex237_cell"});
  EXPECT_EQ(run.code, 2);
}

TEST(Cli, ExitCodeMatchesVerdict) {
  std::vector<std::vector<std::string>> runs = {
      {"verify", "heir", "fx:ex237_heir.doc", "--cell", "ex237_cell", "--samples", "1000"},
      {"verify", "nice", "fx:ex237_nice.doc", "--cell", "ex237_cell", "--samples", "1000"},
      {"verify", "gsa", "fx:gsa_shift.doc", "--cell", "gsa_shift_cell", "--f", "fx:gsa_shift_f.term"},
      {"verify", "er", "fx:xe_er.doc", "--cell", "xe_cell", "--f", "fx:xe_f.term", "--family", "xe_family"},
      {"verify", "scale", "fx:ex237_scale_mutated.doc", "--cell", "ex237_cell", "--samples", "1000"},
      {"rewrite", "eliminate-exp", "fx:prop31.doc", "--cell", "prop31_cell", "--samples", "1000"},
      {"rewrite", "log-prep", "fx:logprep_square.doc", "--cell", "intro_cell", "--samples", "1000"},
      {"similarity", "check", "--f", "x", "--g", "1 / (1 + t1)", "--delta", "2", "--cell", "fx:ex237_cell.doc"},
  };
  for (const auto& args : runs) {
    CliRun run = cli(args);
    Verdict v = verdict_from_string(run.doc()["report"]["verdict"].get<std::string>());
    EXPECT_EQ(run.code, exit_code(v)) << args[0] << " " << args[1] << " " << args[2];
  }
}

TEST(Cli, DichotomyTakesNonzeroBranch) {
  CliRun run = cli({"rewrite", "dichotomy", "fx:ex228_dichotomy.doc", "--cell", "ex228_cell", "--samples", "1000"});
  EXPECT_EQ(run.code, 0) << run.out.substr(0, 400);
  Json doc = run.doc();
  const Json& rep = doc.at("report");
  EXPECT_EQ(rep.at("data").at("branch"), "nonzero-center");
  EXPECT_EQ(rep.at("witnesses").at("delta"), 2.0);
  EXPECT_EQ(rep.at("data").at("trusted"), true);
}

TEST_F(TempDir, ReportsAreReproducible) {
  fs::path out = dir / "report.json";
  fs::path kept = dir / "first.json";
  std::vector<std::string> args = {"verify", "scale", fixture("ex237_scale.doc").string(), "--cell", "ex237_cell",
                                   "--samples", "2000", "--seed", "3", "--out", out.string()};
  CliRun r1 = cli(args);
  fs::rename(out, kept);
  CliRun r2 = cli(args);
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r1.code, r2.code);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_NE(r1.out.find("verified"), std::string::npos);
  EXPECT_EQ(dump_document(without_timestamp(read_document(kept))),
            dump_document(without_timestamp(read_document(out))));
}

TEST_F(TempDir, MergeTakesWorstVerdict) {
  fs::path good = dir / "good.json";
  fs::path bad = dir / "bad.json";
  cli({"verify", "scale", "fx:ex237_scale.doc", "--cell", "ex237_cell", "--samples", "500", "--out", good.string()});
  cli({"verify", "scale", "fx:ex237_scale_mutated.doc", "--cell", "ex237_cell", "--samples", "500", "--out",
       bad.string()});
  CliRun merged = cli({"report", "merge", good.string(), bad.string()});
  EXPECT_EQ(merged.code, 1);
  CliRun single = cli({"report", "merge", good.string()});
  EXPECT_EQ(single.code, 0);
}
