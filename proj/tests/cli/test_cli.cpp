#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "framelab/document_io.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace framelab;

namespace {

struct Captured {
  int exit_code;
  std::string out;
  std::string err;
};

Captured run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = cli::run(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string fx(const std::string& name) { return oracle::source_path("fixtures/" + name + ".json"); }

class GoldenReport : public ::testing::TestWithParam<golden::Case> {};

}  // namespace

TEST_P(GoldenReport, MatchesCommittedReportAndExitCode) {
  const std::string scratch = golden::make_scratch("cli-golden");
  const golden::Outcome o = golden::run(GetParam(), scratch);
  std::filesystem::remove_all(scratch);
  EXPECT_TRUE(o.exit_matches) << o.detail;
  EXPECT_TRUE(o.report_matches) << o.detail;
}

INSTANTIATE_TEST_SUITE_P(Cli, GoldenReport, ::testing::ValuesIn(golden::cases()),
                         [](const ::testing::TestParamInfo<golden::Case>& info) {
                           std::string n = info.param.name;
                           for (char& ch : n) {
                             if (ch == '-') ch = '_';
                           }
                           return n;
                         });

TEST(Gen, EveryCommittedFixtureRegeneratesByteForByte) {
  const std::string scratch = golden::make_scratch("regen");
  const auto differing = golden::regenerate_fixtures(scratch);
  std::filesystem::remove_all(scratch);
  EXPECT_TRUE(differing.empty()) << ::testing::PrintToString(differing);
}

TEST(Gen, SpecDocumentRoundTrips) {
  const std::string dir = golden::make_scratch("spec");
  const Captured c = run_cli({"gen", "--spec", "6", "3x2", "--out-dir", dir});
  ASSERT_EQ(c.exit_code, 0) << c.err;
  const Json report = parse_json_text(c.out);
  const std::string path = report.at("files").at(0).get<std::string>();
  const std::string text = read_text_file(path);
  const FrameDocument doc = load_document_text(text);
  EXPECT_EQ(doc.system.dim(), 6);
  EXPECT_EQ(doc.system.size(), 3u);
  EXPECT_EQ(doc.system.member(0).local.local_dim(), 2);
  const FrameDocument again = load_document_text(save_document_text(doc));
  for (std::size_t j = 0; j < doc.system.size(); ++j) {
    EXPECT_TRUE(again.system.member(j).local.matrix == doc.system.member(j).local.matrix);
    EXPECT_TRUE(again.system.member(j).subspace.basis() == doc.system.member(j).subspace.basis());
  }
  const Json header = parse_json_text(text);
  EXPECT_EQ(header.begin().key(), "generator");
  EXPECT_EQ(header.at("generator").at("seed").get<int>(), 1);
  std::filesystem::remove_all(dir);
}

TEST(Gen, SeedChangesTheSystem) {
  const std::string dir = golden::make_scratch("seed");
  ASSERT_EQ(run_cli({"gen", "--spec", "4", "2x2", "--seed", "3", "--out-dir", dir}).exit_code, 0);
  ASSERT_EQ(run_cli({"gen", "--spec", "4", "2x2", "--seed", "4", "--out-dir", dir}).exit_code, 0);
  EXPECT_NE(read_text_file(dir + "/SPEC-4-2x2-s3.json"), read_text_file(dir + "/SPEC-4-2x2-s4.json"));
  std::filesystem::remove_all(dir);
}

TEST(Human, SameVerdictsAsStructuredOutput) {
  const Captured json = run_cli({"analyze", fx("FIX-A"), "--bounds", "0.6", "1"});
  const Captured human = run_cli({"--human", "analyze", fx("FIX-A"), "--bounds", "0.6", "1"});
  EXPECT_EQ(json.exit_code, human.exit_code);
  const auto line = human.out.find("verdicts.is_frame ");
  ASSERT_NE(line, std::string::npos) << human.out;
  const std::string row = human.out.substr(line, human.out.find('\n', line) - line);
  EXPECT_TRUE(row.ends_with(" true")) << row;
  const Json r = parse_json_text(json.out);
  EXPECT_TRUE(r.at("verdicts").at("is_frame").get<bool>());
}

TEST(Tolerance, EnvironmentVariableMirrorsFlag) {
  ::setenv("FRAMELAB_TOL_REL", "1e-5", 1);
  const Captured env = run_cli({"analyze", fx("FIX-A")});
  ::unsetenv("FRAMELAB_TOL_REL");
  const Captured flag = run_cli({"--tol-rel", "1e-5", "analyze", fx("FIX-A")});
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(parse_json_text(env.out).at("tolerance").at("rel").get<double>(), 1e-5);

  ::setenv("FRAMELAB_TOL_REL", "abc", 1);
  const Captured bad = run_cli({"analyze", fx("FIX-A")});
  ::unsetenv("FRAMELAB_TOL_REL");
  EXPECT_EQ(bad.exit_code, 2);
}

TEST(Dual, WrittenDocumentCarriesTheAdjoint) {
  const std::string dir = golden::make_scratch("dual");
  const std::string out = dir + "/a.json";
  ASSERT_EQ(run_cli({"dual", fx("FIX-A"), "--method", "q", "--out", out}).exit_code, 0);
  const FrameDocument d = load_document(out);
  EXPECT_LE((d.op("k_adjoint").matrix() - fixture("FIX-A").op("k").matrix().adjoint()).norm(), 0.0);
  EXPECT_EQ(d.name, "FIX-A-qdual");
  std::filesystem::remove_all(dir);
}

TEST(ExitCodes, ReportFieldMatchesProcessCode) {
  for (const auto& c : golden::cases()) {
    if (c.human || c.args.empty()) continue;
    std::vector<std::string> args = c.args;
    bool uses_out = false;
    for (const auto& a : args) uses_out = uses_out || a.find("$OUT") != std::string::npos;
    if (uses_out) continue;
    std::filesystem::path here = std::filesystem::current_path();
    std::filesystem::current_path(oracle::source_path(""));
    const Captured r = run_cli(args);
    std::filesystem::current_path(here);
    const Json report = parse_json_text(r.out);
    EXPECT_EQ(report.at("exit_code").get<int>(), r.exit_code) << c.name;
    if (r.exit_code == 2) {
      EXPECT_FALSE(r.err.empty()) << c.name;
    }
  }
}
