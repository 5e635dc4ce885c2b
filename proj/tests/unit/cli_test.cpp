#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "scenestat/cli.h"
#include "scenestat/experiment/store.h"
#include "scenestat/pipeline/analysis.h"
#include "scenestat/pipeline/manifest.h"
#include "scenestat/pipeline/scoring.h"
#include "scenestat/random.h"
#include "test_support.h"

namespace scenestat::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus_dir() { return testing::data_path("fixtures/corpus2").string(); }

class CliTest : public ::testing::Test {
 protected:
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes scores and aggregates for a mediated fixture; `collinear` copies complexity into
  // natural randomness.
  void write_analysis_inputs(bool collinear, const std::string& prefix = "") {
    Rng rng(12);
    std::vector<pipeline::ScoreRow> scores;
    experiment::AggregateExport agg;
    agg.set_id = "fixture";
    agg.completed_sessions = 1000;
    for (std::uint32_t i = 0; i < 200; ++i) {
      pipeline::ScoreRow s{i * 97 + 1, 12.0 + 2.0 * rng.normal(), 0.0};
      s.natural_randomness = collinear ? s.complexity_bits : 0.5 * (s.complexity_bits - 12.0) + rng.normal();
      scores.push_back(s);
      const double p = 1.0 / (1.0 + std::exp(-s.natural_randomness));
      agg.rows.push_back({s.pattern, static_cast<std::uint64_t>(std::llround(p * 1000)), 1000});
    }
    testing::write_file(dir_ / (prefix + "scores.csv"),
                        pipeline::scores_to_csv(scores, 4, LogBase::kBits));
    testing::write_file(dir_ / (prefix + "agg.csv"), experiment::aggregates_to_csv(agg));
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, ScanFixtureMatchesGolden) {
  const auto r = run_cli({"scan", "--corpus", corpus_dir(), "--out", path("freq.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string golden = testing::read_file(testing::data_path("golden/scan_two_images.csv"));
  EXPECT_EQ(testing::read_file(path("freq.csv")), golden);

  ASSERT_EQ(run_cli({"scan", "--corpus", corpus_dir(), "--out", path("freq.csv")}).code, kExitOk);
  EXPECT_EQ(testing::read_file(path("freq.csv")), golden);

  const auto manifest = pipeline::manifest_from_json(testing::read_file(path("freq.csv.manifest.json")));
  EXPECT_EQ(manifest.command, "scan");
  EXPECT_EQ(manifest.options.at("k"), "4");
  EXPECT_EQ(manifest.options.at("mode"), "tiled");
}

TEST_F(CliTest, ScanEmptyDirectoryIsUsageError) {
  std::filesystem::create_directories(dir_ / "empty");
  const auto r = run_cli({"scan", "--corpus", path("empty"), "--out", path("f.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("no images found"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "f.csv"));
}

TEST_F(CliTest, EnvironmentFallback) {
  ::setenv("SCENESTAT_MODE", "sliding", 1);
  const auto r = run_cli({"scan", "--corpus", corpus_dir(), "--k", "3", "--out", path("f.csv")});
  ::unsetenv("SCENESTAT_MODE");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(testing::read_file(path("f.csv")).rfind("# side=3 mode=sliding", 0), 0u);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"scan", "--corpus", corpus_dir()}).code, kExitUsage);
  EXPECT_EQ(run_cli({"scan", "--corpus", corpus_dir(), "--k", "9", "--out", path("x")}).code,
            kExitUsage);
  EXPECT_EQ(run_cli({"ctm", "--samples", "0", "--out", path("c.csv")}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, CtmIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> args = {"ctm", "--samples", "20000", "--steps", "200", "--seed", "3"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv"), "--threads", "3"});
  ASSERT_EQ(run_cli(a).code, kExitOk);
  ASSERT_EQ(run_cli(b).code, kExitOk);
  EXPECT_EQ(testing::read_file(path("a.csv")), testing::read_file(path("b.csv")));
}

TEST_F(CliTest, CtmDefaultsReproduceGolden) {
  ASSERT_EQ(run_cli({"ctm", "--out", path("ctm.csv")}).code, kExitOk);
  EXPECT_EQ(testing::read_file(path("ctm.csv")),
            testing::read_file(testing::data_path("golden/ctm_k2_canonical.csv")));
}

TEST_F(CliTest, CtmWithTooFewStatesIsDataError) {
  const auto r = run_cli({"ctm", "--states", "1", "--samples", "1000", "--out", path("c.csv")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("halting"), std::string::npos);
}

TEST_F(CliTest, ScoreUnsmoothedUnknownPatternIsDataError) {
  ASSERT_EQ(run_cli({"scan", "--corpus", corpus_dir(), "--out", path("freq.csv")}).code, kExitOk);
  testing::write_file(dir_ / "set.json",
                      R"({"id":"s","k":4,"patterns":["2c49","beef","0000"]})");
  const std::string ctm = testing::data_path("golden/ctm_k2_canonical.csv").string();
  const auto r = run_cli({"score", "--freq", path("freq.csv"), "--ctm", ctm, "--stimuli",
                          path("set.json"), "--alpha", "0", "--out", path("scores.csv")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("0xbeef 0x0"), std::string::npos);
  EXPECT_EQ(r.err.find("2c49"), std::string::npos);

  const auto ok = run_cli({"score", "--freq", path("freq.csv"), "--ctm", ctm, "--stimuli",
                           path("set.json"), "--out", path("scores.csv")});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(pipeline::scores_from_csv(testing::read_file(path("scores.csv")), 4).size(), 3u);
}

TEST_F(CliTest, AnalyzeMediatedFixture) {
  write_analysis_inputs(false);
  const auto r = run_cli({"analyze", "--scores", path("scores.csv"), "--aggregates", path("agg.csv"),
                          "--out-dir", path("report")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto report = pipeline::report_from_json(testing::read_file(dir_ / "report" / "report.json"));
  EXPECT_GT(report.mediation.sobel_z, 1.96);
  EXPECT_LT(std::abs(report.mediation.c_prime), 0.1);
  EXPECT_EQ(report.n, 200u);
  for (const char* f : {"correlations.csv", "analysis.csv", "scatter_natural.svg",
                        "scatter_complexity.svg", "report.json.manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "report" / f)) << f;
  }
}

TEST_F(CliTest, AnalyzeCollinearIsDataError) {
  write_analysis_inputs(true);
  const auto r = run_cli({"analyze", "--scores", path("scores.csv"), "--aggregates", path("agg.csv"),
                          "--out-dir", path("report")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("rank deficient"), std::string::npos);
}

TEST_F(CliTest, ReplayReproducesEveryOutput) {
  const std::string ctm = testing::data_path("golden/ctm_k2_canonical.csv").string();
  ASSERT_EQ(run_cli({"scan", "--corpus", corpus_dir(), "--k", "2", "--mode", "sliding", "--out",
                     path("freq.csv")}).code,
            kExitOk);
  ASSERT_EQ(run_cli({"sample", "--freq", path("freq.csv"), "--n", "5", "--seed", "9", "--id", "t",
                     "--out", path("set.json")}).code,
            kExitOk);
  ASSERT_EQ(run_cli({"score", "--freq", path("freq.csv"), "--ctm", ctm, "--alpha", "0.5",
                     "--log-base", "e", "--out", path("scores.csv")}).code,
            kExitOk);
  write_analysis_inputs(false, "med_");
  ASSERT_EQ(run_cli({"analyze", "--scores", path("med_scores.csv"), "--aggregates",
                     path("med_agg.csv"), "--out-dir", path("report")}).code,
            kExitOk);

  for (const std::string out : {"freq.csv", "set.json", "scores.csv", "report/report.json"}) {
    const std::string before = testing::read_file(dir_ / out);
    std::filesystem::remove(dir_ / out);
    const auto r = run_cli({"replay", path(out + ".manifest.json")});
    ASSERT_EQ(r.code, kExitOk) << out << ": " << r.err;
    EXPECT_EQ(testing::read_file(dir_ / out), before) << out;
  }
  EXPECT_EQ(run_cli({"replay", path("absent.manifest.json")}).code, kExitUsage);
}

TEST_F(CliTest, ServeRejectsMissingDataDirectory) {
  const auto r = run_cli({"serve", "--data-dir", path("nope"), "--port", "0"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);
}

}  // namespace
}  // namespace scenestat::cli
