// Copyright 2026 The OTR Labeling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "otr/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "otr/dataset_io.hpp"
#include "test_util.hpp"

namespace otr {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "otr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string WriteEpisodes(const std::string& name, std::size_t count,
                          std::uint64_t seed, bool with_rewards) {
  std::mt19937_64 rng(seed);
  std::vector<Trajectory> eps;
  for (std::size_t i = 0; i < count; ++i) {
    Trajectory t = testing::RandomTrajectory(rng, 5 + static_cast<int>(i % 4), 3,
                                             name + std::to_string(i));
    t.actions = testing::RandomPoints(rng, t.observations.rows(), 2);
    if (with_rewards) {
      t.rewards = std::vector<double>(t.length(), static_cast<double>(i));
    }
    eps.push_back(t);
  }
  const auto path = testing::TempPath(name + ".jsonl");
  WriteDataset(path, eps);
  return path.string();
}

TEST(CliTest, LabelWritesOneRecordPerEpisode) {
  const auto unlabeled = WriteEpisodes("cli_u", 10, 1, false);
  const auto experts = WriteEpisodes("cli_e", 2, 2, true);
  const auto out = testing::TempPath("cli_labeled.jsonl").string();
  const CliRun r = Invoke({"label", unlabeled, experts, out, "--preset", "locomotion"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto labeled = ReadLabeled(out);
  ASSERT_EQ(labeled.size(), 10u);
  for (const auto& ep : labeled) {
    EXPECT_EQ(ep.rewards.size(), ep.base.length());
    EXPECT_TRUE(ep.source_expert.has_value());
  }
  EXPECT_NE(r.out.find("labeled 10 episodes"), std::string::npos);
}

TEST(CliTest, SelfLabelingWithPlainPresetGivesUnitRewards) {
  const auto experts = WriteEpisodes("cli_self", 1, 3, true);
  const auto out = testing::TempPath("cli_self_out.jsonl").string();
  const CliRun r = Invoke({"label", experts, experts, out, "--max-iters", "20000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto labeled = ReadLabeled(out);
  for (double v : labeled[0].rewards) EXPECT_NEAR(v, 1.0, 1e-3);
}

TEST(CliTest, MissingExpertsFileIsAnIoError) {
  const auto unlabeled = WriteEpisodes("cli_u2", 2, 4, false);
  const CliRun r = Invoke({"label", unlabeled, "/nonexistent/experts.jsonl",
                        testing::TempPath("never.jsonl").string()});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("/nonexistent/experts.jsonl"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"label"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"label", "a", "b", "c", "--plan", "weird"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"select-experts", "a", "0", "b"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST(CliTest, MalformedInputIsAParseError) {
  const auto bad = testing::TempPath("cli_bad.jsonl");
  std::ofstream(bad) << "{\"observations\": [[1, 2], [3]]}\n";
  const auto experts = WriteEpisodes("cli_e3", 1, 5, true);
  const CliRun r = Invoke({"label", bad.string(), experts,
                        testing::TempPath("cli_bad_out.jsonl").string()});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find(":1:"), std::string::npos) << r.err;
}

TEST(CliTest, InvalidNumericConfigIsReported) {
  const auto unlabeled = WriteEpisodes("cli_u4", 2, 6, false);
  const auto experts = WriteEpisodes("cli_e4", 1, 7, true);
  const CliRun r = Invoke({"label", unlabeled, experts,
                        testing::TempPath("cli_eps.jsonl").string(), "--epsilon", "-1"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.code, kExitUsage);
}

TEST(CliTest, OutputIsIndependentOfParallelism) {
  const auto unlabeled = WriteEpisodes("cli_u5", 16, 8, false);
  const auto experts = WriteEpisodes("cli_e5", 3, 9, true);
  const auto a = testing::TempPath("cli_p1.jsonl").string();
  const auto b = testing::TempPath("cli_p8.jsonl").string();
  ASSERT_EQ(Invoke({"label", unlabeled, experts, a, "--parallelism", "1"}).code, kExitOk);
  ASSERT_EQ(Invoke({"label", unlabeled, experts, b, "--parallelism", "8"}).code, kExitOk);
  EXPECT_EQ(Slurp(a), Slurp(b));
}

TEST(CliTest, SelectExpertsKeepsTopReturns) {
  const auto ds = WriteEpisodes("cli_sel", 5, 10, true);
  const auto out = testing::TempPath("cli_sel_out.jsonl");
  const CliRun r = Invoke({"select-experts", ds, "2", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto top = ReadDataset(out);
  ASSERT_EQ(top.size(), 2u);
  // Returns are i * length(i): 0, 6, 14, 24, 20.
  EXPECT_EQ(top.episodes[0].id, "cli_sel3");
  EXPECT_EQ(top.episodes[1].id, "cli_sel4");
  EXPECT_TRUE(r.err.empty());
}

TEST(CliTest, SelectExpertsWarnsWhenKExceedsSize) {
  const auto ds = WriteEpisodes("cli_sel2", 2, 11, true);
  const CliRun r = Invoke({"select-experts", ds, "7",
                        testing::TempPath("cli_sel2_out.jsonl").string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(CliTest, SelectExpertsWithoutRewardsFails) {
  const auto ds = WriteEpisodes("cli_sel3", 2, 12, false);
  EXPECT_EQ(Invoke({"select-experts", ds, "1",
                    testing::TempPath("cli_sel3_out.jsonl").string()})
                .code,
            kExitParse);
}

TEST(CliTest, DiagnoseWritesCsvAndCorrelations) {
  const auto truth = WriteEpisodes("cli_truth", 6, 13, true);
  const auto experts = WriteEpisodes("cli_e6", 1, 14, true);
  const auto labeled = testing::TempPath("cli_diag_labeled.jsonl").string();
  ASSERT_EQ(Invoke({"label", truth, experts, labeled}).code, kExitOk);
  const auto csv = testing::TempPath("cli_diag.csv");
  const CliRun r = Invoke({"diagnose", labeled, truth, csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("pearson: "), std::string::npos);
  EXPECT_NE(r.out.find("spearman: "), std::string::npos);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "episode_id,ground_truth_return,otr_return,source_expert");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(CliTest, DiagnoseDegenerateTruthWarns) {
  std::mt19937_64 rng(15);
  std::vector<Trajectory> eps;
  for (int i = 0; i < 3; ++i) {
    Trajectory t = testing::RandomTrajectory(rng, 4, 2, "d" + std::to_string(i));
    t.rewards = std::vector<double>(4, 0.0);
    eps.push_back(t);
  }
  const auto truth = testing::TempPath("cli_flat.jsonl");
  WriteDataset(truth, eps);
  const auto labeled = testing::TempPath("cli_flat_labeled.jsonl").string();
  ASSERT_EQ(Invoke({"label", truth.string(), truth.string(), labeled}).code, kExitOk);
  const CliRun r = Invoke({"diagnose", labeled, truth.string(),
                        testing::TempPath("cli_flat.csv").string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("pearson: 0"), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(CliTest, DiagnoseIdMismatch) {
  const auto truth = WriteEpisodes("cli_t7", 3, 16, true);
  const auto other = WriteEpisodes("cli_o7", 3, 17, true);
  const auto labeled = testing::TempPath("cli_l7.jsonl").string();
  ASSERT_EQ(Invoke({"label", other, truth, labeled}).code, kExitOk);
  const CliRun r = Invoke({"diagnose", labeled, truth,
                        testing::TempPath("cli_l7.csv").string()});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("IdMismatch"), std::string::npos) << r.err;
}

TEST(CliTest, DemoGridworldWithTruthLabels) {
  const CliRun r = Invoke({"demo-gridworld",
                        std::string(OTR_SOURCE_DIR) + "/configs/gridworld_reference.conf",
                        "--labeler", "truth"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("success_rate: 1"), std::string::npos) << r.out;
}

TEST(CliTest, DemoGridworldMissingConfig) {
  EXPECT_EQ(Invoke({"demo-gridworld", "/nonexistent.conf"}).code, kExitIo);
}

}  // namespace
}  // namespace otr
