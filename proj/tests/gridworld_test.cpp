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

#include "otr/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "otr/error.hpp"

namespace otr {
namespace {

constexpr Move kAllMoves[] = {Move::kRight, Move::kLeft, Move::kUp, Move::kDown};

Gridworld Grid(int w, int h, Cell start, Cell goal, int horizon) {
  Gridworld env = Gridworld::WithDefaults(w, h, start, goal);
  env.horizon = horizon;
  return env;
}

// Two-state episode: `from`, then the result of `move`.
LabeledTrajectory OneStep(const Gridworld& env, Cell from, Move move) {
  const Cell to = env.Step(from, move);
  LabeledTrajectory ep;
  ep.base.observations.resize(2, 3);
  const auto a = env.Features(from);
  const auto b = env.Features(to);
  for (int k = 0; k < 3; ++k) {
    ep.base.observations(0, k) = a[static_cast<std::size_t>(k)];
    ep.base.observations(1, k) = b[static_cast<std::size_t>(k)];
  }
  Matrix act = Matrix::Zero(1, kNumMoves);
  act(0, static_cast<int>(move)) = 1.0;
  ep.base.actions = act;
  ep.base.terminals = std::vector<std::uint8_t>{from == env.goal, to == env.goal};
  ep.rewards = {to == env.goal ? env.goal_reward : env.step_reward, 0.0};
  return ep;
}

TEST(GridworldTest, StepsStopAtWalls) {
  const Gridworld env = Grid(3, 3, {0, 0}, {2, 2}, 10);
  EXPECT_EQ(env.Step({0, 0}, Move::kLeft), (Cell{0, 0}));
  EXPECT_EQ(env.Step({0, 0}, Move::kDown), (Cell{0, 0}));
  EXPECT_EQ(env.Step({0, 0}, Move::kUp), (Cell{0, 1}));
  EXPECT_EQ(env.Step({2, 1}, Move::kRight), (Cell{2, 1}));
}

TEST(GridworldTest, FeaturesRoundTrip) {
  const Gridworld env = Grid(5, 4, {0, 0}, {4, 3}, 10);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 5; ++x) {
      const auto f = env.Features({x, y});
      EXPECT_EQ(f[2], 1.0);
      EXPECT_EQ(env.DecodeCell(f), (Cell{x, y}));
    }
  }
}

TEST(GridworldTest, InvalidEnvironments) {
  EXPECT_THROW(Grid(0, 3, {0, 0}, {0, 0}, 5).Validate(), Error);
  EXPECT_THROW(Grid(3, 3, {0, 0}, {3, 0}, 5).Validate(), Error);
  EXPECT_THROW(Grid(3, 3, {0, 0}, {2, 2}, 0).Validate(), Error);
}

TEST(GenerateDatasetTest, ExpertFollowsShortestPath) {
  const Gridworld env = Gridworld::WithDefaults(5, 5, {0, 0}, {4, 4});
  const auto data = GenerateDataset(env, 1, 0, 0, 3);
  const Trajectory& e = data.experts.episodes[0];
  EXPECT_EQ(e.length(), 9u);
  EXPECT_EQ(e.episodic_return(), 1.0);
  EXPECT_EQ(e.terminals->back(), 1);
  EXPECT_EQ(e.actions->rows(), 8);
  EXPECT_EQ(data.experts.metadata.at("action_dim"), "4");
}

TEST(GenerateDatasetTest, EpisodesRespectTheHorizon) {
  const Gridworld env = Grid(5, 5, {0, 0}, {4, 4}, 20);
  const auto data = GenerateDataset(env, 2, 10, 30, 11);
  ASSERT_EQ(data.unlabeled.size(), 40u);
  for (std::size_t i = 0; i < data.truth.size(); ++i) {
    const Trajectory& t = data.truth.episodes[i];
    EXPECT_LE(t.length(), 21u);
    EXPECT_FALSE(data.unlabeled.episodes[i].rewards.has_value());
    const double ret = t.episodic_return();
    EXPECT_TRUE(ret == 0.0 || ret == 1.0);
    EXPECT_EQ(ret == 1.0, t.terminals->back() == 1);
  }
  EXPECT_EQ(data.truth.episodes[0].id, "medium-0");
  EXPECT_EQ(data.truth.episodes[10].id, "random-0");
}

TEST(GenerateDatasetTest, SeedDeterminism) {
  const Gridworld env = Grid(6, 6, {0, 0}, {5, 5}, 30);
  const auto a = GenerateDataset(env, 1, 5, 5, 99);
  const auto b = GenerateDataset(env, 1, 5, 5, 99);
  const auto c = GenerateDataset(env, 1, 5, 5, 100);
  EXPECT_EQ(a.truth.episodes, b.truth.episodes);
  EXPECT_NE(a.truth.episodes, c.truth.episodes);
}

TEST(GenerateDatasetTest, NeedsAnExpert) {
  EXPECT_THROW(GenerateDataset(Gridworld{}, 0, 1, 1, 0), Error);
}

TEST(FitOfflineQTest, ZeroRewardsGiveZeroValues) {
  const Gridworld env = Grid(4, 4, {0, 0}, {3, 3}, 30);
  const auto data = GenerateDataset(env, 1, 5, 5, 5);
  auto training = WithStoredRewards(data.truth.episodes);
  for (auto& ep : training) std::fill(ep.rewards.begin(), ep.rewards.end(), 0.0);
  const TabularQ q = FitOfflineQ(training, env, 100);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (Move m : kAllMoves) EXPECT_EQ(q.value({x, y}, m), 0.0);
    }
  }
}

TEST(FitOfflineQTest, FullCoverageMatchesValueIteration) {
  Gridworld env = Grid(3, 3, {0, 0}, {2, 2}, 20);
  env.step_reward = -0.1;
  std::vector<LabeledTrajectory> data;
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      if (Cell{x, y} == env.goal) continue;
      for (Move m : kAllMoves) data.push_back(OneStep(env, {x, y}, m));
    }
  }
  const TabularQ q = FitOfflineQ(data, env, 10000);

  // Independent value iteration over the full model.
  std::vector<double> v(9, 0.0);
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<double> nv(9, 0.0);
    for (int s = 0; s < 9; ++s) {
      const Cell c{s % 3, s / 3};
      if (c == env.goal) continue;
      double best = -1e300;
      for (Move m : kAllMoves) {
        const Cell n = env.Step(c, m);
        const double r = n == env.goal ? env.goal_reward : env.step_reward;
        best = std::max(best, r + (n == env.goal ? 0.0 : env.discount * v[n.y * 3 + n.x]));
      }
      nv[static_cast<std::size_t>(s)] = best;
    }
    v = nv;
  }
  for (int s = 0; s < 9; ++s) {
    const Cell c{s % 3, s / 3};
    if (c == env.goal) continue;
    for (Move m : kAllMoves) {
      const Cell n = env.Step(c, m);
      const double expected =
          (n == env.goal ? env.goal_reward : env.step_reward) +
          (n == env.goal ? 0.0 : env.discount * v[n.y * 3 + n.x]);
      EXPECT_NEAR(q.value(c, m), expected, 1e-6);
    }
  }
  EXPECT_EQ(EvaluatePolicy(q, env, 1), 1.0);
}

TEST(FitOfflineQTest, DuplicateTransitionsAverage) {
  const Gridworld env = Grid(3, 1, {0, 0}, {2, 0}, 5);
  auto a = OneStep(env, {0, 0}, Move::kRight);
  auto b = a;
  a.rewards[0] = 1.0;
  b.rewards[0] = 3.0;
  const TabularQ q = FitOfflineQ(std::vector<LabeledTrajectory>{a, b}, env, 50);
  EXPECT_NEAR(q.value({0, 0}, Move::kRight), 2.0 + env.discount * 0.0, 1e-12);
}

TEST(EvaluatePolicyTest, CorridorWithoutGoalDataFails) {
  const Gridworld env = Grid(4, 1, {0, 0}, {3, 0}, 10);
  // Data only ever moves between the first two cells.
  const std::vector<LabeledTrajectory> data{OneStep(env, {0, 0}, Move::kRight),
                                            OneStep(env, {1, 0}, Move::kLeft)};
  const TabularQ q = FitOfflineQ(data, env, 100);
  EXPECT_EQ(EvaluatePolicy(q, env, 1), 0.0);
}

TEST(EvaluatePolicyTest, AdjacentStartSucceeds) {
  const Gridworld env = Grid(3, 1, {1, 0}, {2, 0}, 10);
  const std::vector<LabeledTrajectory> data{OneStep(env, {1, 0}, Move::kLeft),
                                            OneStep(env, {1, 0}, Move::kRight)};
  const TabularQ q = FitOfflineQ(data, env, 100);
  EXPECT_EQ(q.Greedy({1, 0}), Move::kRight);
  EXPECT_EQ(EvaluatePolicy(q, env, 1), 1.0);
}

TEST(FitOfflineQTest, RejectsUnusableData) {
  const Gridworld env = Grid(3, 1, {0, 0}, {2, 0}, 5);
  EXPECT_THROW(FitOfflineQ({}, env, 10), Error);
  LabeledTrajectory ep = OneStep(env, {0, 0}, Move::kRight);
  ep.base.actions.reset();
  EXPECT_THROW(FitOfflineQ(std::vector<LabeledTrajectory>{ep}, env, 10), Error);
}

TEST(DemoTest, SingleExpertAloneReachesTheGoal) {
  const Gridworld env = Gridworld::WithDefaults(6, 6, {0, 0}, {5, 5});
  const auto data = GenerateDataset(env, 1, 0, 0, 1);
  const TabularQ q = FitOfflineQ(WithStoredRewards(data.experts.episodes), env, 1000);
  EXPECT_EQ(EvaluatePolicy(q, env, 1), 1.0);
}

TEST(DemoConfigTest, ParsesKeyValueLines) {
  std::istringstream in(
      "# comment\n"
      "width = 5\nheight = 4\ngoal_x = 4\ngoal_y = 3\n"
      "n_medium = 3\nn_random = 2\nseed = 9\n"
      "squash_mode = antmaze\nalpha = 1\nepisode_length = 40\n"
      "post_scale = shift:-2\nfeatures = state_action\n");
  const DemoConfig cfg = ParseDemoConfig(in, "mem");
  EXPECT_EQ(cfg.env.width, 5);
  EXPECT_EQ(cfg.env.horizon, 36);
  EXPECT_EQ(cfg.env.goal, (Cell{4, 3}));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.label.squash_scale, ScaleMode::kAntmaze);
  EXPECT_EQ(cfg.label.features, FeatureMode::kStateAction);
  ASSERT_TRUE(std::holds_alternative<Shift>(cfg.label.post_scale));
  EXPECT_EQ(std::get<Shift>(cfg.label.post_scale).delta, -2.0);
}

TEST(DemoConfigTest, RejectsUnknownKeysAndBadValues) {
  for (const char* text : {"colour = red\n", "width = wide\n", "width 5\n",
                           "post_scale = sideways\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ParseDemoConfig(in, "mem"), Error) << text;
  }
}

TEST(DemoConfigTest, ReferenceConfigLoads) {
  const DemoConfig cfg =
      ReadDemoConfig(std::string(OTR_SOURCE_DIR) + "/configs/gridworld_reference.conf");
  EXPECT_EQ(cfg.env.width, 8);
  EXPECT_EQ(cfg.n_expert, 1u);
}

TEST(DemoTest, TruthLabelsSolveTheReferenceTask) {
  DemoConfig cfg =
      ReadDemoConfig(std::string(OTR_SOURCE_DIR) + "/configs/gridworld_reference.conf");
  const DemoResult r = RunGridworldDemo(cfg, DemoLabeler::kTruth);
  EXPECT_EQ(r.success_rate, 1.0);
  ASSERT_TRUE(r.pearson.has_value());
  EXPECT_NEAR(*r.pearson, 1.0, 1e-12);
  EXPECT_EQ(r.training.size(), cfg.n_expert + cfg.n_medium + cfg.n_random);
}

}  // namespace
}  // namespace otr
