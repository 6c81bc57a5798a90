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

#ifndef OTR_REWARD_LABELER_HPP_
#define OTR_REWARD_LABELER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "otr/cost_functions.hpp"
#include "otr/measures.hpp"
#include "otr/ot_solver.hpp"
#include "otr/trajectory.hpp"

namespace otr {

// Exponent applied by the squashing function s(r) = alpha * exp(E * r):
//   kLocomotion: E = beta * T / |A|
//   kAntmaze:    E = T
//   kPlain:      E = beta
// where T is LabelConfig::episode_length.
enum class ScaleMode { kLocomotion, kAntmaze, kPlain };

struct NoPostScale {};
// Multiplies every reward by target / (max_return - min_return).
struct ReturnRange {
  double target = 1000.0;
};
// Adds delta to every reward.
struct Shift {
  double delta = 0.0;
};
using PostScale = std::variant<NoPostScale, ReturnRange, Shift>;

struct LabelConfig {
  CostKind cost = CostKind::kCosine;
  FeatureMode features = FeatureMode::kState;
  SinkhornParams sinkhorn;
  double squash_alpha = 5.0;
  double squash_beta = 5.0;
  ScaleMode squash_scale = ScaleMode::kLocomotion;
  // Fixed (padded) episode length used in the squashing exponent, not the
  // native length of each episode.
  std::size_t episode_length = 1000;
  std::size_t action_dim = 0;  // |A|; required by kLocomotion.
  PostScale post_scale = NoPostScale{};

  // alpha = beta = 5, E = 5 T / |A|, returns rescaled to a 1000 range.
  static LabelConfig Locomotion(std::size_t action_dim);
  // alpha = 5, E = T, rewards shifted by -2.
  static LabelConfig Antmaze();
  // alpha = beta = 1, E = 1, no post-scaling.
  static LabelConfig Plain();
};

void ValidateLabelConfig(const LabelConfig& cfg);

ScaleMode ParseScaleMode(std::string_view name);
std::string_view ScaleModeName(ScaleMode mode);

// How per-step rewards are derived from the cost matrix.
enum class PlanKind {
  kOptimal,  // Sinkhorn coupling
  kUniform,  // every pair receives 1 / (T T')
};

struct LabeledTrajectory {
  Trajectory base;
  // -sum_t' C[t][t'] * plan[t][t']; always <= 0.
  std::vector<double> raw_ot_rewards;
  // Squashed rewards, before dataset-level post-scaling.
  std::vector<double> ot_rewards;
  // Final rewards written to disk (after post-scaling).
  std::vector<double> rewards;
  std::optional<std::size_t> source_expert;
  double transport_cost = 0.0;
  // False when the selected expert's Sinkhorn solve hit its iteration cap.
  bool converged = true;

  double raw_return() const;
  double ot_return() const;
  double final_return() const;
};

struct StepRewards {
  std::vector<double> rewards;
  Coupling coupling;
};

// Per-step rewards of `unlabeled` aligned against one expert episode.
StepRewards OtRewardsSingle(const Trajectory& unlabeled,
                            const Trajectory& expert, const LabelConfig& cfg);

// Same reward formula with the uniform coupling 1 / (T T') in place of the
// optimal one.
std::vector<double> UniformPlanRewards(const Trajectory& unlabeled,
                                       const Trajectory& expert,
                                       const LabelConfig& cfg);

// Aligns against every expert and keeps the reward vector whose (raw) episodic
// return is largest; ties go to the lowest expert index. Fills base,
// raw_ot_rewards, source_expert and transport_cost only.
LabeledTrajectory AggregateOverExperts(const Trajectory& unlabeled,
                                       std::span<const Trajectory> experts,
                                       const LabelConfig& cfg,
                                       PlanKind plan = PlanKind::kOptimal);

double SquashExponent(const LabelConfig& cfg);

std::vector<double> Squash(std::span<const double> raw,
                           const LabelConfig& cfg);

// Fills `rewards` from `ot_rewards` according to `mode`. ReturnRange
// statistics come from the squashed returns of this dataset.
std::vector<LabeledTrajectory> PostScaleRewards(
    std::vector<LabeledTrajectory> dataset, const PostScale& mode);

struct LabelOptions {
  std::size_t parallelism = 1;
  PlanKind plan = PlanKind::kOptimal;
};

// Labels every episode of `unlabeled` (aggregate, squash), then applies the
// configured post-scaling over the whole batch. Output order follows input
// order and does not depend on options.parallelism.
std::vector<LabeledTrajectory> LabelDataset(std::span<const Trajectory> unlabeled,
                                            std::span<const Trajectory> experts,
                                            const LabelConfig& cfg,
                                            const LabelOptions& options = {});

// Baseline: every unlabeled step receives r_min, experts keep their stored
// rewards. Experts come first in the result.
std::vector<LabeledTrajectory> UdsRewards(std::span<const Trajectory> unlabeled,
                                          std::span<const Trajectory> experts,
                                          double r_min);

}  // namespace otr

#endif  // OTR_REWARD_LABELER_HPP_
