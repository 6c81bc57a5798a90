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

#include "otr/reward_labeler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otr/error.hpp"
#include "otr/parallel.hpp"

namespace otr {
namespace {

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

LabelConfig LabelConfig::Locomotion(std::size_t action_dim) {
  LabelConfig cfg;
  cfg.squash_alpha = 5.0;
  cfg.squash_beta = 5.0;
  cfg.squash_scale = ScaleMode::kLocomotion;
  cfg.episode_length = 1000;
  cfg.action_dim = action_dim;
  cfg.post_scale = ReturnRange{1000.0};
  return cfg;
}

LabelConfig LabelConfig::Antmaze() {
  LabelConfig cfg;
  cfg.squash_alpha = 5.0;
  cfg.squash_beta = 5.0;  // unused by the antmaze exponent
  cfg.squash_scale = ScaleMode::kAntmaze;
  cfg.episode_length = 1000;
  cfg.post_scale = Shift{-2.0};
  return cfg;
}

LabelConfig LabelConfig::Plain() {
  LabelConfig cfg;
  cfg.squash_alpha = 1.0;
  cfg.squash_beta = 1.0;
  cfg.squash_scale = ScaleMode::kPlain;
  cfg.post_scale = NoPostScale{};
  return cfg;
}

void ValidateLabelConfig(const LabelConfig& cfg) {
  ValidateSinkhornParams(cfg.sinkhorn);
  if (!(cfg.squash_alpha > 0.0) || !std::isfinite(cfg.squash_alpha)) {
    throw Error(ErrorKind::kInvalidConfig, "squash alpha must be positive");
  }
  if (!std::isfinite(cfg.squash_beta)) {
    throw Error(ErrorKind::kInvalidConfig, "squash beta must be finite");
  }
  if (cfg.episode_length < 1) {
    throw Error(ErrorKind::kInvalidConfig, "episode length must be >= 1");
  }
  if (cfg.squash_scale == ScaleMode::kLocomotion && cfg.action_dim < 1) {
    throw Error(ErrorKind::kInvalidConfig,
                "locomotion squashing needs the action dimension |A| >= 1");
  }
  if (const auto* rr = std::get_if<ReturnRange>(&cfg.post_scale)) {
    if (!(rr->target > 0.0)) {
      throw Error(ErrorKind::kInvalidConfig,
                  "return-range target must be positive");
    }
  }
}

ScaleMode ParseScaleMode(std::string_view name) {
  if (name == "locomotion") return ScaleMode::kLocomotion;
  if (name == "antmaze") return ScaleMode::kAntmaze;
  if (name == "plain") return ScaleMode::kPlain;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown squash mode '" + std::string(name) + "'");
}

std::string_view ScaleModeName(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::kLocomotion: return "locomotion";
    case ScaleMode::kAntmaze: return "antmaze";
    case ScaleMode::kPlain: return "plain";
  }
  return "plain";
}

double LabeledTrajectory::raw_return() const { return Sum(raw_ot_rewards); }
double LabeledTrajectory::ot_return() const { return Sum(ot_rewards); }
double LabeledTrajectory::final_return() const { return Sum(rewards); }

StepRewards OtRewardsSingle(const Trajectory& unlabeled,
                            const Trajectory& expert, const LabelConfig& cfg) {
  const WeightedMeasure policy = TrajectoryToMeasure(unlabeled, cfg.features);
  const WeightedMeasure demo = TrajectoryToMeasure(expert, cfg.features);
  const CostMatrix cost = PairwiseCosts(policy, demo, cfg.cost);

  StepRewards out;
  out.coupling = Sinkhorn(cost, policy.weights, demo.weights, cfg.sinkhorn);
  out.rewards.resize(policy.size());
  for (Eigen::Index t = 0; t < cost.rows(); ++t) {
    double row = 0.0;
    for (Eigen::Index u = 0; u < cost.cols(); ++u) {
      row += cost(t, u) * out.coupling.plan(t, u);
    }
    out.rewards[static_cast<std::size_t>(t)] = -row;
  }
  return out;
}

std::vector<double> UniformPlanRewards(const Trajectory& unlabeled,
                                       const Trajectory& expert,
                                       const LabelConfig& cfg) {
  const WeightedMeasure policy = TrajectoryToMeasure(unlabeled, cfg.features);
  const WeightedMeasure demo = TrajectoryToMeasure(expert, cfg.features);
  const CostMatrix cost = PairwiseCosts(policy, demo, cfg.cost);
  const double mass = 1.0 / (static_cast<double>(cost.rows()) *
                             static_cast<double>(cost.cols()));
  std::vector<double> rewards(policy.size());
  for (Eigen::Index t = 0; t < cost.rows(); ++t) {
    double row = 0.0;
    for (Eigen::Index u = 0; u < cost.cols(); ++u) row += cost(t, u) * mass;
    rewards[static_cast<std::size_t>(t)] = -row;
  }
  return rewards;
}

LabeledTrajectory AggregateOverExperts(const Trajectory& unlabeled,
                                       std::span<const Trajectory> experts,
                                       const LabelConfig& cfg,
                                       PlanKind plan) {
  if (experts.empty()) {
    throw Error(ErrorKind::kEmptyExpertSet, "no expert demonstrations given");
  }
  LabeledTrajectory best;
  best.base = unlabeled;
  double best_return = 0.0;
  for (std::size_t k = 0; k < experts.size(); ++k) {
    std::vector<double> rewards;
    double cost = 0.0;
    bool converged = true;
    if (plan == PlanKind::kOptimal) {
      StepRewards step = OtRewardsSingle(unlabeled, experts[k], cfg);
      rewards = std::move(step.rewards);
      cost = step.coupling.transport_cost;
      converged = step.coupling.converged;
    } else {
      rewards = UniformPlanRewards(unlabeled, experts[k], cfg);
      cost = -Sum(rewards);
    }
    const double ret = Sum(rewards);
    if (k == 0 || ret > best_return) {
      best_return = ret;
      best.raw_ot_rewards = std::move(rewards);
      best.source_expert = k;
      best.transport_cost = cost;
      best.converged = converged;
    }
  }
  return best;
}

double SquashExponent(const LabelConfig& cfg) {
  const auto horizon = static_cast<double>(cfg.episode_length);
  switch (cfg.squash_scale) {
    case ScaleMode::kLocomotion:
      return cfg.squash_beta * horizon / static_cast<double>(cfg.action_dim);
    case ScaleMode::kAntmaze:
      return horizon;
    case ScaleMode::kPlain:
      return cfg.squash_beta;
  }
  return cfg.squash_beta;
}

std::vector<double> Squash(std::span<const double> raw,
                           const LabelConfig& cfg) {
  ValidateLabelConfig(cfg);
  const double exponent = SquashExponent(cfg);
  std::vector<double> out(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (!std::isfinite(raw[t])) {
      throw Error(ErrorKind::kNonFiniteInput,
                  "raw reward at step " + std::to_string(t) + " is not finite");
    }
    out[t] = cfg.squash_alpha * std::exp(exponent * raw[t]);
  }
  return out;
}

std::vector<LabeledTrajectory> PostScaleRewards(
    std::vector<LabeledTrajectory> dataset, const PostScale& mode) {
  if (const auto* range = std::get_if<ReturnRange>(&mode)) {
    if (dataset.empty()) return dataset;
    double lo = dataset.front().ot_return();
    double hi = lo;
    for (const auto& ep : dataset) {
      const double r = ep.ot_return();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (!(hi > lo)) {
      throw Error(ErrorKind::kDegenerateReturnRange,
                  "all episodic returns equal " + std::to_string(lo));
    }
    const double factor = range->target / (hi - lo);
    for (auto& ep : dataset) {
      ep.rewards.resize(ep.ot_rewards.size());
      for (std::size_t t = 0; t < ep.ot_rewards.size(); ++t) {
        ep.rewards[t] = ep.ot_rewards[t] * factor;
      }
    }
  } else if (const auto* shift = std::get_if<Shift>(&mode)) {
    for (auto& ep : dataset) {
      ep.rewards.resize(ep.ot_rewards.size());
      for (std::size_t t = 0; t < ep.ot_rewards.size(); ++t) {
        ep.rewards[t] = ep.ot_rewards[t] + shift->delta;
      }
    }
  } else {
    for (auto& ep : dataset) ep.rewards = ep.ot_rewards;
  }
  return dataset;
}

std::vector<LabeledTrajectory> LabelDataset(std::span<const Trajectory> unlabeled,
                                            std::span<const Trajectory> experts,
                                            const LabelConfig& cfg,
                                            const LabelOptions& options) {
  ValidateLabelConfig(cfg);
  if (unlabeled.empty()) return {};
  std::vector<LabeledTrajectory> labeled(unlabeled.size());
  ParallelFor(unlabeled.size(), options.parallelism, [&](std::size_t i) {
    LabeledTrajectory ep =
        AggregateOverExperts(unlabeled[i], experts, cfg, options.plan);
    ep.ot_rewards = Squash(ep.raw_ot_rewards, cfg);
    labeled[i] = std::move(ep);
  });
  return PostScaleRewards(std::move(labeled), cfg.post_scale);
}

std::vector<LabeledTrajectory> UdsRewards(std::span<const Trajectory> unlabeled,
                                          std::span<const Trajectory> experts,
                                          double r_min) {
  std::vector<LabeledTrajectory> out;
  out.reserve(experts.size() + unlabeled.size());
  for (const Trajectory& expert : experts) {
    if (!expert.rewards) {
      throw Error(ErrorKind::kExpertRewardsMissing,
                  "expert episode '" + expert.id + "' carries no rewards");
    }
    LabeledTrajectory ep;
    ep.base = expert;
    ep.rewards = *expert.rewards;
    out.push_back(std::move(ep));
  }
  for (const Trajectory& traj : unlabeled) {
    LabeledTrajectory ep;
    ep.base = traj;
    ep.rewards.assign(traj.length(), r_min);
    out.push_back(std::move(ep));
  }
  return out;
}

}  // namespace otr
