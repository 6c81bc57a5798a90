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

#ifndef OTR_GRIDWORLD_HPP_
#define OTR_GRIDWORLD_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otr/dataset_io.hpp"
#include "otr/reward_labeler.hpp"

namespace otr {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Fixed order; greedy ties resolve to the earliest move.
enum class Move : int { kRight = 0, kLeft = 1, kUp = 2, kDown = 3 };
inline constexpr int kNumMoves = 4;

// Deterministic grid MDP. Moves into a wall leave the agent in place; the
// goal is absorbing and ends the episode.
struct Gridworld {
  int width = 8;
  int height = 8;
  Cell start{0, 0};
  Cell goal{7, 7};
  double step_reward = 0.0;
  double goal_reward = 1.0;
  int horizon = 64;
  double discount = 0.99;

  // horizon = 4 * (width + height), discount 0.99.
  static Gridworld WithDefaults(int width, int height, Cell start, Cell goal);

  void Validate() const;
  bool Contains(Cell c) const;
  Cell Step(Cell from, Move move) const;
  // Move along a shortest path to the goal, horizontal moves first.
  Move ShortestPathMove(Cell from) const;
  int CellIndex(Cell c) const { return c.y * width + c.x; }
  int NumCells() const { return width * height; }

  // (x / (width - 1), y / (height - 1), 1). The trailing constant keeps the
  // vector away from zero norm under the cosine cost.
  std::array<double, 3> Features(Cell c) const;
  // Inverse of Features, rounding to the nearest cell.
  Cell DecodeCell(std::span<const double> features) const;
};

inline constexpr double kMediumRandomActionProb = 0.3;

struct GeneratedData {
  EpisodicDataset experts;    // with ground-truth rewards
  EpisodicDataset unlabeled;  // rewards stripped
  EpisodicDataset truth;      // unlabeled episodes with their true rewards
};

// Experts follow the shortest path, medium episodes take a uniformly random
// move with probability 0.3, random episodes always do. Actions are stored as
// one-hot vectors (T - 1 rows); terminals flag the goal state.
GeneratedData GenerateDataset(const Gridworld& env, std::size_t n_expert,
                              std::size_t n_medium, std::size_t n_random,
                              std::uint64_t seed);

class TabularQ {
 public:
  explicit TabularQ(const Gridworld& env);

  double value(Cell c, Move m) const { return values_[Slot(c, m)]; }
  bool visited(Cell c, Move m) const { return visited_[Slot(c, m)] != 0; }
  void set(Cell c, Move m, double v);

  // Highest-valued move among those seen in the data at `c` (all moves when
  // none were seen); ties go to the earliest move.
  Move Greedy(Cell c) const;

  std::size_t trained_sweeps = 0;

 private:
  std::size_t Slot(Cell c, Move m) const {
    return static_cast<std::size_t>(c.y * width_ + c.x) * kNumMoves +
           static_cast<std::size_t>(m);
  }
  int width_;
  std::vector<double> values_;
  std::vector<std::uint8_t> visited_;
};

inline constexpr double kQConvergenceTolerance = 1e-8;

// Synchronous Q-iteration restricted to dataset transitions. Each (cell, move)
// target is the mean over its transitions of r + gamma * V(next), where V is
// the max over moves seen at `next` (0 when none) and terminal transitions
// bootstrap to 0. Uses each episode's `rewards` field.
TabularQ FitOfflineQ(std::span<const LabeledTrajectory> dataset,
                     const Gridworld& env, std::size_t sweeps);

// Fraction of greedy rollouts from the start that reach the goal within the
// horizon.
double EvaluatePolicy(const TabularQ& q, const Gridworld& env,
                      std::size_t episodes);

// Wraps episodes so their stored rewards become the training rewards.
std::vector<LabeledTrajectory> WithStoredRewards(
    std::span<const Trajectory> episodes);

enum class DemoLabeler { kOtr, kUds, kUniform, kTruth };
DemoLabeler ParseDemoLabeler(std::string_view name);
std::string_view DemoLabelerName(DemoLabeler labeler);

// Everything an end-to-end gridworld run needs; read from key = value lines.
struct DemoConfig {
  Gridworld env;
  std::size_t n_expert = 1;
  std::size_t n_medium = 20;
  std::size_t n_random = 80;
  std::uint64_t seed = 0;
  LabelConfig label;
  std::size_t sweeps = 5000;
  std::size_t eval_episodes = 1;
  double uds_min_reward = 0.0;
  std::size_t parallelism = 1;
};

DemoConfig ParseDemoConfig(std::istream& in, const std::string& source);
DemoConfig ReadDemoConfig(const std::string& path);

struct DemoResult {
  GeneratedData data;
  // Training set: unlabeled episodes followed by the expert episodes.
  std::vector<LabeledTrajectory> training;
  double success_rate = 0.0;
  // Over the unlabeled episodes only, labels vs ground truth.
  std::vector<double> label_returns;
  std::vector<double> truth_returns;
  std::optional<double> pearson;
  std::optional<double> spearman;
  double label_seconds = 0.0;
  double fit_seconds = 0.0;
};

DemoResult RunGridworldDemo(const DemoConfig& config, DemoLabeler labeler);

}  // namespace otr

#endif  // OTR_GRIDWORLD_HPP_
