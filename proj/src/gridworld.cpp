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
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "otr/error.hpp"
#include "otr/stats.hpp"

namespace otr {
namespace {

constexpr std::array<Move, kNumMoves> kMoves = {Move::kRight, Move::kLeft,
                                                Move::kUp, Move::kDown};

double Scale(int v, int extent) {
  return extent > 1 ? static_cast<double>(v) / static_cast<double>(extent - 1)
                    : 0.0;
}

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// libraries, unlike std::uniform_real_distribution.
double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Move RandomMove(std::mt19937_64& rng) {
  return kMoves[static_cast<std::size_t>(rng() % kNumMoves)];
}

enum class Behavior { kExpert, kMedium, kRandom };

Trajectory Rollout(const Gridworld& env, Behavior behavior,
                   std::mt19937_64& rng, std::string id) {
  std::vector<Cell> cells{env.start};
  std::vector<Move> moves;
  Cell cur = env.start;
  for (int step = 0; step < env.horizon && !(cur == env.goal); ++step) {
    Move m = env.ShortestPathMove(cur);
    if (behavior == Behavior::kRandom) {
      m = RandomMove(rng);
    } else if (behavior == Behavior::kMedium &&
               Unit(rng) < kMediumRandomActionProb) {
      m = RandomMove(rng);
    }
    cur = env.Step(cur, m);
    moves.push_back(m);
    cells.push_back(cur);
  }

  const auto t = static_cast<Eigen::Index>(cells.size());
  Trajectory traj;
  traj.id = std::move(id);
  traj.observations.resize(t, 3);
  std::vector<double> rewards(cells.size(), 0.0);
  std::vector<std::uint8_t> terminals(cells.size(), 0);
  for (Eigen::Index i = 0; i < t; ++i) {
    const auto f = env.Features(cells[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < 3; ++k) {
      traj.observations(i, k) = f[static_cast<std::size_t>(k)];
    }
    terminals[static_cast<std::size_t>(i)] =
        cells[static_cast<std::size_t>(i)] == env.goal ? 1 : 0;
  }
  Matrix actions = Matrix::Zero(t - 1, kNumMoves);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    actions(static_cast<Eigen::Index>(i), static_cast<int>(moves[i])) = 1.0;
    rewards[i] = cells[i + 1] == env.goal ? env.goal_reward : env.step_reward;
  }
  traj.actions = std::move(actions);
  traj.rewards = std::move(rewards);
  traj.terminals = std::move(terminals);
  return traj;
}

EpisodicDataset MakeDataset(std::vector<Trajectory> episodes,
                            const std::string& name) {
  EpisodicDataset ds;
  ds.metadata["name"] = name;
  ds.metadata["episodes"] = std::to_string(episodes.size());
  ds.metadata["observation_dim"] = "3";
  ds.metadata["action_dim"] = std::to_string(kNumMoves);
  ds.episodes = std::move(episodes);
  return ds;
}

Move DecodeMove(const Matrix& actions, Eigen::Index row) {
  Eigen::Index best = 0;
  actions.row(row).maxCoeff(&best);
  return static_cast<Move>(best);
}

}  // namespace

Gridworld Gridworld::WithDefaults(int width, int height, Cell start,
                                  Cell goal) {
  Gridworld env;
  env.width = width;
  env.height = height;
  env.start = start;
  env.goal = goal;
  env.horizon = 4 * (width + height);
  env.discount = 0.99;
  return env;
}

void Gridworld::Validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidConfig, "grid must be at least 1x1");
  }
  if (!Contains(start) || !Contains(goal)) {
    throw Error(ErrorKind::kInvalidConfig, "start and goal must lie on the grid");
  }
  if (start == goal) {
    throw Error(ErrorKind::kInvalidConfig, "start and goal must differ");
  }
  if (horizon < std::abs(goal.x - start.x) + std::abs(goal.y - start.y)) {
    throw Error(ErrorKind::kInvalidConfig,
                "horizon is shorter than the start-goal distance");
  }
  if (!(discount > 0.0 && discount < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "discount must lie in (0, 1)");
  }
}

bool Gridworld::Contains(Cell c) const {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
}

Cell Gridworld::Step(Cell from, Move move) const {
  Cell to = from;
  switch (move) {
    case Move::kRight: ++to.x; break;
    case Move::kLeft: --to.x; break;
    case Move::kUp: ++to.y; break;
    case Move::kDown: --to.y; break;
  }
  return Contains(to) ? to : from;
}

Move Gridworld::ShortestPathMove(Cell from) const {
  if (goal.x > from.x) return Move::kRight;
  if (goal.x < from.x) return Move::kLeft;
  if (goal.y > from.y) return Move::kUp;
  return Move::kDown;
}

std::array<double, 3> Gridworld::Features(Cell c) const {
  return {Scale(c.x, width), Scale(c.y, height), 1.0};
}

Cell Gridworld::DecodeCell(std::span<const double> features) const {
  auto coord = [](double v, int extent) {
    if (extent <= 1) return 0;
    return std::clamp(static_cast<int>(std::lround(v * (extent - 1))), 0,
                      extent - 1);
  };
  return {coord(features[0], width), coord(features[1], height)};
}

GeneratedData GenerateDataset(const Gridworld& env, std::size_t n_expert,
                              std::size_t n_medium, std::size_t n_random,
                              std::uint64_t seed) {
  env.Validate();
  if (n_expert < 1) {
    throw Error(ErrorKind::kInvalidCounts, "need at least one expert episode");
  }
  std::mt19937_64 rng(seed);
  std::vector<Trajectory> experts;
  for (std::size_t i = 0; i < n_expert; ++i) {
    experts.push_back(
        Rollout(env, Behavior::kExpert, rng, "expert-" + std::to_string(i)));
  }
  std::vector<Trajectory> truth;
  for (std::size_t i = 0; i < n_medium; ++i) {
    truth.push_back(
        Rollout(env, Behavior::kMedium, rng, "medium-" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < n_random; ++i) {
    truth.push_back(
        Rollout(env, Behavior::kRandom, rng, "random-" + std::to_string(i)));
  }
  std::vector<Trajectory> unlabeled = truth;
  for (Trajectory& t : unlabeled) t.rewards.reset();

  GeneratedData out;
  out.experts = MakeDataset(std::move(experts), "gridworld-experts");
  out.unlabeled = MakeDataset(std::move(unlabeled), "gridworld-unlabeled");
  out.truth = MakeDataset(std::move(truth), "gridworld-truth");
  return out;
}

TabularQ::TabularQ(const Gridworld& env)
    : width_(env.width),
      values_(static_cast<std::size_t>(env.NumCells()) * kNumMoves, 0.0),
      visited_(static_cast<std::size_t>(env.NumCells()) * kNumMoves, 0) {}

void TabularQ::set(Cell c, Move m, double v) {
  values_[Slot(c, m)] = v;
  visited_[Slot(c, m)] = 1;
}

Move TabularQ::Greedy(Cell c) const {
  bool any_seen = false;
  for (Move m : kMoves) any_seen = any_seen || visited(c, m);
  std::optional<Move> best;
  for (Move m : kMoves) {
    if (any_seen && !visited(c, m)) continue;
    if (!best || value(c, m) > value(c, *best)) best = m;
  }
  return *best;
}

TabularQ FitOfflineQ(std::span<const LabeledTrajectory> dataset,
                     const Gridworld& env, std::size_t sweeps) {
  env.Validate();
  struct Transition {
    double reward;
    Cell next;
    bool done;
  };
  // Keyed by slot so iteration order is fixed.
  std::map<std::pair<int, int>, std::vector<Transition>> by_pair;
  for (const LabeledTrajectory& ep : dataset) {
    const Trajectory& base = ep.base;
    if (!base.actions) {
      throw Error(ErrorKind::kMissingActions,
                  "episode '" + base.id + "' has no actions to learn from");
    }
    if (ep.rewards.size() != base.length()) {
      throw Error(ErrorKind::kRewardsMissing,
                  "episode '" + base.id + "' has no training rewards");
    }
    const Eigen::Index steps =
        std::min<Eigen::Index>(base.actions->rows(), base.observations.rows() - 1);
    for (Eigen::Index t = 0; t < steps; ++t) {
      const Matrix& obs = base.observations;
      const Cell from = env.DecodeCell({obs.data() + t * obs.cols(),
                                        static_cast<std::size_t>(obs.cols())});
      const Cell next = env.DecodeCell({obs.data() + (t + 1) * obs.cols(),
                                        static_cast<std::size_t>(obs.cols())});
      const bool done = base.terminals
                            ? (*base.terminals)[static_cast<std::size_t>(t + 1)] != 0
                            : next == env.goal;
      const Move move = DecodeMove(*base.actions, t);
      by_pair[{env.CellIndex(from), static_cast<int>(move)}].push_back(
          {ep.rewards[static_cast<std::size_t>(t)], next, done});
    }
  }
  if (by_pair.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no transitions to fit");
  }

  TabularQ q(env);
  auto cell_of = [&](int index) { return Cell{index % env.width, index / env.width}; };
  for (const auto& [key, _] : by_pair) {
    q.set(cell_of(key.first), static_cast<Move>(key.second), 0.0);
  }
  auto state_value = [&](const TabularQ& table, Cell c) {
    double best = 0.0;
    bool any = false;
    for (Move m : kMoves) {
      if (!table.visited(c, m)) continue;
      best = any ? std::max(best, table.value(c, m)) : table.value(c, m);
      any = true;
    }
    return best;
  };

  std::size_t sweep = 0;
  while (sweep < sweeps) {
    TabularQ next = q;
    double delta = 0.0;
    for (const auto& [key, transitions] : by_pair) {
      double target = 0.0;
      for (const Transition& tr : transitions) {
        target += tr.reward +
                  (tr.done ? 0.0 : env.discount * state_value(q, tr.next));
      }
      target /= static_cast<double>(transitions.size());
      const Cell c = cell_of(key.first);
      const auto m = static_cast<Move>(key.second);
      delta = std::max(delta, std::abs(target - q.value(c, m)));
      next.set(c, m, target);
    }
    q = std::move(next);
    ++sweep;
    if (delta < kQConvergenceTolerance) break;
  }
  q.trained_sweeps = sweep;
  return q;
}

double EvaluatePolicy(const TabularQ& q, const Gridworld& env,
                      std::size_t episodes) {
  env.Validate();
  if (episodes < 1) episodes = 1;
  std::size_t successes = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    Cell cur = env.start;
    for (int step = 0; step < env.horizon && !(cur == env.goal); ++step) {
      cur = env.Step(cur, q.Greedy(cur));
    }
    if (cur == env.goal) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(episodes);
}

std::vector<LabeledTrajectory> WithStoredRewards(
    std::span<const Trajectory> episodes) {
  std::vector<LabeledTrajectory> out;
  out.reserve(episodes.size());
  for (const Trajectory& traj : episodes) {
    if (!traj.rewards) {
      throw Error(ErrorKind::kRewardsMissing,
                  "episode '" + traj.id + "' carries no rewards");
    }
    LabeledTrajectory ep;
    ep.base = traj;
    ep.rewards = *traj.rewards;
    out.push_back(std::move(ep));
  }
  return out;
}

DemoLabeler ParseDemoLabeler(std::string_view name) {
  if (name == "otr") return DemoLabeler::kOtr;
  if (name == "uds") return DemoLabeler::kUds;
  if (name == "uniform") return DemoLabeler::kUniform;
  if (name == "truth") return DemoLabeler::kTruth;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown labeler '" + std::string(name) + "'");
}

std::string_view DemoLabelerName(DemoLabeler labeler) {
  switch (labeler) {
    case DemoLabeler::kOtr: return "otr";
    case DemoLabeler::kUds: return "uds";
    case DemoLabeler::kUniform: return "uniform";
    case DemoLabeler::kTruth: return "truth";
  }
  return "otr";
}

namespace {

PostScale ParsePostScale(const std::string& text) {
  if (text == "none") return NoPostScale{};
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "return_range" || kind == "return-range") {
    return ReturnRange{arg.empty() ? 1000.0 : std::stod(arg)};
  }
  if (kind == "shift" && !arg.empty()) return Shift{std::stod(arg)};
  throw Error(ErrorKind::kInvalidConfig, "unknown post-scale '" + text + "'");
}

}  // namespace

DemoConfig ParseDemoConfig(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kParseError,
                  source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  DemoConfig cfg;
  cfg.label = LabelConfig::Plain();
  bool horizon_set = false;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "width") cfg.env.width = std::stoi(value);
      else if (key == "height") cfg.env.height = std::stoi(value);
      else if (key == "start_x") cfg.env.start.x = std::stoi(value);
      else if (key == "start_y") cfg.env.start.y = std::stoi(value);
      else if (key == "goal_x") cfg.env.goal.x = std::stoi(value);
      else if (key == "goal_y") cfg.env.goal.y = std::stoi(value);
      else if (key == "horizon") { cfg.env.horizon = std::stoi(value); horizon_set = true; }
      else if (key == "discount") cfg.env.discount = std::stod(value);
      else if (key == "n_expert") cfg.n_expert = std::stoul(value);
      else if (key == "n_medium") cfg.n_medium = std::stoul(value);
      else if (key == "n_random") cfg.n_random = std::stoul(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "cost") cfg.label.cost = ParseCostKind(value);
      else if (key == "features") {
        if (value == "state") cfg.label.features = FeatureMode::kState;
        else if (value == "state_action") cfg.label.features = FeatureMode::kStateAction;
        else throw Error(ErrorKind::kInvalidConfig, "unknown features '" + value + "'");
      }
      else if (key == "epsilon") cfg.label.sinkhorn.epsilon = std::stod(value);
      else if (key == "max_iterations") cfg.label.sinkhorn.max_iterations = std::stoul(value);
      else if (key == "marginal_tolerance") cfg.label.sinkhorn.marginal_tolerance = std::stod(value);
      else if (key == "squash_mode") cfg.label.squash_scale = ParseScaleMode(value);
      else if (key == "alpha") cfg.label.squash_alpha = std::stod(value);
      else if (key == "beta") cfg.label.squash_beta = std::stod(value);
      else if (key == "episode_length") cfg.label.episode_length = std::stoul(value);
      else if (key == "action_dim") cfg.label.action_dim = std::stoul(value);
      else if (key == "post_scale") cfg.label.post_scale = ParsePostScale(value);
      else if (key == "sweeps") cfg.sweeps = std::stoul(value);
      else if (key == "eval_episodes") cfg.eval_episodes = std::stoul(value);
      else if (key == "uds_min_reward") cfg.uds_min_reward = std::stod(value);
      else if (key == "parallelism") cfg.parallelism = std::stoul(value);
      else throw Error(ErrorKind::kParseError, source + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kParseError,
                  source + ": bad value '" + value + "' for '" + key + "'");
    }
  }
  if (!horizon_set) cfg.env.horizon = 4 * (cfg.env.width + cfg.env.height);
  cfg.env.Validate();
  ValidateLabelConfig(cfg.label);
  return cfg;
}

DemoConfig ReadDemoConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open '" + path + "'");
  return ParseDemoConfig(in, path);
}

DemoResult RunGridworldDemo(const DemoConfig& config, DemoLabeler labeler) {
  using Clock = std::chrono::steady_clock;
  DemoResult result;
  result.data = GenerateDataset(config.env, config.n_expert, config.n_medium,
                                config.n_random, config.seed);
  const auto& unlabeled = result.data.unlabeled.episodes;
  const auto& experts = result.data.experts.episodes;

  const auto t0 = Clock::now();
  std::vector<LabeledTrajectory> unlabeled_part;
  switch (labeler) {
    case DemoLabeler::kOtr:
    case DemoLabeler::kUniform: {
      // Expert episodes are part of the behavior data too; label them with
      // the rest so they share the post-scaling statistics.
      std::vector<Trajectory> all = unlabeled;
      for (const Trajectory& e : experts) {
        Trajectory copy = e;
        copy.rewards.reset();
        all.push_back(std::move(copy));
      }
      LabelOptions opts;
      opts.parallelism = config.parallelism;
      opts.plan = labeler == DemoLabeler::kOtr ? PlanKind::kOptimal
                                               : PlanKind::kUniform;
      result.training = LabelDataset(all, experts, config.label, opts);
      break;
    }
    case DemoLabeler::kUds: {
      auto uds = UdsRewards(unlabeled, experts, config.uds_min_reward);
      // Reorder to unlabeled-first like the other labelers.
      std::rotate(uds.begin(), uds.begin() + static_cast<std::ptrdiff_t>(experts.size()),
                  uds.end());
      result.training = std::move(uds);
      break;
    }
    case DemoLabeler::kTruth: {
      result.training = WithStoredRewards(result.data.truth.episodes);
      auto expert_part = WithStoredRewards(experts);
      result.training.insert(result.training.end(), expert_part.begin(),
                             expert_part.end());
      break;
    }
  }
  const auto t1 = Clock::now();
  const TabularQ q = FitOfflineQ(result.training, config.env, config.sweeps);
  result.success_rate = EvaluatePolicy(q, config.env, config.eval_episodes);
  const auto t2 = Clock::now();

  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    result.label_returns.push_back(result.training[i].final_return());
    result.truth_returns.push_back(result.data.truth.episodes[i].episodic_return());
  }
  result.pearson = Pearson(result.label_returns, result.truth_returns);
  result.spearman = Spearman(result.label_returns, result.truth_returns);
  result.label_seconds = std::chrono::duration<double>(t1 - t0).count();
  result.fit_seconds = std::chrono::duration<double>(t2 - t1).count();
  return result;
}

}  // namespace otr
