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

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otr/dataset_io.hpp"
#include "otr/error.hpp"
#include "otr/gridworld.hpp"
#include "otr/parallel.hpp"
#include "otr/reward_labeler.hpp"
#include "otr/stats.hpp"

namespace otr {
namespace {

struct LabelFlags {
  std::string unlabeled;
  std::string experts;
  std::string out;
  std::string preset = "plain";
  std::optional<std::string> cost;
  std::optional<std::string> features;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::optional<double> tolerance;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> squash_mode;
  std::optional<std::size_t> episode_length;
  std::optional<std::size_t> action_dim;
  std::optional<std::string> post_scale;
  std::string plan = "optimal";
  std::size_t parallelism = 0;
};

PostScale ParsePostScaleFlag(const std::string& text) {
  if (text == "none") return NoPostScale{};
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  try {
    if (kind == "return-range" || kind == "return_range") {
      return ReturnRange{arg.empty() ? 1000.0 : std::stod(arg)};
    }
    if (kind == "shift" && !arg.empty()) return Shift{std::stod(arg)};
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorKind::kInvalidConfig,
              "--post-scale expects none, return-range[:TARGET] or shift:DELTA, got '" +
                  text + "'");
}

LabelConfig BuildLabelConfig(const LabelFlags& flags,
                             const EpisodicDataset& experts) {
  LabelConfig cfg;
  if (flags.preset == "locomotion") {
    cfg = LabelConfig::Locomotion(0);
  } else if (flags.preset == "antmaze") {
    cfg = LabelConfig::Antmaze();
  } else {
    cfg = LabelConfig::Plain();
  }
  if (flags.cost) cfg.cost = ParseCostKind(*flags.cost);
  if (flags.features) {
    cfg.features = *flags.features == "state_action" ? FeatureMode::kStateAction
                                                     : FeatureMode::kState;
  }
  if (flags.epsilon) cfg.sinkhorn.epsilon = *flags.epsilon;
  if (flags.max_iters) cfg.sinkhorn.max_iterations = *flags.max_iters;
  if (flags.tolerance) cfg.sinkhorn.marginal_tolerance = *flags.tolerance;
  if (flags.alpha) cfg.squash_alpha = *flags.alpha;
  if (flags.beta) cfg.squash_beta = *flags.beta;
  if (flags.squash_mode) cfg.squash_scale = ParseScaleMode(*flags.squash_mode);
  if (flags.episode_length) cfg.episode_length = *flags.episode_length;
  if (flags.post_scale) cfg.post_scale = ParsePostScaleFlag(*flags.post_scale);
  if (flags.action_dim) {
    cfg.action_dim = *flags.action_dim;
  } else if (auto it = experts.metadata.find("action_dim");
             it != experts.metadata.end()) {
    cfg.action_dim = std::stoul(it->second);
  }
  ValidateLabelConfig(cfg);
  return cfg;
}

struct ReturnSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

ReturnSummary Summarize(const std::vector<double>& values) {
  ReturnSummary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  return s;
}

int CmdLabel(const LabelFlags& flags, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const EpisodicDataset unlabeled = ReadDataset(flags.unlabeled);
  const EpisodicDataset experts = ReadDataset(flags.experts);
  const LabelConfig cfg = BuildLabelConfig(flags, experts);

  LabelOptions opts;
  opts.parallelism = flags.parallelism == 0 ? DefaultParallelism() : flags.parallelism;
  opts.plan = flags.plan == "uniform" ? PlanKind::kUniform : PlanKind::kOptimal;
  const std::vector<LabeledTrajectory> labeled =
      LabelDataset(unlabeled.episodes, experts.episodes, cfg, opts);
  WriteLabeled(flags.out, labeled);

  std::vector<double> raw_returns;
  std::vector<double> returns;
  std::size_t unconverged = 0;
  for (const auto& ep : labeled) {
    raw_returns.push_back(ep.raw_return());
    returns.push_back(ep.final_return());
    if (!ep.converged) ++unconverged;
  }
  const ReturnSummary raw = Summarize(raw_returns);
  const ReturnSummary fin = Summarize(returns);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "labeled " << labeled.size() << " episodes against "
      << experts.size() << " expert(s) -> " << flags.out << '\n';
  out << std::setprecision(6);
  out << "raw OT return:      mean " << raw.mean << "  min " << raw.min
      << "  max " << raw.max << '\n';
  out << "labeled return:     mean " << fin.mean << "  min " << fin.min
      << "  max " << fin.max << '\n';
  if (unconverged > 0) {
    out << "warning: " << unconverged
        << " episode(s) hit the Sinkhorn iteration cap\n";
  }
  out << "wall time: " << seconds << " s (" << opts.parallelism
      << " worker(s))\n";
  return kExitOk;
}

int CmdSelectExperts(const std::string& dataset_path, std::size_t k,
                     const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
  const EpisodicDataset dataset = ReadDataset(dataset_path);
  const EpisodicDataset selected = SelectTopKExperts(dataset, k);
  if (auto it = selected.metadata.find(kTruncatedSelectionKey);
      it != selected.metadata.end()) {
    err << "warning: " << it->second << '\n';
  }
  WriteDataset(out_path, selected.episodes);
  out << "selected " << selected.size() << " episode(s) -> " << out_path << '\n';
  for (const Trajectory& t : selected.episodes) {
    out << "  " << t.id << "  return " << t.episodic_return() << '\n';
  }
  return kExitOk;
}

int CmdDiagnose(const std::string& labeled_path, const std::string& truth_path,
                const std::string& csv_path, std::ostream& out,
                std::ostream& err) {
  const std::vector<LabeledTrajectory> labeled = ReadLabeled(labeled_path);
  const EpisodicDataset truth = ReadDataset(truth_path);
  std::map<std::string, const Trajectory*> truth_by_id;
  for (const Trajectory& t : truth.episodes) {
    if (!truth_by_id.emplace(t.id, &t).second) {
      throw Error(ErrorKind::kIdMismatch,
                  "duplicate episode id '" + t.id + "' in " + truth_path);
    }
  }
  if (truth_by_id.size() != labeled.size()) {
    throw Error(ErrorKind::kIdMismatch,
                labeled_path + " has " + std::to_string(labeled.size()) +
                    " episodes but " + truth_path + " has " +
                    std::to_string(truth_by_id.size()));
  }
  std::vector<DiagnosticRow> rows;
  std::vector<double> truth_returns;
  std::vector<double> label_returns;
  for (const LabeledTrajectory& ep : labeled) {
    auto it = truth_by_id.find(ep.base.id);
    if (it == truth_by_id.end()) {
      throw Error(ErrorKind::kIdMismatch,
                  "episode '" + ep.base.id + "' missing from " + truth_path);
    }
    DiagnosticRow row;
    row.episode_id = ep.base.id;
    row.ground_truth_return = it->second->episodic_return();
    row.otr_return = ep.final_return();
    if (ep.source_expert) row.source_expert = std::to_string(*ep.source_expert);
    truth_returns.push_back(row.ground_truth_return);
    label_returns.push_back(row.otr_return);
    rows.push_back(std::move(row));
  }
  WriteDiagnostics(csv_path, rows);

  auto report = [&](const char* name, std::optional<double> value) {
    if (!value) {
      err << "warning: " << name
          << " correlation undefined (degenerate variance); reporting 0\n";
    }
    out << name << ": " << std::setprecision(6) << value.value_or(0.0) << '\n';
  };
  out << "wrote " << rows.size() << " rows -> " << csv_path << '\n';
  report("pearson", Pearson(label_returns, truth_returns));
  report("spearman", Spearman(label_returns, truth_returns));
  return kExitOk;
}

int CmdDemo(const std::string& config_path, const std::string& labeler_name,
            const std::optional<std::string>& dump_dir, std::ostream& out) {
  const DemoConfig config = ReadDemoConfig(config_path);
  const DemoLabeler labeler = ParseDemoLabeler(labeler_name);
  const DemoResult result = RunGridworldDemo(config, labeler);
  if (dump_dir) {
    const std::filesystem::path dir(*dump_dir);
    std::filesystem::create_directories(dir);
    WriteDataset(dir / "experts.jsonl", result.data.experts.episodes);
    WriteDataset(dir / "unlabeled.jsonl", result.data.unlabeled.episodes);
    WriteDataset(dir / "truth.jsonl", result.data.truth.episodes);
    WriteLabeled(dir / "labeled.jsonl", result.training);
  }
  out << "labeler: " << DemoLabelerName(labeler) << '\n';
  out << "episodes: " << result.data.experts.size() << " expert, "
      << result.data.unlabeled.size() << " unlabeled\n";
  out << "success_rate: " << result.success_rate << '\n';
  out << std::setprecision(6);
  out << "pearson: " << result.pearson.value_or(0.0) << '\n';
  out << "spearman: " << result.spearman.value_or(0.0) << '\n';
  out << "label time: " << result.label_seconds
      << " s, fit+eval time: " << result.fit_seconds << " s\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Optimal-transport reward labeling for offline RL datasets", "otr"};
  app.require_subcommand(1);

  LabelFlags label;
  auto* label_cmd = app.add_subcommand(
      "label", "Label an unlabeled dataset against expert demonstrations");
  label_cmd->add_option("unlabeled", label.unlabeled, "Unlabeled episodes")->required();
  label_cmd->add_option("experts", label.experts, "Expert episodes")->required();
  label_cmd->add_option("out", label.out, "Labeled output file")->required();
  label_cmd->add_option("--preset", label.preset, "Squashing/scaling preset")
      ->check(CLI::IsMember({"locomotion", "antmaze", "plain"}));
  label_cmd->add_option("--cost", label.cost, "Ground cost")
      ->check(CLI::IsMember({"cosine", "sqeuclidean"}));
  label_cmd->add_option("--features", label.features, "Feature map")
      ->check(CLI::IsMember({"state", "state_action"}));
  label_cmd->add_option("--epsilon", label.epsilon, "Entropic regularization");
  label_cmd->add_option("--max-iters", label.max_iters, "Sinkhorn iteration cap");
  label_cmd->add_option("--tolerance", label.tolerance, "Marginal tolerance");
  label_cmd->add_option("--alpha", label.alpha, "Squash scale alpha");
  label_cmd->add_option("--beta", label.beta, "Squash exponent beta");
  label_cmd->add_option("--squash-mode", label.squash_mode, "Exponent form")
      ->check(CLI::IsMember({"locomotion", "antmaze", "plain"}));
  label_cmd->add_option("--episode-length", label.episode_length,
                        "T used in the squashing exponent");
  label_cmd->add_option("--action-dim", label.action_dim,
                        "|A| for locomotion squashing (default: from experts)");
  label_cmd->add_option("--post-scale", label.post_scale,
                        "none | return-range[:TARGET] | shift:DELTA");
  label_cmd->add_option("--plan", label.plan, "Coupling used for rewards")
      ->check(CLI::IsMember({"optimal", "uniform"}));
  label_cmd->add_option("--parallelism", label.parallelism,
                        "Episode workers (0 = all cores)");

  std::string select_path;
  std::size_t select_k = 1;
  std::string select_out;
  auto* select_cmd = app.add_subcommand(
      "select-experts", "Keep the k highest-return episodes");
  select_cmd->add_option("dataset", select_path, "Dataset with rewards")->required();
  select_cmd->add_option("k", select_k, "Number of episodes")
      ->required()
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("out", select_out, "Output file")->required();

  std::string diag_labeled;
  std::string diag_truth;
  std::string diag_csv;
  auto* diag_cmd = app.add_subcommand(
      "diagnose", "Compare labeled returns with ground-truth returns");
  diag_cmd->add_option("labeled", diag_labeled, "Labeled dataset")->required();
  diag_cmd->add_option("truth", diag_truth, "Dataset with true rewards")->required();
  diag_cmd->add_option("out_csv", diag_csv, "Diagnostics table")->required();

  std::string demo_config;
  std::string demo_labeler = "otr";
  std::optional<std::string> demo_dump;
  auto* demo_cmd = app.add_subcommand(
      "demo-gridworld", "Label a generated gridworld dataset and train on it");
  demo_cmd->add_option("config", demo_config, "key = value config file")->required();
  demo_cmd->add_option("--labeler", demo_labeler, "Reward source")
      ->check(CLI::IsMember({"otr", "uds", "uniform", "truth"}));
  demo_cmd->add_option("--dump-dir", demo_dump,
                       "Write the generated and labeled datasets here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (label_cmd->parsed()) return CmdLabel(label, out);
    if (select_cmd->parsed()) {
      return CmdSelectExperts(select_path, select_k, select_out, out, err);
    }
    if (diag_cmd->parsed()) {
      return CmdDiagnose(diag_labeled, diag_truth, diag_csv, out, err);
    }
    if (demo_cmd->parsed()) return CmdDemo(demo_config, demo_labeler, demo_dump, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (ClassOf(e.kind())) {
      case ErrorClass::kData: return kExitParse;
      case ErrorClass::kNumeric: return kExitNumeric;
      case ErrorClass::kIo: return kExitIo;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace otr
