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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "otr/cli.hpp"
#include "otr/cost_functions.hpp"
#include "otr/dataset_io.hpp"
#include "otr/error.hpp"
#include "otr/gridworld.hpp"
#include "otr/measures.hpp"
#include "otr/ot_solver.hpp"
#include "otr/reward_labeler.hpp"
#include "otr/stats.hpp"

namespace py = pybind11;

namespace {

// Spans do not convert from Python; take vectors and forward.
otr::Coupling SinkhornPy(const otr::CostMatrix& cost, const std::vector<double>& a,
                         const std::vector<double>& b,
                         const otr::SinkhornParams& params) {
  py::gil_scoped_release release;
  return otr::Sinkhorn(cost, a, b, params);
}

otr::Coupling LpOraclePy(const otr::CostMatrix& cost, const std::vector<double>& a,
                         const std::vector<double>& b) {
  return otr::LpOracle(cost, a, b);
}

std::vector<otr::LabeledTrajectory> LabelDatasetPy(
    const std::vector<otr::Trajectory>& unlabeled,
    const std::vector<otr::Trajectory>& experts, const otr::LabelConfig& cfg,
    std::size_t parallelism, otr::PlanKind plan) {
  otr::LabelOptions opts;
  opts.parallelism = parallelism;
  opts.plan = plan;
  py::gil_scoped_release release;
  return otr::LabelDataset(unlabeled, experts, cfg, opts);
}

py::tuple RunCliPy(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"otr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = otr::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_otr, m) {
  m.doc() = "Optimal-transport reward labeling for offline RL datasets.";

  py::register_exception<otr::Error>(m, "OtrError", PyExc_ValueError);

  py::enum_<otr::CostKind>(m, "CostKind")
      .value("COSINE", otr::CostKind::kCosine)
      .value("SQUARED_EUCLIDEAN", otr::CostKind::kSquaredEuclidean);
  py::enum_<otr::FeatureMode>(m, "FeatureMode")
      .value("STATE", otr::FeatureMode::kState)
      .value("STATE_ACTION", otr::FeatureMode::kStateAction);
  py::enum_<otr::ScaleMode>(m, "ScaleMode")
      .value("LOCOMOTION", otr::ScaleMode::kLocomotion)
      .value("ANTMAZE", otr::ScaleMode::kAntmaze)
      .value("PLAIN", otr::ScaleMode::kPlain);
  py::enum_<otr::PlanKind>(m, "PlanKind")
      .value("OPTIMAL", otr::PlanKind::kOptimal)
      .value("UNIFORM", otr::PlanKind::kUniform);

  py::class_<otr::Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def(py::init([](otr::Matrix observations, std::optional<otr::Matrix> actions,
                       std::optional<std::vector<double>> rewards, std::string id) {
             otr::Trajectory t;
             t.observations = std::move(observations);
             t.actions = std::move(actions);
             t.rewards = std::move(rewards);
             t.id = std::move(id);
             otr::ValidateTrajectory(t);
             return t;
           }),
           py::arg("observations"), py::arg("actions") = py::none(),
           py::arg("rewards") = py::none(), py::arg("id") = "")
      .def_readwrite("observations", &otr::Trajectory::observations)
      .def_readwrite("actions", &otr::Trajectory::actions)
      .def_readwrite("rewards", &otr::Trajectory::rewards)
      .def_readwrite("terminals", &otr::Trajectory::terminals)
      .def_readwrite("id", &otr::Trajectory::id)
      .def("__len__", &otr::Trajectory::length)
      .def("episodic_return", &otr::Trajectory::episodic_return);

  py::class_<otr::SinkhornParams>(m, "SinkhornParams")
      .def(py::init<>())
      .def(py::init([](double epsilon, std::size_t max_iterations, double tol) {
             return otr::SinkhornParams{epsilon, max_iterations, tol};
           }),
           py::arg("epsilon") = 0.01, py::arg("max_iterations") = 1000,
           py::arg("marginal_tolerance") = 1e-6)
      .def_readwrite("epsilon", &otr::SinkhornParams::epsilon)
      .def_readwrite("max_iterations", &otr::SinkhornParams::max_iterations)
      .def_readwrite("marginal_tolerance", &otr::SinkhornParams::marginal_tolerance);

  py::class_<otr::Coupling>(m, "Coupling")
      .def_readonly("plan", &otr::Coupling::plan)
      .def_readonly("row_marginal", &otr::Coupling::row_marginal)
      .def_readonly("col_marginal", &otr::Coupling::col_marginal)
      .def_readonly("transport_cost", &otr::Coupling::transport_cost)
      .def_readonly("converged", &otr::Coupling::converged)
      .def_readonly("iterations", &otr::Coupling::iterations)
      .def("marginal_residual", &otr::Coupling::MarginalResidual);

  py::class_<otr::NoPostScale>(m, "NoPostScale").def(py::init<>());
  py::class_<otr::ReturnRange>(m, "ReturnRange")
      .def(py::init([](double target) { return otr::ReturnRange{target}; }),
           py::arg("target") = 1000.0)
      .def_readwrite("target", &otr::ReturnRange::target);
  py::class_<otr::Shift>(m, "Shift")
      .def(py::init([](double delta) { return otr::Shift{delta}; }), py::arg("delta"))
      .def_readwrite("delta", &otr::Shift::delta);

  py::class_<otr::LabelConfig>(m, "LabelConfig")
      .def(py::init<>())
      .def_static("locomotion", &otr::LabelConfig::Locomotion, py::arg("action_dim"))
      .def_static("antmaze", &otr::LabelConfig::Antmaze)
      .def_static("plain", &otr::LabelConfig::Plain)
      .def_readwrite("cost", &otr::LabelConfig::cost)
      .def_readwrite("features", &otr::LabelConfig::features)
      .def_readwrite("sinkhorn", &otr::LabelConfig::sinkhorn)
      .def_readwrite("squash_alpha", &otr::LabelConfig::squash_alpha)
      .def_readwrite("squash_beta", &otr::LabelConfig::squash_beta)
      .def_readwrite("squash_scale", &otr::LabelConfig::squash_scale)
      .def_readwrite("episode_length", &otr::LabelConfig::episode_length)
      .def_readwrite("action_dim", &otr::LabelConfig::action_dim)
      .def_readwrite("post_scale", &otr::LabelConfig::post_scale);

  py::class_<otr::LabeledTrajectory>(m, "LabeledTrajectory")
      .def_readonly("base", &otr::LabeledTrajectory::base)
      .def_readonly("raw_ot_rewards", &otr::LabeledTrajectory::raw_ot_rewards)
      .def_readonly("ot_rewards", &otr::LabeledTrajectory::ot_rewards)
      .def_readonly("rewards", &otr::LabeledTrajectory::rewards)
      .def_readonly("source_expert", &otr::LabeledTrajectory::source_expert)
      .def_readonly("transport_cost", &otr::LabeledTrajectory::transport_cost)
      .def_readonly("converged", &otr::LabeledTrajectory::converged)
      .def("raw_return", &otr::LabeledTrajectory::raw_return)
      .def("final_return", &otr::LabeledTrajectory::final_return);

  m.def("pairwise_costs",
        py::overload_cast<const otr::Matrix&, const otr::Matrix&, otr::CostKind>(
            &otr::PairwiseCosts),
        py::arg("a"), py::arg("b"), py::arg("kind") = otr::CostKind::kCosine);
  m.def("sinkhorn", &SinkhornPy, py::arg("cost"), py::arg("a"), py::arg("b"),
        py::arg("params") = otr::SinkhornParams{});
  m.def("lp_oracle", &LpOraclePy, py::arg("cost"), py::arg("a"), py::arg("b"));
  m.def("squash",
        [](const std::vector<double>& raw, const otr::LabelConfig& cfg) {
          return otr::Squash(raw, cfg);
        },
        py::arg("raw"), py::arg("config"));
  m.def("ot_rewards",
        [](const otr::Trajectory& unlabeled, const otr::Trajectory& expert,
           const otr::LabelConfig& cfg) {
          return otr::OtRewardsSingle(unlabeled, expert, cfg).rewards;
        },
        py::arg("unlabeled"), py::arg("expert"), py::arg("config"));
  m.def("label_dataset", &LabelDatasetPy, py::arg("unlabeled"), py::arg("experts"),
        py::arg("config"), py::arg("parallelism") = 1,
        py::arg("plan") = otr::PlanKind::kOptimal);
  m.def("uds_rewards",
        [](const std::vector<otr::Trajectory>& unlabeled,
           const std::vector<otr::Trajectory>& experts, double r_min) {
          return otr::UdsRewards(unlabeled, experts, r_min);
        },
        py::arg("unlabeled"), py::arg("experts"), py::arg("r_min") = 0.0);

  m.def("read_dataset",
        [](const std::filesystem::path& path) { return otr::ReadDataset(path).episodes; },
        py::arg("path"));
  m.def("write_dataset",
        [](const std::filesystem::path& path, const std::vector<otr::Trajectory>& eps) {
          otr::WriteDataset(path, eps);
        },
        py::arg("path"), py::arg("episodes"));
  m.def("read_labeled", &otr::ReadLabeled, py::arg("path"));
  m.def("write_labeled",
        [](const std::filesystem::path& path,
           const std::vector<otr::LabeledTrajectory>& eps) { otr::WriteLabeled(path, eps); },
        py::arg("path"), py::arg("episodes"));
  m.def("select_top_k",
        [](const std::vector<otr::Trajectory>& eps, std::size_t k) {
          otr::EpisodicDataset ds;
          ds.episodes = eps;
          return otr::SelectTopKExperts(ds, k).episodes;
        },
        py::arg("episodes"), py::arg("k"));

  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return otr::Pearson(x, y);
        });
  m.def("spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return otr::Spearman(x, y);
        });

  m.def("run_gridworld_demo",
        [](const std::string& config_path, const std::string& labeler) {
          const auto result = otr::RunGridworldDemo(otr::ReadDemoConfig(config_path),
                                                    otr::ParseDemoLabeler(labeler));
          py::dict d;
          d["success_rate"] = result.success_rate;
          d["pearson"] = result.pearson;
          d["spearman"] = result.spearman;
          d["label_returns"] = result.label_returns;
          d["truth_returns"] = result.truth_returns;
          return d;
        },
        py::arg("config_path"), py::arg("labeler") = "otr");

  // Same entry point as the `otr` executable; returns (exit_code, stdout, stderr).
  m.def("run_cli", &RunCliPy, py::arg("args"));
}
