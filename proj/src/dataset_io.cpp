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

#include "otr/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "otr/error.hpp"

namespace otr {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(ErrorKind kind, const std::string& source,
                       std::size_t line, const std::string& what) {
  throw Error(kind, source + ":" + std::to_string(line) + ": " + what);
}

double ReadNumber(const json& value, const std::string& source,
                  std::size_t line, const char* field) {
  if (!value.is_number()) {
    Fail(ErrorKind::kParseError, source, line,
         std::string("non-numeric entry in '") + field + "'");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    Fail(ErrorKind::kNonFiniteValue, source, line,
         std::string("non-finite entry in '") + field + "'");
  }
  return v;
}

Matrix ReadRows(const json& value, const std::string& source, std::size_t line,
                const char* field) {
  if (!value.is_array()) {
    Fail(ErrorKind::kParseError, source, line,
         std::string("'") + field + "' must be an array of arrays");
  }
  const auto rows = static_cast<Eigen::Index>(value.size());
  Eigen::Index cols = -1;
  Matrix out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = value[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      Fail(ErrorKind::kParseError, source, line,
           std::string("'") + field + "' must be an array of arrays");
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      Fail(ErrorKind::kParseError, source, line,
           std::string("ragged '") + field + "': row " + std::to_string(r) +
               " has " + std::to_string(row.size()) + " entries, expected " +
               std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = ReadNumber(row[static_cast<std::size_t>(c)], source, line, field);
    }
  }
  if (cols < 0) out.resize(0, 0);
  return out;
}

Trajectory ParseRecord(const json& record, const std::string& source,
                       std::size_t line, std::size_t index) {
  if (!record.is_object()) {
    Fail(ErrorKind::kParseError, source, line, "record is not an object");
  }
  Trajectory traj;
  if (auto it = record.find("id"); it != record.end() && !it->is_null()) {
    if (it->is_string()) {
      traj.id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      traj.id = std::to_string(it->get<long long>());
    } else {
      Fail(ErrorKind::kParseError, source, line, "'id' must be a string");
    }
  } else {
    traj.id = std::to_string(index);
  }

  auto obs = record.find("observations");
  if (obs == record.end()) {
    Fail(ErrorKind::kParseError, source, line, "missing 'observations'");
  }
  traj.observations = ReadRows(*obs, source, line, "observations");
  if (traj.observations.rows() == 0 || traj.observations.cols() == 0) {
    Fail(ErrorKind::kParseError, source, line, "empty 'observations'");
  }
  if (auto it = record.find("actions"); it != record.end() && !it->is_null()) {
    traj.actions = ReadRows(*it, source, line, "actions");
  }
  if (auto it = record.find("rewards"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) {
      Fail(ErrorKind::kParseError, source, line, "'rewards' must be an array");
    }
    std::vector<double> rewards;
    rewards.reserve(it->size());
    for (const json& v : *it) rewards.push_back(ReadNumber(v, source, line, "rewards"));
    traj.rewards = std::move(rewards);
  }
  if (auto it = record.find("terminals"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) {
      Fail(ErrorKind::kParseError, source, line, "'terminals' must be an array");
    }
    std::vector<std::uint8_t> terminals;
    terminals.reserve(it->size());
    for (const json& v : *it) {
      if (v.is_boolean()) {
        terminals.push_back(v.get<bool>() ? 1 : 0);
      } else if (v.is_number_integer()) {
        terminals.push_back(v.get<long long>() != 0 ? 1 : 0);
      } else {
        Fail(ErrorKind::kParseError, source, line,
             "'terminals' entries must be booleans");
      }
    }
    traj.terminals = std::move(terminals);
  }
  try {
    ValidateTrajectory(traj);
  } catch (const Error& e) {
    Fail(e.kind(), source, line, e.what());
  }
  return traj;
}

json RowsToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json TrajectoryToJson(const Trajectory& traj) {
  json record = json::object();
  record["id"] = traj.id;
  record["observations"] = RowsToJson(traj.observations);
  if (traj.actions) record["actions"] = RowsToJson(*traj.actions);
  if (traj.rewards) record["rewards"] = *traj.rewards;
  if (traj.terminals) {
    json flags = json::array();
    for (std::uint8_t f : *traj.terminals) flags.push_back(f != 0);
    record["terminals"] = std::move(flags);
  }
  return record;
}

}  // namespace

namespace {

template <typename OnRecord>
void ForEachRecord(std::istream& in, const std::string& source,
                   OnRecord&& on_record) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; })) {
      continue;
    }
    json record;
    try {
      record = json::parse(text);
    } catch (const json::exception& e) {
      // Includes numbers too large for a double.
      Fail(ErrorKind::kParseError, source, line, e.what());
    }
    on_record(record, line);
  }
}

}  // namespace

EpisodicDataset ParseDataset(std::istream& in, const std::string& source) {
  EpisodicDataset dataset;
  std::optional<std::size_t> obs_dim;
  std::optional<std::size_t> action_dim;
  ForEachRecord(in, source, [&](const json& record, std::size_t line) {
    Trajectory traj = ParseRecord(record, source, line, dataset.episodes.size());
    if (obs_dim && *obs_dim != traj.observation_dim()) {
      Fail(ErrorKind::kDimensionMismatch, source, line,
           "observation dimension " + std::to_string(traj.observation_dim()) +
               " differs from " + std::to_string(*obs_dim));
    }
    obs_dim = traj.observation_dim();
    if (traj.actions) {
      const auto da = static_cast<std::size_t>(traj.actions->cols());
      if (action_dim && *action_dim != da) {
        Fail(ErrorKind::kDimensionMismatch, source, line,
             "action dimension " + std::to_string(da) + " differs from " +
                 std::to_string(*action_dim));
      }
      action_dim = da;
    }
    dataset.episodes.push_back(std::move(traj));
  });
  dataset.metadata["name"] = source;
  dataset.metadata["episodes"] = std::to_string(dataset.episodes.size());
  if (obs_dim) dataset.metadata["observation_dim"] = std::to_string(*obs_dim);
  if (action_dim) dataset.metadata["action_dim"] = std::to_string(*action_dim);
  return dataset;
}

EpisodicDataset ReadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIoError, "cannot open '" + path.string() + "'");
  }
  return ParseDataset(in, path.string());
}

std::vector<LabeledTrajectory> ReadLabeled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIoError, "cannot open '" + path.string() + "'");
  }
  const std::string source = path.string();
  std::vector<LabeledTrajectory> out;
  ForEachRecord(in, source, [&](const json& record, std::size_t line) {
    LabeledTrajectory ep;
    ep.base = ParseRecord(record, source, line, out.size());
    if (!ep.base.rewards) {
      Fail(ErrorKind::kRewardsMissing, source, line, "labeled record has no rewards");
    }
    ep.rewards = *ep.base.rewards;
    if (auto it = record.find("source_expert");
        it != record.end() && it->is_number_unsigned()) {
      ep.source_expert = it->get<std::size_t>();
    }
    out.push_back(std::move(ep));
  });
  return out;
}

std::string FormatTrajectory(const Trajectory& traj) {
  return TrajectoryToJson(traj).dump();
}

std::string FormatLabeled(const LabeledTrajectory& labeled) {
  json record = TrajectoryToJson(labeled.base);
  record["rewards"] = labeled.rewards;
  if (labeled.source_expert) record["source_expert"] = *labeled.source_expert;
  return record.dump();
}

void AtomicWriteFile(const std::filesystem::path& path,
                     const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIoError, "cannot write '" + path.string() + "'");
    }
    try {
      writer(out);
    } catch (...) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::kIoError, "write to '" + path.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorKind::kIoError,
                "cannot move output into '" + path.string() + "': " + ec.message());
  }
}

void WriteDataset(const std::filesystem::path& path,
                  std::span<const Trajectory> episodes) {
  AtomicWriteFile(path, [&](std::ostream& out) {
    for (const Trajectory& traj : episodes) out << FormatTrajectory(traj) << '\n';
  });
}

void WriteLabeled(const std::filesystem::path& path,
                  std::span<const LabeledTrajectory> dataset) {
  AtomicWriteFile(path, [&](std::ostream& out) {
    for (const LabeledTrajectory& ep : dataset) out << FormatLabeled(ep) << '\n';
  });
}

EpisodicDataset SelectTopKExperts(const EpisodicDataset& dataset,
                                  std::size_t k) {
  if (k < 1) {
    throw Error(ErrorKind::kInvalidCounts, "k must be at least 1");
  }
  std::vector<double> returns;
  returns.reserve(dataset.size());
  for (const Trajectory& traj : dataset.episodes) {
    returns.push_back(traj.episodic_return());
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return returns[l] > returns[r];
  });

  EpisodicDataset out;
  out.metadata = dataset.metadata;
  const std::size_t take = std::min(k, dataset.size());
  for (std::size_t i = 0; i < take; ++i) {
    out.episodes.push_back(dataset.episodes[order[i]]);
  }
  out.metadata["episodes"] = std::to_string(take);
  if (k > dataset.size()) {
    out.metadata[kTruncatedSelectionKey] =
        "requested " + std::to_string(k) + " experts but dataset has " +
        std::to_string(dataset.size()) + " episodes";
  }
  return out;
}

void WriteDiagnostics(const std::filesystem::path& path,
                      std::span<const DiagnosticRow> rows) {
  AtomicWriteFile(path, [&](std::ostream& out) {
    out << "episode_id,ground_truth_return,otr_return,source_expert\n";
    out.precision(17);
    for (const DiagnosticRow& row : rows) {
      out << row.episode_id << ',' << row.ground_truth_return << ','
          << row.otr_return << ',' << row.source_expert << '\n';
    }
  });
}

}  // namespace otr
