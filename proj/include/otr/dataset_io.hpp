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

#ifndef OTR_DATASET_IO_HPP_
#define OTR_DATASET_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "otr/reward_labeler.hpp"
#include "otr/trajectory.hpp"

namespace otr {

// Episodes stored one JSON object per line:
//   {"id": "...", "observations": [[...], ...], "actions": [[...], ...],
//    "rewards": [...], "terminals": [true, ...]}
// Only "observations" is required. Labeled files add "source_expert".
struct EpisodicDataset {
  std::vector<Trajectory> episodes;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return episodes.size(); }
};

EpisodicDataset ReadDataset(const std::filesystem::path& path);

// `source` only names the stream in error messages.
EpisodicDataset ParseDataset(std::istream& in, const std::string& source);

// Reads a file produced by WriteLabeled: `rewards` becomes the labeled
// rewards and `source_expert` is kept when present.
std::vector<LabeledTrajectory> ReadLabeled(const std::filesystem::path& path);

void WriteDataset(const std::filesystem::path& path,
                  std::span<const Trajectory> episodes);

// Writes each labeled episode with its final rewards and source expert.
void WriteLabeled(const std::filesystem::path& path,
                  std::span<const LabeledTrajectory> dataset);

// Serializations used by the writers above, without a trailing newline.
std::string FormatTrajectory(const Trajectory& traj);
std::string FormatLabeled(const LabeledTrajectory& labeled);

// Writes through a temporary sibling file renamed into place on success, so
// a failed write never leaves a partial file at `path`.
void AtomicWriteFile(const std::filesystem::path& path,
                     const std::function<void(std::ostream&)>& writer);

// Metadata key set by SelectTopKExperts when k exceeds the dataset size.
inline constexpr const char* kTruncatedSelectionKey = "warning";

// The k highest-return episodes in descending order of return; ties keep the
// earlier episode first.
EpisodicDataset SelectTopKExperts(const EpisodicDataset& dataset,
                                  std::size_t k);

struct DiagnosticRow {
  std::string episode_id;
  double ground_truth_return = 0.0;
  double otr_return = 0.0;
  std::string source_expert;  // empty when unknown
};

// Comma-separated table with header
// episode_id,ground_truth_return,otr_return,source_expert
void WriteDiagnostics(const std::filesystem::path& path,
                      std::span<const DiagnosticRow> rows);

}  // namespace otr

#endif  // OTR_DATASET_IO_HPP_
