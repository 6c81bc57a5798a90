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

#ifndef OTR_MEASURES_HPP_
#define OTR_MEASURES_HPP_

#include <cstddef>
#include <vector>

#include "otr/trajectory.hpp"

namespace otr {

enum class FeatureMode { kState, kStateAction };

// Discrete empirical measure: one feature vector per row of `points`, with
// nonnegative `weights` summing to one. Zero weights mark padding.
struct WeightedMeasure {
  Matrix points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
};

// Tolerance on the total mass of a measure.
inline constexpr double kMassTolerance = 1e-9;

// Throws if weights are negative, empty, all zero, or do not sum to one.
void ValidateMeasure(const WeightedMeasure& measure);

// Uniform 1/T measure over the episode's states (or state-action pairs).
// With kStateAction, s_t is paired with a_t; a state with no action (the final
// one when actions has T-1 rows) is paired with a zero action vector.
WeightedMeasure TrajectoryToMeasure(const Trajectory& traj,
                                    FeatureMode features);

// Appends zero points with zero weight up to `target_len`.
WeightedMeasure PadMeasure(const WeightedMeasure& measure,
                           std::size_t target_len);

}  // namespace otr

#endif  // OTR_MEASURES_HPP_
