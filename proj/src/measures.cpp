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

#include "otr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otr/error.hpp"

namespace otr {

void ValidateMeasure(const WeightedMeasure& measure) {
  if (measure.weights.empty() ||
      static_cast<std::size_t>(measure.points.rows()) != measure.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "measure has " + std::to_string(measure.points.rows()) +
                    " points and " + std::to_string(measure.size()) +
                    " weights");
  }
  double total = 0.0;
  bool any_positive = false;
  for (double w : measure.weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorKind::kNegativeWeight, "measure weight is negative");
    }
    any_positive = any_positive || w > 0.0;
    total += w;
  }
  if (!any_positive || std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::kMarginalMismatch,
                "measure weights sum to " + std::to_string(total));
  }
}

WeightedMeasure TrajectoryToMeasure(const Trajectory& traj,
                                    FeatureMode features) {
  ValidateTrajectory(traj);
  const Eigen::Index t = traj.observations.rows();
  const Eigen::Index d = traj.observations.cols();

  WeightedMeasure measure;
  measure.weights.assign(static_cast<std::size_t>(t),
                         1.0 / static_cast<double>(t));
  if (features == FeatureMode::kState) {
    measure.points = traj.observations;
    return measure;
  }

  if (!traj.actions) {
    throw Error(ErrorKind::kMissingActions,
                "state-action features requested but episode '" + traj.id +
                    "' has no actions");
  }
  const Matrix& actions = *traj.actions;
  const Eigen::Index da = actions.cols();
  measure.points = Matrix::Zero(t, d + da);
  measure.points.leftCols(d) = traj.observations;
  const Eigen::Index paired = std::min(t, actions.rows());
  measure.points.block(0, d, paired, da) = actions.topRows(paired);
  return measure;
}

WeightedMeasure PadMeasure(const WeightedMeasure& measure,
                           std::size_t target_len) {
  const std::size_t n = measure.size();
  if (target_len < n) {
    throw Error(ErrorKind::kTargetTooSmall,
                "cannot pad a measure of " + std::to_string(n) +
                    " points to " + std::to_string(target_len));
  }
  WeightedMeasure padded;
  padded.points = Matrix::Zero(static_cast<Eigen::Index>(target_len),
                               measure.points.cols());
  padded.points.topRows(static_cast<Eigen::Index>(n)) = measure.points;
  padded.weights = measure.weights;
  padded.weights.resize(target_len, 0.0);
  return padded;
}

}  // namespace otr
