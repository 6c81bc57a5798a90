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

#include "otr/trajectory.hpp"

#include <cmath>
#include <numeric>

#include "otr/error.hpp"

namespace otr {

double Trajectory::episodic_return() const {
  if (!rewards) {
    throw Error(ErrorKind::kRewardsMissing,
                "episode '" + id + "' carries no rewards");
  }
  return std::accumulate(rewards->begin(), rewards->end(), 0.0);
}

void ValidateTrajectory(const Trajectory& traj) {
  const std::size_t t = traj.length();
  if (t == 0) {
    throw Error(ErrorKind::kParseError,
                "episode '" + traj.id + "' has no observations");
  }
  if (!traj.observations.allFinite()) {
    throw Error(ErrorKind::kNonFiniteValue,
                "episode '" + traj.id + "' has non-finite observations");
  }
  if (traj.actions) {
    const auto rows = static_cast<std::size_t>(traj.actions->rows());
    if (rows != t && rows + 1 != t) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "episode '" + traj.id + "' has " + std::to_string(rows) +
                      " actions for " + std::to_string(t) + " observations");
    }
    if (!traj.actions->allFinite()) {
      throw Error(ErrorKind::kNonFiniteValue,
                  "episode '" + traj.id + "' has non-finite actions");
    }
  }
  if (traj.rewards) {
    if (traj.rewards->size() != t) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "episode '" + traj.id + "' has " +
                      std::to_string(traj.rewards->size()) + " rewards for " +
                      std::to_string(t) + " observations");
    }
    for (double r : *traj.rewards) {
      if (!std::isfinite(r)) {
        throw Error(ErrorKind::kNonFiniteValue,
                    "episode '" + traj.id + "' has non-finite rewards");
      }
    }
  }
  if (traj.terminals && traj.terminals->size() != t) {
    throw Error(ErrorKind::kDimensionMismatch,
                "episode '" + traj.id + "' has " +
                    std::to_string(traj.terminals->size()) +
                    " terminal flags for " + std::to_string(t) +
                    " observations");
  }
}

bool operator==(const Trajectory& lhs, const Trajectory& rhs) {
  if (lhs.id != rhs.id || lhs.rewards != rhs.rewards ||
      lhs.terminals != rhs.terminals) {
    return false;
  }
  if (lhs.observations.rows() != rhs.observations.rows() ||
      lhs.observations.cols() != rhs.observations.cols() ||
      lhs.observations != rhs.observations) {
    return false;
  }
  if (lhs.actions.has_value() != rhs.actions.has_value()) return false;
  if (lhs.actions) {
    if (lhs.actions->rows() != rhs.actions->rows() ||
        lhs.actions->cols() != rhs.actions->cols()) {
      return false;
    }
    return *lhs.actions == *rhs.actions;
  }
  return true;
}

}  // namespace otr
