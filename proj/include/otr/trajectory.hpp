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

#ifndef OTR_TRAJECTORY_HPP_
#define OTR_TRAJECTORY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace otr {

// Row-major so that each row is one contiguous feature vector.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// One episode. observations is T x d; actions, when present, has T or T-1
// rows; rewards and terminals, when present, have one entry per observation.
struct Trajectory {
  Matrix observations;
  std::optional<Matrix> actions;
  std::optional<std::vector<double>> rewards;
  std::optional<std::vector<std::uint8_t>> terminals;
  std::string id;

  std::size_t length() const {
    return static_cast<std::size_t>(observations.rows());
  }
  std::size_t observation_dim() const {
    return static_cast<std::size_t>(observations.cols());
  }
  bool has_actions() const { return actions.has_value(); }

  // Sum of stored rewards. Throws RewardsMissing when absent.
  double episodic_return() const;
};

// Checks the per-episode invariants (T >= 1, action/reward/terminal lengths,
// finite values). Throws otr::Error on violation.
void ValidateTrajectory(const Trajectory& traj);

bool operator==(const Trajectory& lhs, const Trajectory& rhs);

}  // namespace otr

#endif  // OTR_TRAJECTORY_HPP_
