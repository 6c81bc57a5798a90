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

#ifndef OTR_OT_SOLVER_HPP_
#define OTR_OT_SOLVER_HPP_

#include <cstddef>
#include <span>

#include "otr/cost_functions.hpp"

namespace otr {

// Transport plan between two discrete measures.
struct Coupling {
  Matrix plan;
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;
  double transport_cost = 0.0;  // <C, plan>
  bool converged = false;
  std::size_t iterations = 0;

  // L-infinity distance between the plan's row/column sums and the
  // prescribed marginals.
  double MarginalResidual() const;
};

struct SinkhornParams {
  double epsilon = 0.01;
  std::size_t max_iterations = 1000;
  double marginal_tolerance = 1e-6;
};

void ValidateSinkhornParams(const SinkhornParams& params);

// Entropy-regularized OT: minimizes <C, P> - epsilon * H(P) subject to the
// marginals (a, b). Iterates dual potentials with log-sum-exp updates, so
// tiny plan entries underflow to zero instead of poisoning the scaling.
// Rows/columns with zero weight are removed before iterating and come back
// as exact zero rows/columns of the plan.
//
// Stops once the row residual is within params.marginal_tolerance (columns
// are exact after each column update) or max_iterations is reached, in which
// case converged = false and the last iterate is returned.
Coupling Sinkhorn(const CostMatrix& cost, std::span<const double> a,
                  std::span<const double> b, const SinkhornParams& params);

// Largest instance (rows + columns) the exact oracle accepts.
inline constexpr std::size_t kLpOracleMaxPoints = 64;

// Exact unregularized OT via successive shortest paths on the bipartite
// transportation network (supplies a, demands b, arc costs C).
Coupling LpOracle(const CostMatrix& cost, std::span<const double> a,
                  std::span<const double> b);

}  // namespace otr

#endif  // OTR_OT_SOLVER_HPP_
