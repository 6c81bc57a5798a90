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

#ifndef OTR_COST_FUNCTIONS_HPP_
#define OTR_COST_FUNCTIONS_HPP_

#include <span>
#include <string_view>

#include "otr/measures.hpp"

namespace otr {

enum class CostKind { kCosine, kSquaredEuclidean };

// Row t, column t' holds the cost between point t of the first measure and
// point t' of the second. Entries are nonnegative.
using CostMatrix = Matrix;

// 1 - <x, y> / (|x| |y|), clamped to [0, 2]. Returns 1 when either norm is
// below 1e-12 so that zero padding never produces NaN.
double CosineCost(std::span<const double> x, std::span<const double> y);

double SquaredEuclideanCost(std::span<const double> x,
                            std::span<const double> y);

double Cost(CostKind kind, std::span<const double> x,
            std::span<const double> y);

CostMatrix PairwiseCosts(const WeightedMeasure& a, const WeightedMeasure& b,
                         CostKind kind);

// Same as above on raw point sets (one point per row).
CostMatrix PairwiseCosts(const Matrix& a_points, const Matrix& b_points,
                         CostKind kind);

CostKind ParseCostKind(std::string_view name);
std::string_view CostKindName(CostKind kind);

}  // namespace otr

#endif  // OTR_COST_FUNCTIONS_HPP_
