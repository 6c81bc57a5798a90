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

#include "otr/cost_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "otr/error.hpp"

namespace otr {
namespace {

constexpr double kZeroNorm = 1e-12;

void CheckDims(std::size_t dx, std::size_t dy) {
  if (dx != dy) {
    throw Error(ErrorKind::kDimensionMismatch,
                "feature dimensions differ: " + std::to_string(dx) + " vs " +
                    std::to_string(dy));
  }
}

std::span<const double> RowOf(const Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

}  // namespace

double CosineCost(std::span<const double> x, std::span<const double> y) {
  CheckDims(x.size(), y.size());
  if (x.empty()) {
    throw Error(ErrorKind::kDimensionMismatch, "empty feature vectors");
  }
  double dot = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  const double nx = std::sqrt(xx);
  const double ny = std::sqrt(yy);
  if (nx < kZeroNorm || ny < kZeroNorm) return 1.0;
  return std::clamp(1.0 - dot / (nx * ny), 0.0, 2.0);
}

double SquaredEuclideanCost(std::span<const double> x,
                            std::span<const double> y) {
  CheckDims(x.size(), y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    sum += diff * diff;
  }
  return sum;
}

double Cost(CostKind kind, std::span<const double> x,
            std::span<const double> y) {
  return kind == CostKind::kCosine ? CosineCost(x, y)
                                   : SquaredEuclideanCost(x, y);
}

CostMatrix PairwiseCosts(const Matrix& a_points, const Matrix& b_points,
                         CostKind kind) {
  CheckDims(static_cast<std::size_t>(a_points.cols()),
            static_cast<std::size_t>(b_points.cols()));
  const Eigen::Index n = a_points.rows();
  const Eigen::Index m = b_points.rows();
  CostMatrix costs(n, m);
  if (kind == CostKind::kSquaredEuclidean) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        costs(i, j) = SquaredEuclideanCost(RowOf(a_points, i), RowOf(b_points, j));
      }
    }
    return costs;
  }

  if (a_points.cols() == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "empty feature vectors");
  }
  // Norms are hoisted out of the double loop; each entry still reduces in a
  // fixed order so results do not depend on how rows are scheduled.
  auto norms = [](const Matrix& pts) {
    std::vector<double> out(static_cast<std::size_t>(pts.rows()));
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < pts.cols(); ++k) s += pts(i, k) * pts(i, k);
      out[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
    return out;
  };
  const std::vector<double> na = norms(a_points);
  const std::vector<double> nb = norms(b_points);
  const Eigen::Index d = a_points.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* x = a_points.data() + i * d;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double nx = na[static_cast<std::size_t>(i)];
      const double ny = nb[static_cast<std::size_t>(j)];
      if (nx < kZeroNorm || ny < kZeroNorm) {
        costs(i, j) = 1.0;
        continue;
      }
      const double* y = b_points.data() + j * d;
      double dot = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) dot += x[k] * y[k];
      costs(i, j) = std::clamp(1.0 - dot / (nx * ny), 0.0, 2.0);
    }
  }
  return costs;
}

CostMatrix PairwiseCosts(const WeightedMeasure& a, const WeightedMeasure& b,
                         CostKind kind) {
  return PairwiseCosts(a.points, b.points, kind);
}

CostKind ParseCostKind(std::string_view name) {
  if (name == "cosine") return CostKind::kCosine;
  if (name == "sqeuclidean" || name == "squared_euclidean") {
    return CostKind::kSquaredEuclidean;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown cost '" + std::string(name) + "'");
}

std::string_view CostKindName(CostKind kind) {
  return kind == CostKind::kCosine ? "cosine" : "sqeuclidean";
}

}  // namespace otr
