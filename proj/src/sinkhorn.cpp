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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otr/error.hpp"
#include "otr/ot_solver.hpp"

namespace otr {

double Coupling::MarginalResidual() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    worst = std::max(worst, std::abs(plan.row(i).sum() -
                                     row_marginal[static_cast<std::size_t>(i)]));
  }
  for (Eigen::Index j = 0; j < plan.cols(); ++j) {
    worst = std::max(worst, std::abs(plan.col(j).sum() -
                                     col_marginal[static_cast<std::size_t>(j)]));
  }
  return worst;
}

void ValidateSinkhornParams(const SinkhornParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw Error(ErrorKind::kInvalidConfig, "epsilon must be positive");
  }
  if (params.max_iterations < 1) {
    throw Error(ErrorKind::kInvalidConfig, "max_iterations must be >= 1");
  }
  if (!(params.marginal_tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig,
                "marginal_tolerance must be positive");
  }
}

namespace detail {

void CheckTransportInputs(const CostMatrix& cost, std::span<const double> a,
                          std::span<const double> b) {
  if (static_cast<std::size_t>(cost.rows()) != a.size() ||
      static_cast<std::size_t>(cost.cols()) != b.size() || a.empty() ||
      b.empty()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "cost matrix is " + std::to_string(cost.rows()) + "x" +
                    std::to_string(cost.cols()) + " but marginals have " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " entries");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorKind::kNonFiniteCost, "cost matrix has non-finite entries");
  }
  auto total = [](std::span<const double> w) {
    double s = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::kNegativeWeight,
                    "marginal weights must be finite and nonnegative");
      }
      s += x;
    }
    return s;
  };
  const double sa = total(a);
  const double sb = total(b);
  if (std::abs(sa - sb) > 1e-9 || std::abs(sa - 1.0) > 1e-9) {
    throw Error(ErrorKind::kMarginalMismatch,
                "marginals sum to " + std::to_string(sa) + " and " +
                    std::to_string(sb));
  }
}

}  // namespace detail

namespace {

using Array = Eigen::ArrayXd;
using RowMajorArray =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Scalings outside [1/kAbsorbBound, kAbsorbBound] are folded into the
// potentials and the kernel is rebuilt.
constexpr double kAbsorbBound = 1e30;

std::vector<Eigen::Index> Support(std::span<const double> w) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) idx.push_back(static_cast<Eigen::Index>(i));
  }
  return idx;
}

// Dual potentials (in units of epsilon) on the active support, and the
// Gibbs kernel exp(f_i + g_j - C_ij / eps) they induce. Sinkhorn scalings
// u, v act on top of the kernel; Absorb() moves them into f, g.
class StabilizedSolver {
 public:
  StabilizedSolver(RowMajorArray neg_scaled, Array a, Array b)
      : neg_scaled_(std::move(neg_scaled)),
        a_(std::move(a)),
        b_(std::move(b)),
        f_(Array::Zero(a_.size())),
        g_(Array::Zero(b_.size())),
        u_(Array::Ones(a_.size())),
        v_(Array::Ones(b_.size())) {}

  // Exact log-sum-exp half steps from the current potentials. Never
  // underflows, whatever the scale of C / eps.
  void LogRowUpdate() {
    for (Eigen::Index i = 0; i < f_.size(); ++i) {
      const auto row = neg_scaled_.row(i).transpose() + g_;
      const double peak = row.maxCoeff();
      f_(i) = std::log(a_(i)) - (peak + std::log((row - peak).exp().sum()));
    }
  }
  void LogColUpdate() {
    for (Eigen::Index j = 0; j < g_.size(); ++j) {
      const auto col = neg_scaled_.col(j) + f_;
      const double peak = col.maxCoeff();
      g_(j) = std::log(b_(j)) - (peak + std::log((col - peak).exp().sum()));
    }
  }

  void RebuildKernel() {
    kernel_ = ((neg_scaled_.colwise() + f_).rowwise() + g_.transpose()).exp();
    u_.setOnes();
    v_.setOnes();
  }

  void Absorb() {
    f_ += u_.log();
    g_ += v_.log();
    RebuildKernel();
  }

  // Row sums of the current plan diag(u) K diag(v), via K v.
  const Array& KernelTimesV() {
    kv_ = (kernel_.matrix() * v_.matrix()).array();
    return kv_;
  }

  double RowResidual() const { return (u_ * kv_ - a_).abs().maxCoeff(); }

  // One Sinkhorn sweep (rows, then columns). Falls back to exact log-domain
  // updates if a kernel row or column has underflowed.
  void Sweep() {
    if ((kv_ > 0.0).all()) {
      u_ = a_ / kv_;
    } else {
      Absorb();
      LogRowUpdate();
      RebuildKernel();
    }
    ktu_ = (kernel_.matrix().transpose() * u_.matrix()).array();
    if ((ktu_ > 0.0).all()) {
      v_ = b_ / ktu_;
    } else {
      Absorb();
      LogColUpdate();
      RebuildKernel();
    }
    const auto out_of_range = [](const Array& s) {
      return (s > kAbsorbBound).any() || (s < 1.0 / kAbsorbBound).any();
    };
    if (out_of_range(u_) || out_of_range(v_)) Absorb();
  }

  // Entry (i, j) of the plan.
  double Plan(Eigen::Index i, Eigen::Index j) const {
    return u_(i) * kernel_(i, j) * v_(j);
  }

 private:
  RowMajorArray neg_scaled_;  // -C / eps on the active support
  Array a_;
  Array b_;
  Array f_;
  Array g_;
  Array u_;
  Array v_;
  RowMajorArray kernel_;
  Array kv_;
  Array ktu_;
};

}  // namespace

Coupling Sinkhorn(const CostMatrix& cost, std::span<const double> a,
                  std::span<const double> b, const SinkhornParams& params) {
  ValidateSinkhornParams(params);
  detail::CheckTransportInputs(cost, a, b);

  const std::vector<Eigen::Index> rows = Support(a);
  const std::vector<Eigen::Index> cols = Support(b);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());

  RowMajorArray neg_scaled(n, m);
  Array wa(n);
  Array wb(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    wa(i) = a[static_cast<std::size_t>(r)];
    for (Eigen::Index j = 0; j < m; ++j) {
      neg_scaled(i, j) = -cost(r, cols[static_cast<std::size_t>(j)]) / params.epsilon;
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    wb(j) = b[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
  }

  StabilizedSolver solver(std::move(neg_scaled), std::move(wa), std::move(wb));
  // First sweep in the log domain so the initial kernel is well scaled even
  // when C / eps is in the thousands.
  solver.LogRowUpdate();
  solver.LogColUpdate();
  solver.RebuildKernel();

  Coupling out;
  std::size_t iter = 1;
  for (;; ++iter) {
    solver.KernelTimesV();
    if (solver.RowResidual() <= params.marginal_tolerance) {
      out.converged = true;
      break;
    }
    if (iter >= params.max_iterations) break;
    solver.Sweep();
  }
  out.iterations = iter;

  out.plan = Matrix::Zero(cost.rows(), cost.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      out.plan(r, cols[static_cast<std::size_t>(j)]) = solver.Plan(i, j);
    }
  }
  out.row_marginal.assign(a.begin(), a.end());
  out.col_marginal.assign(b.begin(), b.end());
  double total = 0.0;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      row += cost(i, j) * out.plan(i, j);
    }
    total += row;
  }
  out.transport_cost = total;
  return out;
}

}  // namespace otr
