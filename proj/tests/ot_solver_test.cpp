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

#include "otr/ot_solver.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "otr/error.hpp"
#include "test_util.hpp"

namespace otr {
namespace {

CostMatrix Swap2() { return (CostMatrix(2, 2) << 0, 1, 1, 0).finished(); }

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no otr::Error thrown";
  return ErrorKind::kIoError;
}

TEST(SinkhornTest, OneByOne) {
  const CostMatrix c = (CostMatrix(1, 1) << 0.7).finished();
  const Coupling p = Sinkhorn(c, std::vector<double>{1.0}, std::vector<double>{1.0}, {});
  EXPECT_TRUE(p.converged);
  EXPECT_DOUBLE_EQ(p.plan(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.transport_cost, 0.7);
}

TEST(SinkhornTest, TwoByTwoPermutation) {
  SinkhornParams params;
  params.epsilon = 0.01;
  const auto w = testing::Uniform(2);
  const Coupling p = Sinkhorn(Swap2(), w, w, params);
  EXPECT_TRUE(p.converged);
  const Matrix expected = (Matrix(2, 2) << 0.5, 0, 0, 0.5).finished();
  EXPECT_LE((p.plan - expected).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT(p.transport_cost, 1e-2);
}

TEST(SinkhornTest, CostDecreasesTowardLpOptimumAsEpsilonShrinks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 4, 3),
                                       testing::RandomPoints(rng, 6, 3),
                                       CostKind::kCosine);
    const auto a = testing::Uniform(4);
    const auto b = testing::Uniform(6);
    const double exact = LpOracle(c, a, b).transport_cost;
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 0.1, 0.01}) {
      SinkhornParams params;
      params.epsilon = eps;
      params.max_iterations = 100000;
      params.marginal_tolerance = 1e-10;
      const Coupling p = Sinkhorn(c, a, b, params);
      // At eps = 0.01 the residual on these instances decays only like 1/k,
      // so the cap is usually hit around 1e-6.
      const double slack = 2.0 * c.maxCoeff() * p.MarginalResidual() + 1e-12;
      ASSERT_LE(p.MarginalResidual(), 1e-5) << "eps " << eps;
      EXPECT_LE(p.transport_cost, previous + slack);
      EXPECT_GE(p.transport_cost, exact - slack);
      previous = p.transport_cost;
    }
    EXPECT_LT(previous - exact, 0.05 * c.maxCoeff());
  }
}

TEST(SinkhornTest, MarginalsAndDominanceOnRandomInstances) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = size(rng);
    const int m = size(rng);
    const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, n, 4),
                                       testing::RandomPoints(rng, m, 4),
                                       CostKind::kCosine);
    const auto a = testing::RandomWeights(rng, static_cast<std::size_t>(n));
    const auto b = testing::RandomWeights(rng, static_cast<std::size_t>(m));
    SinkhornParams params;
    params.max_iterations = 50000;
    const Coupling p = Sinkhorn(c, a, b, params);
    ASSERT_TRUE(p.converged);
    EXPECT_LE(p.MarginalResidual(), params.marginal_tolerance);
    EXPECT_GE(p.plan.minCoeff(), 0.0);
    // The entropic plan only meets the marginals to within the tolerance, so
    // it may undercut the exact optimum by about max C * residual.
    EXPECT_GE(p.transport_cost, LpOracle(c, a, b).transport_cost -
                                    2.0 * c.maxCoeff() * params.marginal_tolerance);
  }
}

TEST(SinkhornTest, SmallerEpsilonNeverRaisesCost) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 5, 3),
                                       testing::RandomPoints(rng, 5, 3),
                                       CostKind::kSquaredEuclidean);
    const auto w = testing::Uniform(5);
    SinkhornParams coarse;
    coarse.epsilon = 0.5;
    coarse.max_iterations = 100000;
    coarse.marginal_tolerance = 1e-12;
    SinkhornParams fine = coarse;
    fine.epsilon = 0.05;
    EXPECT_LE(Sinkhorn(c, w, w, fine).transport_cost,
              Sinkhorn(c, w, w, coarse).transport_cost + 1e-9);
  }
}

TEST(SinkhornTest, ZeroDiagonalCostIsBoundedByEntropy) {
  std::mt19937_64 rng(14);
  for (int n : {2, 5, 10, 20}) {
    const Matrix pts = testing::RandomPoints(rng, n, 3);
    const CostMatrix c = PairwiseCosts(pts, pts, CostKind::kCosine);
    const auto w = testing::Uniform(static_cast<std::size_t>(n));
    SinkhornParams params;
    params.max_iterations = 100000;
    const Coupling p = Sinkhorn(c, w, w, params);
    ASSERT_TRUE(p.converged);
    EXPECT_LE(p.transport_cost, params.epsilon * std::log(n) + 1e-6);
  }
}

TEST(SinkhornTest, IsDeterministic) {
  std::mt19937_64 rng(15);
  const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 30, 5),
                                     testing::RandomPoints(rng, 40, 5),
                                     CostKind::kCosine);
  const auto a = testing::Uniform(30);
  const auto b = testing::Uniform(40);
  const Coupling p1 = Sinkhorn(c, a, b, {});
  const Coupling p2 = Sinkhorn(c, a, b, {});
  EXPECT_EQ(p1.plan, p2.plan);
  EXPECT_EQ(p1.transport_cost, p2.transport_cost);
  EXPECT_EQ(p1.iterations, p2.iterations);
}

TEST(SinkhornTest, ZeroWeightRowsAndColumnsCarryNoMass) {
  std::mt19937_64 rng(16);
  const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 4, 2),
                                     testing::RandomPoints(rng, 3, 2),
                                     CostKind::kCosine);
  const std::vector<double> a{0.5, 0.0, 0.5, 0.0};
  const std::vector<double> b{0.0, 0.25, 0.75};
  const Coupling p = Sinkhorn(c, a, b, {});
  EXPECT_TRUE(p.converged);
  EXPECT_TRUE(p.plan.row(1).isZero(0.0));
  EXPECT_TRUE(p.plan.row(3).isZero(0.0));
  EXPECT_TRUE(p.plan.col(0).isZero(0.0));
  EXPECT_LE(p.MarginalResidual(), 1e-6);
}

TEST(SinkhornTest, TinyEpsilonDoesNotUnderflow) {
  std::mt19937_64 rng(17);
  const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 6, 3),
                                     testing::RandomPoints(rng, 6, 3),
                                     CostKind::kCosine);
  const auto w = testing::Uniform(6);
  SinkhornParams params;
  params.epsilon = 1e-4;
  params.max_iterations = 200000;
  const Coupling p = Sinkhorn(c, w, w, params);
  EXPECT_TRUE(p.plan.allFinite());
  EXPECT_TRUE(p.converged);
  EXPECT_NEAR(p.transport_cost, LpOracle(c, w, w).transport_cost, 1e-3);
}

TEST(SinkhornTest, NonConvergenceIsReportedNotThrown) {
  std::mt19937_64 rng(18);
  const CostMatrix c = PairwiseCosts(testing::RandomPoints(rng, 20, 3),
                                     testing::RandomPoints(rng, 20, 3),
                                     CostKind::kCosine);
  const auto w = testing::Uniform(20);
  SinkhornParams params;
  params.epsilon = 0.001;
  params.max_iterations = 2;
  const Coupling p = Sinkhorn(c, w, w, params);
  EXPECT_FALSE(p.converged);
  EXPECT_EQ(p.iterations, 2u);
  EXPECT_TRUE(p.plan.allFinite());
}

TEST(SinkhornTest, InputErrors) {
  const CostMatrix c = Swap2();
  const auto w = testing::Uniform(2);
  EXPECT_EQ(KindOf([&] { Sinkhorn(c, w, std::vector<double>{0.7, 0.7}, {}); }),
            ErrorKind::kMarginalMismatch);
  EXPECT_EQ(KindOf([&] { Sinkhorn(c, std::vector<double>{1.5, -0.5}, w, {}); }),
            ErrorKind::kNegativeWeight);
  CostMatrix bad = c;
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(KindOf([&] { Sinkhorn(bad, w, w, {}); }), ErrorKind::kNonFiniteCost);
  EXPECT_EQ(KindOf([&] { Sinkhorn(c, testing::Uniform(3), w, {}); }),
            ErrorKind::kDimensionMismatch);
  SinkhornParams params;
  params.epsilon = 0.0;
  EXPECT_EQ(KindOf([&] { Sinkhorn(c, w, w, params); }), ErrorKind::kInvalidConfig);
}

TEST(LpOracleTest, ZeroCostMatching) {
  const auto w = testing::Uniform(2);
  const Coupling p = LpOracle(Swap2(), w, w);
  const Matrix expected = (Matrix(2, 2) << 0.5, 0, 0, 0.5).finished();
  EXPECT_EQ(p.plan, expected);
  EXPECT_EQ(p.transport_cost, 0.0);
}

TEST(LpOracleTest, MatchesPermutationEnumeration) {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const CostMatrix c = testing::RandomPoints(rng, n, n, 0.0, 1.0);
      const auto w = testing::Uniform(static_cast<std::size_t>(n));
      const Coupling p = LpOracle(c, w, w);
      EXPECT_NEAR(p.transport_cost, testing::BruteForcePermutationCost(c), 1e-12);
      EXPECT_LE(p.MarginalResidual(), 1e-12);
    }
  }
}

TEST(LpOracleTest, SingleSupplySplitsByDemand) {
  const CostMatrix c = (CostMatrix(1, 2) << 0.3, 0.9).finished();
  const Coupling p = LpOracle(c, std::vector<double>{1.0}, std::vector<double>{0.5, 0.5});
  EXPECT_DOUBLE_EQ(p.plan(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p.plan(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(p.transport_cost, 0.5 * (0.3 + 0.9));
}

TEST(LpOracleTest, NonUniformMarginalsAreFeasible) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const CostMatrix c = testing::RandomPoints(rng, 5, 7, 0.0, 2.0);
    const auto a = testing::RandomWeights(rng, 5);
    const auto b = testing::RandomWeights(rng, 7);
    const Coupling p = LpOracle(c, a, b);
    EXPECT_LE(p.MarginalResidual(), 1e-12);
    EXPECT_GE(p.plan.minCoeff(), 0.0);
    // A basic optimal solution has at most n + m - 1 nonzero entries.
    EXPECT_LE((p.plan.array() > 1e-15).count(), 11);
  }
}

TEST(LpOracleTest, Errors) {
  const std::size_t big = kLpOracleMaxPoints;
  const CostMatrix c = CostMatrix::Zero(static_cast<Eigen::Index>(big), 1);
  EXPECT_EQ(KindOf([&] { LpOracle(c, testing::Uniform(big), testing::Uniform(1)); }),
            ErrorKind::kTooLarge);
  EXPECT_EQ(KindOf([&] {
              LpOracle(Swap2(), testing::Uniform(2), std::vector<double>{0.9, 0.3});
            }),
            ErrorKind::kMarginalMismatch);
}

}  // namespace
}  // namespace otr
