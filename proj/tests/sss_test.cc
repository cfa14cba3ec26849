// Copyright 2026 The moegeo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "moegeo/sss.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "moegeo/dictgen.h"
#include "moegeo/error.h"
#include "support/oracles.h"

namespace moegeo {
namespace {

TEST(BruteForceTest, ExactSparseSignalRecovered) {
  const UnitDictionary d = CoherentDictionary(20, 10, 0.3, 0.01, 1);
  const TargetSignal y = PlantedSignal(d, 3, 2);
  BruteForceStats stats;
  const SparseSolution s = BruteForceSss(d, y.vector, 3, &stats);
  EXPECT_EQ(s.support, *y.planted_support);
  EXPECT_NEAR(s.residual_sq, 0.0, 1e-10);
  EXPECT_EQ(stats.subsets, 120);
}

TEST(BruteForceTest, MatchesIndependentEnumeration) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const Eigen::MatrixXd m = oracle::GaussianMatrix(rng, 5, 6);
    const UnitDictionary d = NormalizeColumns(m);
    const Eigen::VectorXd y = oracle::GaussianVector(rng, 5);
    EXPECT_EQ(BruteForceSss(d, y, 2).support, oracle::ExhaustiveSupport(d.matrix(), y, 2));
  }
}

TEST(BruteForceTest, OrthonormalEqualsGreedy) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const UnitDictionary d = RandomOrthonormalDictionary(12, 10, rng.NextU64());
    const Eigen::VectorXd y = oracle::GaussianVector(rng, 12);
    const int k = 1 + t % 4;
    EXPECT_EQ(BruteForceSss(d, y, k).support, GreedyTopKSelect(d, y, k));
  }
}

TEST(BruteForceTest, GuardsCombinatorialSize) {
  const UnitDictionary d = RandomOrthonormalDictionary(64, 64, 1);
  EXPECT_THROW(BruteForceSss(d, Eigen::VectorXd::Ones(64), 8), Error);
}

TEST(BinomialTest, Values) {
  EXPECT_EQ(BinomialCoefficient(64, 6), 74974368);
  EXPECT_EQ(BinomialCoefficient(5, 0), 1);
  EXPECT_EQ(BinomialCoefficient(5, 5), 1);
  EXPECT_EQ(BinomialCoefficient(3, 4), 0);
}

TEST(GreedyTest, ExactAtomAndTies) {
  const UnitDictionary d = RandomOrthonormalDictionary(8, 6, 2);
  EXPECT_EQ(GreedyTopKSelect(d, d.column(3), 1), (Support{3}));
  const Eigen::VectorXd tied = d.column(1) - d.column(4) + 0.5 * d.column(0);
  EXPECT_EQ(GreedyTopKSelect(d, tied, 1), (Support{1}));
  EXPECT_EQ(GreedyTopKSelect(d, tied, 2), (Support{1, 4}));
}

TEST(OmpTest, OrthonormalMatchesGreedy) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const UnitDictionary d = RandomOrthonormalDictionary(10, 8, rng.NextU64());
    const Eigen::VectorXd y = oracle::GaussianVector(rng, 10);
    const int k = 1 + t % 5;
    EXPECT_EQ(OmpSelect(d, y, k), GreedyTopKSelect(d, y, k));
  }
}

TEST(OmpTest, KOneEqualsGreedy) {
  Rng rng(6);
  const UnitDictionary d = NormalizeColumns(oracle::GaussianMatrix(rng, 10, 20));
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd y = oracle::GaussianVector(rng, 10);
    EXPECT_EQ(OmpSelect(d, y, 1), GreedyTopKSelect(d, y, 1));
  }
}

TEST(OmpTest, RecoversBelowIncoherenceBound) {
  for (int t = 0; t < 20; ++t) {
    const UnitDictionary d = CoherentDictionary(60, 30, 0.15, 0.01, 100 + t);
    const TargetSignal y = PlantedSignal(d, 3, 200 + t);
    EXPECT_EQ(OmpSelect(d, y.vector, 3), *y.planted_support);
  }
}

TEST(RecoveryTrialTest, GuaranteeRegionAndOracleDominance) {
  TrialSpec spec;
  spec.d = 40;
  spec.n = 20;
  spec.k = 3;
  spec.with_oracle = true;
  spec.tol = 0.01;
  for (double mu : {0.0, 0.15, 0.5, 0.8}) {
    spec.target_mu = mu;
    for (int t = 0; t < 10; ++t) {
      const RecoveryOutcome o = RunRecoveryTrial(spec, 1000 + t);
      ASSERT_TRUE(o.oracle_residual_sq.has_value());
      EXPECT_GE(o.greedy_residual_sq, *o.oracle_residual_sq - 1e-9);
      EXPECT_NEAR(o.mu_measured, mu, 0.01);
      if (o.mu_measured < 1.0 / (2 * spec.k - 1)) EXPECT_TRUE(o.greedy_exact);
    }
  }
}

TEST(BarrierSweepTest, SmallSweepProperties) {
  SweepSpec spec;
  spec.d = 48;
  spec.n = 24;
  spec.k = 3;
  spec.mu_grid = {0.0, 0.1, 0.19, 0.4, 0.7, 0.9};
  spec.trials = 40;
  const BarrierCurve curve = BarrierSweep(spec);
  EXPECT_DOUBLE_EQ(curve.theoretical_bound, 0.2);
  ASSERT_EQ(curve.success_rate_greedy.size(), 6u);
  for (std::size_t g = 0; g < 6; ++g) {
    EXPECT_GE(curve.success_rate_greedy[g], 0.0);
    EXPECT_LE(curve.success_rate_greedy[g], 1.0);
    EXPECT_GE(curve.success_rate_omp[g], curve.success_rate_greedy[g] - 0.02);
    for (const RecoveryOutcome& o : curve.outcomes[g]) {
      if (o.mu_measured < curve.theoretical_bound) EXPECT_TRUE(o.greedy_exact);
    }
  }
  const std::vector<double> smooth = MovingAverage3(curve.success_rate_greedy);
  for (std::size_t g = 1; g < smooth.size(); ++g) EXPECT_LE(smooth[g], smooth[g - 1] + 1e-12);
}

TEST(BarrierSweepTest, BoundForK6) {
  SweepSpec spec;
  spec.mu_grid = {0.0};
  spec.trials = 1;
  EXPECT_NEAR(BarrierSweep(spec).theoretical_bound, 1.0 / 11.0, 1e-15);
}

TEST(BarrierSweepTest, IndependentOfParallelism) {
  SweepSpec spec;
  spec.d = 32;
  spec.n = 16;
  spec.k = 3;
  spec.mu_grid = {0.1, 0.5};
  spec.trials = 12;
  spec.parallelism = 1;
  std::stringstream a, b;
  WriteBarrierCsv(a, BarrierSweep(spec));
  spec.parallelism = 4;
  WriteBarrierCsv(b, BarrierSweep(spec));
  EXPECT_EQ(a.str(), b.str());
}

TEST(BarrierSweepTest, RejectsDescendingGrid) {
  SweepSpec spec;
  spec.mu_grid = {0.5, 0.2};
  EXPECT_THROW(BarrierSweep(spec), Error);
}

TEST(BarrierSweepTest, DefaultGrid) {
  const std::vector<double> g = DefaultMuGrid();
  ASSERT_EQ(g.size(), 25u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 0.95, 1e-15);
}

TEST(MovingAverageTest, TruncatedWindow) {
  const std::vector<double> s = MovingAverage3({3.0, 0.0, 3.0, 6.0});
  EXPECT_DOUBLE_EQ(s[0], 1.5);
  EXPECT_DOUBLE_EQ(s[1], 2.0);
  EXPECT_DOUBLE_EQ(s[2], 3.0);
  EXPECT_DOUBLE_EQ(s[3], 4.5);
}

}  // namespace
}  // namespace moegeo
