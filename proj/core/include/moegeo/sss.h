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
#ifndef MOEGEO_SSS_H_
#define MOEGEO_SSS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "moegeo/dictgen.h"
#include "moegeo/dictionary.h"

namespace moegeo {

struct BruteForceStats {
  std::int64_t subsets = 0;
  std::int64_t skipped_singular = 0;
};

// Exhaustive minimizer of ||y - E alpha||^2 subject to ||alpha||_0 <= k over
// all k-subsets. Ties keep the lexicographically smallest support. Singular
// subsets are skipped and counted. Throws TooLarge when C(N, k) > 1e7.
SparseSolution BruteForceSss(const UnitDictionary& dict,
                             const Eigen::VectorXd& y, int k,
                             BruteForceStats* stats = nullptr);

// One-shot router rule: the k largest |<E_i, y>|, ties toward lower index.
Support GreedyTopKSelect(const UnitDictionary& dict, const Eigen::VectorXd& y,
                         int k);

// Orthogonal Matching Pursuit for exactly k steps with the same tie rule.
Support OmpSelect(const UnitDictionary& dict, const Eigen::VectorXd& y, int k);

std::int64_t BinomialCoefficient(int n, int k);

struct RecoveryOutcome {
  double mu_measured = 0.0;
  Support greedy_support;
  Support omp_support;
  std::optional<Support> oracle_support;
  bool greedy_exact = false;
  bool omp_exact = false;
  double greedy_residual_sq = 0.0;
  std::optional<double> oracle_residual_sq;
};

struct TrialSpec {
  int d = 128;
  int n = 64;
  int k = 6;
  double target_mu = 0.0;
  double tol = 0.005;
  CoefficientLaw law = CoefficientLaw::kRademacher;
  bool with_oracle = false;
};

// One (dictionary, planted signal) draw scored by both selectors.
RecoveryOutcome RunRecoveryTrial(const TrialSpec& spec, std::uint64_t seed);

struct SweepSpec {
  int d = 128;
  int n = 64;
  int k = 6;
  std::vector<double> mu_grid;
  int trials = 200;
  double tol = 0.005;
  std::uint64_t seed = 42;
  CoefficientLaw law = CoefficientLaw::kRademacher;
  int parallelism = 1;
};

// Default coherence grid: 25 evenly spaced points on [0, 0.95].
std::vector<double> DefaultMuGrid();

struct BarrierCurve {
  std::vector<double> mu_grid;
  std::vector<double> mu_measured_mean;
  std::vector<double> mu_measured_max;
  std::vector<double> success_rate_greedy;
  std::vector<double> success_rate_omp;
  int trials_per_point = 0;
  int k = 0;
  double theoretical_bound = 0.0;  // 1 / (2k - 1)
  // outcomes[g][t] for grid point g and trial t.
  std::vector<std::vector<RecoveryOutcome>> outcomes;
};

// Trial t draws from the stream (seed, t) at every grid point, so all grid
// points share their random draws and the curve does not depend on the
// parallelism degree.
BarrierCurve BarrierSweep(const SweepSpec& spec);

// barrier.csv: mu_target,mu_measured_mean,success_greedy,success_omp,trials,k,bound
void WriteBarrierCsv(std::ostream& out, const BarrierCurve& curve);

// Centered 3-point moving average (window truncated at the ends).
std::vector<double> MovingAverage3(const std::vector<double>& values);

}  // namespace moegeo

#endif  // MOEGEO_SSS_H_
