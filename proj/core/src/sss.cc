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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "moegeo/error.h"
#include "moegeo/parallel.h"
#include "moegeo/rng.h"

namespace moegeo {
namespace {

void CheckK(const UnitDictionary& dict, int k) {
  if (k < 1 || k > dict.atoms()) {
    throw Error(ErrorKind::kInvalidK, "k must lie in [1, N]");
  }
}

// Next k-subset of [0, n) in lexicographic order; false after the last one.
bool NextCombination(Support& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

std::int64_t BinomialCoefficient(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > (std::int64_t{1} << 52)) return c;  // already past any guard
  }
  return c;
}

SparseSolution BruteForceSss(const UnitDictionary& dict,
                             const Eigen::VectorXd& y, int k,
                             BruteForceStats* stats) {
  CheckK(dict, k);
  const std::int64_t count = BinomialCoefficient(dict.atoms(), k);
  if (count > 10'000'000) {
    throw Error(ErrorKind::kTooLarge,
                "C(" + std::to_string(dict.atoms()) + "," + std::to_string(k) +
                    ") exceeds the enumeration guard");
  }
  BruteForceStats local;
  std::optional<SparseSolution> best;
  Support idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  do {
    ++local.subsets;
    try {
      SparseSolution s = LeastSquaresOnSupport(dict, y, idx);
      // Strict improvement only: lexicographic order makes the first
      // minimizer the smallest support.
      if (!best || s.residual_sq < best->residual_sq) best = std::move(s);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSingularGram) throw;
      ++local.skipped_singular;
    }
  } while (NextCombination(idx, dict.atoms()));
  if (stats) *stats = local;
  if (!best) {
    throw Error(ErrorKind::kSingularGram, "every k-subset is singular");
  }
  return *std::move(best);
}

Support GreedyTopKSelect(const UnitDictionary& dict, const Eigen::VectorXd& y,
                         int k) {
  CheckK(dict, k);
  const Eigen::VectorXd scores = (dict.matrix().transpose() * y).cwiseAbs();
  return TopK(scores, k);
}

Support OmpSelect(const UnitDictionary& dict, const Eigen::VectorXd& y, int k) {
  CheckK(dict, k);
  Support selected;
  std::vector<bool> used(dict.atoms(), false);
  Eigen::VectorXd residual = y;
  for (int step = 0; step < k; ++step) {
    const Eigen::VectorXd corr = dict.matrix().transpose() * residual;
    int best = -1;
    double best_score = -1.0;
    for (int i = 0; i < dict.atoms(); ++i) {
      if (used[i]) continue;
      const double score = std::abs(corr(i));
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    selected.push_back(best);
    const SparseSolution fit = LeastSquaresOnSupport(dict, y, selected);
    residual = y - dict.Columns(fit.support) * fit.coefficients;
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

RecoveryOutcome RunRecoveryTrial(const TrialSpec& spec, std::uint64_t seed) {
  const Rng root(seed);
  const UnitDictionary dict = CoherentDictionary(
      spec.d, spec.n, spec.target_mu, spec.tol, root.Child(1).key());
  const TargetSignal y =
      PlantedSignal(dict, spec.k, root.Child(2).key(), spec.law);
  const Support& planted = *y.planted_support;

  RecoveryOutcome out;
  out.mu_measured = MutualCoherence(dict);
  out.greedy_support = GreedyTopKSelect(dict, y.vector, spec.k);
  out.omp_support = OmpSelect(dict, y.vector, spec.k);
  out.greedy_exact = out.greedy_support == planted;
  out.omp_exact = out.omp_support == planted;
  out.greedy_residual_sq =
      LeastSquaresOnSupport(dict, y.vector, out.greedy_support).residual_sq;
  if (spec.with_oracle) {
    const SparseSolution oracle = BruteForceSss(dict, y.vector, spec.k);
    out.oracle_support = oracle.support;
    out.oracle_residual_sq = oracle.residual_sq;
  }
  return out;
}

std::vector<double> DefaultMuGrid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[i] = 0.95 * i / 24.0;
  return grid;
}

BarrierCurve BarrierSweep(const SweepSpec& spec) {
  if (spec.trials < 1) {
    throw Error(ErrorKind::kInvalidConfig, "trials must be >= 1");
  }
  for (std::size_t g = 0; g < spec.mu_grid.size(); ++g) {
    const double mu = spec.mu_grid[g];
    if (!(mu >= 0.0 && mu < 1.0)) {
      throw Error(ErrorKind::kInvalidConfig, "mu_grid values must lie in [0, 1)");
    }
    if (g > 0 && !(mu > spec.mu_grid[g - 1])) {
      throw Error(ErrorKind::kInvalidConfig, "mu_grid must ascend");
    }
  }
  const std::size_t points = spec.mu_grid.size();
  const std::size_t trials = static_cast<std::size_t>(spec.trials);

  BarrierCurve curve;
  curve.mu_grid = spec.mu_grid;
  curve.k = spec.k;
  curve.trials_per_point = spec.trials;
  curve.theoretical_bound = 1.0 / (2.0 * spec.k - 1.0);
  curve.outcomes.assign(points, std::vector<RecoveryOutcome>(trials));

  ParallelFor(points * trials, spec.parallelism, [&](std::size_t unit) {
    const std::size_t g = unit / trials;
    const std::size_t t = unit % trials;
    TrialSpec trial;
    trial.d = spec.d;
    trial.n = spec.n;
    trial.k = spec.k;
    trial.target_mu = spec.mu_grid[g];
    trial.tol = spec.tol;
    trial.law = spec.law;
    curve.outcomes[g][t] =
        RunRecoveryTrial(trial, Rng::Stream(spec.seed, {t}).key());
  });

  for (std::size_t g = 0; g < points; ++g) {
    double mu_sum = 0.0, mu_max = 0.0;
    int greedy_hits = 0, omp_hits = 0;
    for (const RecoveryOutcome& o : curve.outcomes[g]) {
      mu_sum += o.mu_measured;
      mu_max = std::max(mu_max, o.mu_measured);
      greedy_hits += o.greedy_exact;
      omp_hits += o.omp_exact;
    }
    const double n = static_cast<double>(trials);
    curve.mu_measured_mean.push_back(mu_sum / n);
    curve.mu_measured_max.push_back(mu_max);
    curve.success_rate_greedy.push_back(greedy_hits / n);
    curve.success_rate_omp.push_back(omp_hits / n);
  }
  return curve;
}

void WriteBarrierCsv(std::ostream& out, const BarrierCurve& curve) {
  out << "mu_target,mu_measured_mean,success_greedy,success_omp,trials,k,bound\n";
  char buf[256];
  for (std::size_t g = 0; g < curve.mu_grid.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%d,%d,%.6g\n",
                  curve.mu_grid[g], curve.mu_measured_mean[g],
                  curve.success_rate_greedy[g], curve.success_rate_omp[g],
                  curve.trials_per_point, curve.k, curve.theoretical_bound);
    out << buf;
  }
}

std::vector<double> MovingAverage3(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(values.size() - 1, i + 1);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace moegeo
