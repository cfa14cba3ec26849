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
#include "moegeo/diversity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moegeo/error.h"
#include "moegeo/rng.h"
#include "moegeo/sss.h"

namespace moegeo {
namespace {

constexpr double kNegativePivotLimit = -1e-9;

void CheckIndex(const Kernel& kernel, int i) {
  if (i < 0 || i >= kernel.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "kernel index " + std::to_string(i) + " out of range");
  }
}

}  // namespace

Kernel::Kernel(Eigen::MatrixXd gram, double epsilon)
    : gram_(std::move(gram)), epsilon_(epsilon) {
  if (gram_.rows() != gram_.cols() || gram_.rows() < 1) {
    throw Error(ErrorKind::kInvalidShape, "kernel must be square");
  }
  if (!(epsilon_ >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  }
  if (!gram_.allFinite()) {
    throw Error(ErrorKind::kNonFinite, "kernel has non-finite entries");
  }
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (std::abs(gram_(i, i) - 1.0) > 1e-10) {
      throw Error(ErrorKind::kNotPsd, "kernel diagonal must be 1");
    }
    for (int j = 0; j < i; ++j) {
      if (std::abs(gram_(i, j) - gram_(j, i)) > 1e-10) {
        throw Error(ErrorKind::kNotPsd, "kernel is not symmetric");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_,
                                                     Eigen::EigenvaluesOnly);
  const double slack = std::max(1e-8 * epsilon_, 1e-10);
  if (eig.eigenvalues().minCoeff() < -slack) {
    throw Error(ErrorKind::kNotPsd,
                "kernel has eigenvalue " +
                    std::to_string(eig.eigenvalues().minCoeff()));
  }
}

Kernel Kernel::FromFeatures(const UnitDictionary& features, double epsilon) {
  Eigen::MatrixXd gram = features.matrix().transpose() * features.matrix();
  // Symmetrize and pin the diagonal; the products are unit up to rounding.
  gram = 0.5 * (gram + gram.transpose()).eval();
  gram.diagonal().setOnes();
  return Kernel(std::move(gram), epsilon);
}

Eigen::MatrixXd Kernel::Regularized(const Support& s) const {
  const int m = static_cast<int>(s.size());
  Eigen::MatrixXd sub(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) sub(i, j) = gram_(s[i], s[j]);
    sub(i, i) += epsilon_;
  }
  return sub;
}

double LogDetSubset(const Kernel& kernel, const Support& s) {
  if (s.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "log det of an empty subset");
  }
  for (int i : s) CheckIndex(kernel, i);
  const CholeskyResult chol = FactorCholesky(kernel.Regularized(s));
  if (chol.broke_down) {
    if (chol.pivots(chol.breakdown_index) < kNegativePivotLimit) {
      throw Error(ErrorKind::kNotPsd, "negative pivot in log det");
    }
    return -std::numeric_limits<double>::infinity();
  }
  return LogDetFromPivots(chol);
}

double MarginalGain(const Kernel& kernel, const Support& s, int e) {
  CheckIndex(kernel, e);
  if (std::find(s.begin(), s.end(), e) != s.end()) {
    throw Error(ErrorKind::kInvalidArgument, "element already in the set");
  }
  const double self = kernel.gram()(e, e) + kernel.epsilon();
  if (s.empty()) return std::log(self);
  for (int i : s) CheckIndex(kernel, i);
  const CholeskyResult chol = FactorCholesky(kernel.Regularized(s));
  if (chol.broke_down) {
    throw Error(ErrorKind::kNotPsd, "context set is not positive definite");
  }
  Eigen::VectorXd cross(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) cross(static_cast<int>(i)) = kernel.gram()(s[i], e);
  const double schur = self - cross.dot(CholeskySolve(chol, cross));
  if (schur < kNegativePivotLimit) {
    throw Error(ErrorKind::kNotPsd, "negative Schur complement");
  }
  if (schur <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(schur);
}

double ShiftedLogDet(const Kernel& kernel, const Support& s) {
  if (s.empty()) return 0.0;
  return LogDetSubset(kernel, s) -
         static_cast<double>(s.size()) * std::log(kernel.epsilon());
}

Support DppGreedySelect(const Kernel& kernel, int k) {
  if (k < 0 || k > kernel.size()) {
    throw Error(ErrorKind::kInvalidK, "k must lie in [0, N]");
  }
  Support selected;
  std::vector<bool> used(kernel.size(), false);
  for (int round = 0; round < k; ++round) {
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < kernel.size(); ++e) {
      if (used[e]) continue;
      const double gain = MarginalGain(kernel, selected, e);
      if (best < 0 || gain > best_gain) {
        best = e;
        best_gain = gain;
      }
    }
    used[best] = true;
    selected.push_back(best);
    std::sort(selected.begin(), selected.end());
  }
  return selected;
}

Support DppExhaustiveSelect(const Kernel& kernel, int k) {
  if (k < 1 || k > kernel.size()) {
    throw Error(ErrorKind::kInvalidK, "k must lie in [1, N]");
  }
  if (BinomialCoefficient(kernel.size(), k) > 10'000'000) {
    throw Error(ErrorKind::kTooLarge, "exhaustive DPP search too large");
  }
  Support idx(k), best;
  for (int i = 0; i < k; ++i) idx[i] = i;
  double best_value = -std::numeric_limits<double>::infinity();
  const int n = kernel.size();
  while (true) {
    const double v = LogDetSubset(kernel, idx);
    if (best.empty() || v > best_value) {
      best_value = v;
      best = idx;
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

SubmodularityReport SubmodularityAudit(const Kernel& kernel, int samples,
                                       std::uint64_t seed) {
  if (samples < 1) {
    throw Error(ErrorKind::kInvalidArgument, "samples must be >= 1");
  }
  const int n = kernel.size();
  if (n < 2) {
    throw Error(ErrorKind::kInvalidShape, "audit needs at least two elements");
  }
  const double log_eps = std::log(kernel.epsilon());
  SubmodularityReport report;
  report.samples = samples;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Rng rng = Rng::Stream(seed, {static_cast<std::uint64_t>(s)});
    // |B| in [0, n-1] leaves room for e; A keeps each element of B w.p. 1/2.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.Shuffle(perm);
    const int b_size = static_cast<int>(rng.Index(static_cast<std::uint64_t>(n)));
    const int e = perm[b_size];
    Support b(perm.begin(), perm.begin() + b_size);
    Support a;
    for (int x : b) {
      if (rng.Uniform() < 0.5) a.push_back(x);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double gain_a = MarginalGain(kernel, a, e);
    const double gain_b = MarginalGain(kernel, b, e);
    const double diminishing = gain_a - gain_b;
    const double monotone = gain_b - log_eps;
    const double margin = std::min(diminishing, monotone);
    report.worst_margin = std::min(report.worst_margin, margin);
    if (margin < -1e-8) ++report.violations;
  }
  return report;
}

}  // namespace moegeo
