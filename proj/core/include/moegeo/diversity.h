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
#ifndef MOEGEO_DIVERSITY_H_
#define MOEGEO_DIVERSITY_H_

#include <cstdint>

#include <Eigen/Dense>

#include "moegeo/dictionary.h"
#include "moegeo/linalg.h"

namespace moegeo {

inline constexpr double kDefaultDppEpsilon = 1e-4;

// Unit-diagonal PSD similarity kernel L_ij = <E_i, E_j> with a Tikhonov
// constant. Immutable.
class Kernel {
 public:
  // Validates symmetry and unit diagonal to 1e-10 and positive
  // semidefiniteness to max(1e-8 * epsilon, 1e-10); throws NotPSD otherwise.
  Kernel(Eigen::MatrixXd gram, double epsilon = kDefaultDppEpsilon);

  static Kernel FromFeatures(const UnitDictionary& features,
                             double epsilon = kDefaultDppEpsilon);

  int size() const { return static_cast<int>(gram_.rows()); }
  double epsilon() const { return epsilon_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  // (L + eps I) restricted to the rows and columns in s.
  Eigen::MatrixXd Regularized(const Support& s) const;

 private:
  Eigen::MatrixXd gram_;
  double epsilon_;
};

// log det(L_S + eps I). Throws NotPSD on a pivot below -1e-9.
double LogDetSubset(const Kernel& kernel, const Support& s);

// F(S u {e}) - F(S) as the log of the Schur complement
// (L + eps I)_ee - L_eS (L_S + eps I)^{-1} L_Se.
double MarginalGain(const Kernel& kernel, const Support& s, int e);

// F~(S) = log det(L_S + eps I) - |S| log eps. Nonnegative, monotone and
// submodular; F~(empty) = 0.
double ShiftedLogDet(const Kernel& kernel, const Support& s);

// Greedy volume maximization: k rounds of argmax MarginalGain, ties to the
// lowest index. Returns the selected set ascending.
Support DppGreedySelect(const Kernel& kernel, int k);

// Exhaustive argmax of log det over k-subsets (small N only).
Support DppExhaustiveSelect(const Kernel& kernel, int k);

struct SubmodularityReport {
  int samples = 0;
  int violations = 0;
  // min over samples of gain(A, e) - gain(B, e) and of the F~ increment.
  double worst_margin = 0.0;
};

// Random chains A subset B, e not in B, each drawn from its own stream
// (seed, sample). Checks diminishing returns and monotonicity of F~ at 1e-8.
SubmodularityReport SubmodularityAudit(const Kernel& kernel, int samples,
                                       std::uint64_t seed);

}  // namespace moegeo

#endif  // MOEGEO_DIVERSITY_H_
