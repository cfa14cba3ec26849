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
#ifndef MOEGEO_TESTS_SUPPORT_ORACLES_H_
#define MOEGEO_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moegeo/moe.h"
#include "moegeo/rng.h"

// Reference implementations written independently of the library: plain
// loops, enumeration and textbook formulas.
namespace moegeo::oracle {

void ForEachSubset(int n, int k, const std::function<void(const std::vector<int>&)>& fn);

double CofactorDeterminant(const Eigen::MatrixXd& m);

// max_{i<j} |<a_i, a_j>| / (|a_i| |a_j|) over columns.
double LoopCoherence(const Eigen::MatrixXd& m);

// Least squares residual via column-pivoted Householder QR.
double QrResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

// Exhaustive sparse regression: the k-subset with the smallest QR residual
// (first minimum in lexicographic order, rank-deficient subsets skipped).
std::vector<int> ExhaustiveSupport(const Eigen::MatrixXd& dict,
                                   const Eigen::VectorXd& y, int k);

// Minimum over k-subsets of -log(sum_{j in S} p_j) and every support
// attaining it within tol.
struct KlOracle {
  double min_kl;
  std::vector<std::vector<int>> minimizers;
};
KlOracle ExhaustiveKl(const Eigen::VectorXd& p, int k, double tol = 1e-12);

// Euclidean projection onto the probability simplex (sort-based).
Eigen::VectorXd SimplexProjection(const Eigen::VectorXd& v);

// Projected gradient descent on sum_i P_i^2 over the simplex.
Eigen::VectorXd MinimizeCollision(Eigen::VectorXd start, int steps, double lr);

double LoopEntropy(const Eigen::VectorXd& p);
Eigen::VectorXd LoopSoftmax(const Eigen::VectorXd& z);

// E * sum_i f_i P_i by a per-token loop; selections given explicitly.
double LoopAuxLoss(const Eigen::MatrixXd& dense, const std::vector<std::vector<int>>& sel);

// Indices of the k largest entries by repeated linear scans (ties toward the
// lower index), ascending.
std::vector<int> ScanTopK(const Eigen::VectorXd& v, int k);

// Full MoE objective by explicit loops, following the model definition:
// router softmax, Top-k on the router, renormalized gates, GELU experts,
// cross-entropy, alpha * E * sum f_i P_i and lambda * regularizer.
struct LoopLoss {
  double task = 0.0;
  double aux = 0.0;
  double reg = 0.0;
  double total = 0.0;
  std::vector<std::vector<int>> selections;
};
LoopLoss LoopTotalLoss(const ParamSet& params, const MoEConfig& config,
                       const Eigen::MatrixXd& x, const std::vector<int>& y);

// Central differences (step h) of LoopTotalLoss. Entries whose perturbation
// changes any Top-k selection are reported in 'unstable' and left at zero.
struct FdGradient {
  ParamSet grad;
  ParamSet unstable;  // 1 where the entry was skipped
  int skipped = 0;
};
FdGradient FiniteDifference(const ParamSet& params, const MoEConfig& config,
                            const Eigen::MatrixXd& x, const std::vector<int>& y,
                            double h = 1e-5);

Eigen::MatrixXd GaussianMatrix(Rng& rng, int rows, int cols);
Eigen::VectorXd GaussianVector(Rng& rng, int n);
Eigen::VectorXd RandomSimplex(Rng& rng, int n);

}  // namespace moegeo::oracle

#endif  // MOEGEO_TESTS_SUPPORT_ORACLES_H_
