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
#ifndef MOEGEO_INFOTHEORY_H_
#define MOEGEO_INFOTHEORY_H_

#include <vector>

#include <Eigen/Dense>

#include "moegeo/linalg.h"

namespace moegeo {

// Probability vector over E >= 2 experts. Entries are nonnegative and sum to
// one within 1e-9.
class CategoricalDist {
 public:
  explicit CategoricalDist(Eigen::VectorXd probs);
  static CategoricalDist Uniform(int experts);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_(i); }
  const Eigen::VectorXd& probs() const { return probs_; }

 private:
  Eigen::VectorXd probs_;
};

// Dense routing distributions (T x E, row-stochastic) with the k experts each
// token was dispatched to.
class RoutingBatch {
 public:
  RoutingBatch(Eigen::MatrixXd dense_probs, std::vector<Support> selections);

  // Selects the Top-k of every row (ties toward lower index).
  static RoutingBatch FromDense(Eigen::MatrixXd dense_probs, int k);

  int tokens() const { return static_cast<int>(dense_.rows()); }
  int experts() const { return static_cast<int>(dense_.cols()); }
  int k() const { return k_; }
  const Eigen::MatrixXd& dense_probs() const { return dense_; }
  const std::vector<Support>& selections() const { return selections_; }

  // f_i: fraction of tokens whose selection contains i (sums to k).
  Eigen::VectorXd DispatchFractions() const;
  // P_i: column mean of the dense probabilities.
  Eigen::VectorXd MeanProbabilities() const;
  // Row t renormalized on its selection, zero elsewhere.
  Eigen::VectorXd SparseRow(int t) const;

 private:
  Eigen::MatrixXd dense_;
  std::vector<Support> selections_;
  int k_ = 0;
};

struct SparseProjection {
  CategoricalDist q;
  Support support;
  double kl = 0.0;  // KL(q || p) = -log sum_{j in S} p_j
};

// Minimizer of KL(q || p) over distributions supported on k atoms: the
// renormalized truncation of p to its k largest entries. Throws InvalidK and
// ZeroProbability (any p_i < 1e-300).
SparseProjection KlSparseProject(const CategoricalDist& p, int k);

// KL(q || p) with 0 log 0 = 0; +inf when q puts mass where p has none.
double KlDivergence(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

// H_2(p) = -log sum p_i^2.
double Renyi2Entropy(const CategoricalDist& p);
double Renyi2Entropy(const Eigen::VectorXd& p);

// Unscaled load-balancing loss E * sum_i f_i P_i.
double AuxLoss(const RoutingBatch& batch);

struct CollisionCheck {
  double lhs = 0.0;  // E * sum P_i^2
  double rhs = 0.0;  // E * exp(-H_2(P))
  double gap = 0.0;
};

CollisionCheck CollisionIdentityCheck(const RoutingBatch& batch);

// Mean per-token Shannon entropy of the renormalized Top-k distributions.
double TopKConditionalEntropy(const RoutingBatch& batch);

// log E - log k. Requires 1 <= k < E.
double MiLowerBound(int experts, int k);

struct MutualInformation {
  double h_z = 0.0;
  double h_z_given_x = 0.0;
  double mi = 0.0;
};

// I(X; Z) = H(Z) - H(Z | X) for the discrete routing channel, where Z is
// drawn from each token's renormalized Top-k distribution.
MutualInformation EmpiricalMi(const RoutingBatch& batch);

}  // namespace moegeo

#endif  // MOEGEO_INFOTHEORY_H_
