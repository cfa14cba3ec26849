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

#ifndef MOEGEO_LINALG_H_
#define MOEGEO_LINALG_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace moegeo {

// Index set over dictionary columns / experts. Always stored ascending.
using Support = std::vector<int>;

// Indices of the k largest scores, ties resolved toward the lower index.
// The result is ascending.
Support TopK(std::span<const double> scores, int k);
Support TopK(const Eigen::VectorXd& scores, int k);

// Indices ordered by descending score with the same tie rule.
std::vector<int> RankDescending(std::span<const double> scores);

// Unpivoted Cholesky that records the raw pivots (diagonal of D in LDL^T
// before the square root). Small dense systems only.
struct CholeskyResult {
  Eigen::MatrixXd lower;
  Eigen::VectorXd pivots;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  // Set when a pivot was <= 0; lower is then only valid up to that column.
  bool broke_down = false;
  int breakdown_index = -1;
};

CholeskyResult FactorCholesky(const Eigen::MatrixXd& a);

// log det of a symmetric matrix from a completed factorization.
double LogDetFromPivots(const CholeskyResult& chol);

// Solves L L^T x = b given a successful factorization.
Eigen::VectorXd CholeskySolve(const CholeskyResult& chol,
                              const Eigen::VectorXd& b);

Eigen::MatrixXd CholeskySolveMatrix(const CholeskyResult& chol,
                                    const Eigen::MatrixXd& b);

bool AllFinite(const Eigen::MatrixXd& m);

// Shannon entropy in nats with 0 log 0 = 0.
double ShannonEntropy(std::span<const double> probs);
double ShannonEntropy(const Eigen::VectorXd& probs);

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

}  // namespace moegeo

#endif  // MOEGEO_LINALG_H_
