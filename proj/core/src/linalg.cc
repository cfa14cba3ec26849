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
#include "moegeo/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "moegeo/error.h"

namespace moegeo {

std::vector<int> RankDescending(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[a] > scores[b];
  });
  return order;
}

Support TopK(std::span<const double> scores, int k) {
  if (k < 1 || k > static_cast<int>(scores.size())) {
    throw Error(ErrorKind::kInvalidK, "TopK: k out of range");
  }
  std::vector<int> order = RankDescending(scores);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

Support TopK(const Eigen::VectorXd& scores, int k) {
  return TopK(std::span<const double>(scores.data(), scores.size()), k);
}

CholeskyResult FactorCholesky(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  CholeskyResult out;
  out.lower = Eigen::MatrixXd::Zero(n, n);
  out.pivots = Eigen::VectorXd::Zero(n);
  out.min_pivot = std::numeric_limits<double>::infinity();
  out.max_pivot = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd& l = out.lower;
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int p = 0; p < j; ++p) pivot -= l(j, p) * l(j, p);
    out.pivots(j) = pivot;
    out.min_pivot = std::min(out.min_pivot, pivot);
    out.max_pivot = std::max(out.max_pivot, pivot);
    if (!(pivot > 0.0)) {
      out.broke_down = true;
      out.breakdown_index = j;
      return out;
    }
    const double diag = std::sqrt(pivot);
    l(j, j) = diag;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      l(i, j) = s / diag;
    }
  }
  return out;
}

double LogDetFromPivots(const CholeskyResult& chol) {
  if (chol.broke_down) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int i = 0; i < chol.pivots.size(); ++i) sum += std::log(chol.pivots(i));
  return sum;
}

Eigen::VectorXd CholeskySolve(const CholeskyResult& chol,
                              const Eigen::VectorXd& b) {
  const auto l = chol.lower.triangularView<Eigen::Lower>();
  Eigen::VectorXd z = l.solve(b);
  return l.transpose().solve(z);
}

Eigen::MatrixXd CholeskySolveMatrix(const CholeskyResult& chol,
                                    const Eigen::MatrixXd& b) {
  const auto l = chol.lower.triangularView<Eigen::Lower>();
  Eigen::MatrixXd z = l.solve(b);
  return l.transpose().solve(z);
}

bool AllFinite(const Eigen::MatrixXd& m) { return m.allFinite(); }

double ShannonEntropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double ShannonEntropy(const Eigen::VectorXd& probs) {
  return ShannonEntropy(std::span<const double>(probs.data(), probs.size()));
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const double shift = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - shift).exp();
  return e / e.sum();
}

}  // namespace moegeo
