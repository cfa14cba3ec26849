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
#include "moegeo/dictionary.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "moegeo/error.h"

namespace moegeo {

UnitDictionary NormalizeColumns(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 2) {
    throw Error(ErrorKind::kInvalidShape,
                "dictionary needs d >= 1 and N >= 2, got " +
                    std::to_string(matrix.rows()) + "x" +
                    std::to_string(matrix.cols()));
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::kNonFinite, "dictionary has non-finite entries");
  }
  Eigen::MatrixXd out = matrix;
  for (int j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm <= 1e-12) {
      throw Error(ErrorKind::kZeroColumn,
                  "zero column at index " + std::to_string(j));
    }
    out.col(j) /= norm;
  }
  return UnitDictionary(std::move(out));
}

Eigen::MatrixXd UnitDictionary::Columns(const Support& support) const {
  Eigen::MatrixXd sub(dim(), static_cast<int>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    sub.col(static_cast<int>(i)) = data_.col(support[i]);
  }
  return sub;
}

double MutualCoherence(const UnitDictionary& dict) {
  const Eigen::MatrixXd gram = dict.matrix().transpose() * dict.matrix();
  double mu = 0.0;
  for (int j = 1; j < gram.cols(); ++j) {
    for (int i = 0; i < j; ++i) mu = std::max(mu, std::abs(gram(i, j)));
  }
  return mu;
}

SparseSolution LeastSquaresOnSupport(const UnitDictionary& dict,
                                     const Eigen::VectorXd& y,
                                     Support support) {
  if (support.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty support");
  }
  if (y.size() != dict.dim()) {
    throw Error(ErrorKind::kInvalidShape, "target dimension mismatch");
  }
  std::sort(support.begin(), support.end());
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= dict.atoms() ||
        (i > 0 && support[i] == support[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "support indices must be distinct and in range");
    }
  }
  const Eigen::MatrixXd cols = dict.Columns(support);
  const Eigen::MatrixXd gram = cols.transpose() * cols;
  const CholeskyResult chol = FactorCholesky(gram);
  if (chol.broke_down || chol.min_pivot < 1e-12 * chol.max_pivot) {
    std::string ids;
    for (int s : support) ids += (ids.empty() ? "" : ",") + std::to_string(s);
    throw Error(ErrorKind::kSingularGram, "singular Gram on support {" + ids + "}");
  }
  SparseSolution out;
  out.coefficients = CholeskySolve(chol, cols.transpose() * y);
  out.residual_sq = (y - cols * out.coefficients).squaredNorm();
  out.support = std::move(support);
  return out;
}

double RecomputeResidual(const UnitDictionary& dict, const Eigen::VectorXd& y,
                         const SparseSolution& solution) {
  Eigen::VectorXd r = y;
  for (std::size_t i = 0; i < solution.support.size(); ++i) {
    r -= solution.coefficients(static_cast<int>(i)) *
         dict.column(solution.support[i]);
  }
  return r.squaredNorm();
}

}  // namespace moegeo
