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

#ifndef MOEGEO_DICTIONARY_H_
#define MOEGEO_DICTIONARY_H_

#include <optional>

#include <Eigen/Dense>

#include "moegeo/linalg.h"

namespace moegeo {

// d x N matrix of unit-norm columns (experts or atoms). Immutable.
class UnitDictionary {
 public:
  int dim() const { return static_cast<int>(data_.rows()); }
  int atoms() const { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& matrix() const { return data_; }
  auto column(int i) const { return data_.col(i); }

  // Submatrix of the given columns, in the order given.
  Eigen::MatrixXd Columns(const Support& support) const;

  friend UnitDictionary NormalizeColumns(const Eigen::MatrixXd& matrix);

 private:
  explicit UnitDictionary(Eigen::MatrixXd data) : data_(std::move(data)) {}
  Eigen::MatrixXd data_;
};

// Divides every column by its Euclidean norm. Throws ZeroColumn when a column
// norm is <= 1e-12, InvalidShape when N < 2 or d < 1, NonFinite on NaN/Inf.
UnitDictionary NormalizeColumns(const Eigen::MatrixXd& matrix);

// max_{i != j} |<E_i, E_j>|.
double MutualCoherence(const UnitDictionary& dict);

struct TargetSignal {
  Eigen::VectorXd vector;
  std::optional<Support> planted_support;
  std::optional<Eigen::VectorXd> planted_coeffs;
};

struct SparseSolution {
  Support support;
  Eigen::VectorXd coefficients;  // aligned with support
  double residual_sq = 0.0;
};

// Ordinary least squares restricted to the given columns, solved through the
// normal equations. Throws SingularGram when the smallest Cholesky pivot of
// the support Gram matrix is below 1e-12 times the largest.
SparseSolution LeastSquaresOnSupport(const UnitDictionary& dict,
                                     const Eigen::VectorXd& y,
                                     Support support);
inline SparseSolution LeastSquaresOnSupport(const UnitDictionary& dict,
                                            const TargetSignal& y,
                                            Support support) {
  return LeastSquaresOnSupport(dict, y.vector, std::move(support));
}

// ||y - E_S alpha||^2 evaluated directly from the solution's fields.
double RecomputeResidual(const UnitDictionary& dict, const Eigen::VectorXd& y,
                         const SparseSolution& solution);

}  // namespace moegeo

#endif  // MOEGEO_DICTIONARY_H_
