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
#ifndef MOEGEO_DICTGEN_H_
#define MOEGEO_DICTGEN_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "moegeo/dictionary.h"

namespace moegeo {

// Haar-distributed orthonormal columns: Householder QR of an i.i.d. standard
// normal d x N matrix with the sign of diag(R) folded into Q.
UnitDictionary RandomOrthonormalDictionary(int d, int n, std::uint64_t seed);

// Blend family e_i(t) = normalize((1 - t) q_i + t u) over an orthonormal set
// {q_i} and a unit vector u. The q_i are sign-flipped so that <q_i, u> >= 0,
// which makes every pairwise inner product nonnegative and the coherence a
// monotone function of t, rising from 0 at t = 0 to 1 as t -> 1.
class CoherenceBlend {
 public:
  CoherenceBlend(int d, int n, std::uint64_t seed);

  UnitDictionary At(double t) const;

  // Coherence of At(t) from the closed form
  //   <e_i, e_j> = (t(1-t)(a_i + a_j) + t^2) / (|v_i| |v_j|),
  //   |v_i|^2 = (1-t)^2 + 2t(1-t) a_i + t^2,   a_i = <q_i, u>.
  double PredictedCoherence(double t) const;

  // Bisection on t for the requested coherence. Returns t; throws Unreachable
  // when 60 halvings do not land within tol.
  double SolveBlend(double target_mu, double tol) const;

  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& shared() const { return shared_; }

 private:
  Eigen::MatrixXd basis_;
  Eigen::VectorXd shared_;
  Eigen::VectorXd overlap_;  // a_i
};

// Dictionary whose measured mutual coherence lies in [target_mu - tol,
// target_mu + tol]. Requires 2 <= N <= d.
UnitDictionary CoherentDictionary(int d, int n, double target_mu, double tol,
                                  std::uint64_t seed);

enum class CoefficientLaw {
  kRademacher,        // +-1, equal magnitudes
  kUniformMagnitude,  // random sign times U[0.5, 1.5]
};

// y = sum_{j in S*} alpha_j E_j over a uniform random k-subset S*.
TargetSignal PlantedSignal(const UnitDictionary& dict, int k,
                           std::uint64_t seed,
                           CoefficientLaw law = CoefficientLaw::kRademacher);

struct ClassificationSpec {
  int samples = 4000;
  int features = 100;
  int informative = 10;
  int classes = 10;
  double class_sep = 0.6;
  std::uint64_t seed = 42;
};

// Columns [0, informative) hold class-centroid Gaussians: centroid_c ~
// N(0, class_sep^2 I), sample = centroid_label + N(0, I). The remaining
// columns are exactly X_inf * A with A_ij ~ N(0, 1/informative).
struct ClassificationDataset {
  Eigen::MatrixXd features;   // samples x features
  std::vector<int> labels;    // in [0, classes)
  int n_informative = 0;
  int n_classes = 0;
  Eigen::MatrixXd mixing;     // informative x (features - informative)
};

ClassificationDataset SyntheticClassification(const ClassificationSpec& spec);

// CSV with header label,f0,...,f{D-1}; values printed with 17 significant
// digits so that ReadDatasetCsv reproduces the matrix.
void WriteDatasetCsv(std::ostream& out, const ClassificationDataset& data);
ClassificationDataset ReadDatasetCsv(std::istream& in);

}  // namespace moegeo

#endif  // MOEGEO_DICTGEN_H_
