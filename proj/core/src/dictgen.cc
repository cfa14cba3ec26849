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
#include "moegeo/dictgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "moegeo/error.h"
#include "moegeo/rng.h"

namespace moegeo {
namespace {

// Stream ids under a generator seed.
constexpr std::uint64_t kBasisStream = 1;
constexpr std::uint64_t kSharedStream = 2;
constexpr std::uint64_t kSupportStream = 3;
constexpr std::uint64_t kCoeffStream = 4;
constexpr std::uint64_t kCentroidStream = 5;
constexpr std::uint64_t kLabelStream = 6;
constexpr std::uint64_t kNoiseStream = 7;
constexpr std::uint64_t kMixingStream = 8;

Eigen::MatrixXd GaussianMatrix(int rows, int cols, Rng rng) {
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.Normal();
  }
  return m;
}

Eigen::MatrixXd OrthonormalBasis(int d, int n, std::uint64_t seed) {
  const Eigen::MatrixXd g =
      GaussianMatrix(d, n, Rng::Stream(seed, {kBasisStream}));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

UnitDictionary RandomOrthonormalDictionary(int d, int n, std::uint64_t seed) {
  if (n < 2 || n > d) {
    throw Error(ErrorKind::kInvalidShape,
                "orthonormal dictionary needs 2 <= N <= d");
  }
  return NormalizeColumns(OrthonormalBasis(d, n, seed));
}

CoherenceBlend::CoherenceBlend(int d, int n, std::uint64_t seed) {
  if (n < 2 || n > d) {
    throw Error(ErrorKind::kInvalidShape,
                "coherent dictionary needs 2 <= N <= d");
  }
  basis_ = OrthonormalBasis(d, n, seed);
  Rng rng = Rng::Stream(seed, {kSharedStream});
  shared_.resize(d);
  for (int i = 0; i < d; ++i) shared_(i) = rng.Normal();
  shared_.normalize();
  overlap_ = basis_.transpose() * shared_;
  for (int j = 0; j < n; ++j) {
    if (overlap_(j) < 0.0) {
      basis_.col(j) = -basis_.col(j);
      overlap_(j) = -overlap_(j);
    }
  }
}

UnitDictionary CoherenceBlend::At(double t) const {
  Eigen::MatrixXd m = (1.0 - t) * basis_;
  m.colwise() += t * shared_;
  return NormalizeColumns(m);
}

double CoherenceBlend::PredictedCoherence(double t) const {
  const int n = static_cast<int>(overlap_.size());
  const double s = 1.0 - t;
  Eigen::VectorXd norms(n);
  for (int i = 0; i < n; ++i) {
    norms(i) = std::sqrt(s * s + 2.0 * t * s * overlap_(i) + t * t);
  }
  double mu = 0.0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double dot = t * s * (overlap_(i) + overlap_(j)) + t * t;
      mu = std::max(mu, std::abs(dot) / (norms(i) * norms(j)));
    }
  }
  return mu;
}

double CoherenceBlend::SolveBlend(double target_mu, double tol) const {
  if (!(target_mu >= 0.0 && target_mu < 1.0) || !(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "target_mu must lie in [0, 1) and tol must be positive");
  }
  if (target_mu <= tol) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double best_t = 0.0;
  double best_gap = target_mu;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double mu = PredictedCoherence(mid);
    const double gap = std::abs(mu - target_mu);
    if (gap < best_gap) {
      best_gap = gap;
      best_t = mid;
    }
    if (gap <= 0.5 * tol) return mid;
    if (mu < target_mu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_gap <= tol) return best_t;
  throw Error(ErrorKind::kUnreachable,
              "coherence " + std::to_string(target_mu) + " not bracketed");
}

UnitDictionary CoherentDictionary(int d, int n, double target_mu, double tol,
                                  std::uint64_t seed) {
  const CoherenceBlend blend(d, n, seed);
  const double t = blend.SolveBlend(target_mu, tol);
  UnitDictionary dict = blend.At(t);
  const double measured = MutualCoherence(dict);
  if (std::abs(measured - target_mu) > tol) {
    throw Error(ErrorKind::kUnreachable,
                "measured coherence " + std::to_string(measured) +
                    " misses target " + std::to_string(target_mu));
  }
  return dict;
}

TargetSignal PlantedSignal(const UnitDictionary& dict, int k,
                           std::uint64_t seed, CoefficientLaw law) {
  if (k < 1 || k > dict.atoms()) {
    throw Error(ErrorKind::kInvalidK, "planted sparsity out of range");
  }
  Rng support_rng = Rng::Stream(seed, {kSupportStream});
  Rng coeff_rng = Rng::Stream(seed, {kCoeffStream});
  Support support = support_rng.Subset(dict.atoms(), k);
  Eigen::VectorXd coeffs(k);
  for (int i = 0; i < k; ++i) {
    const double sign = coeff_rng.Sign();
    coeffs(i) = law == CoefficientLaw::kRademacher
                    ? sign
                    : sign * coeff_rng.Uniform(0.5, 1.5);
  }
  TargetSignal out;
  out.vector = Eigen::VectorXd::Zero(dict.dim());
  for (int i = 0; i < k; ++i) out.vector += coeffs(i) * dict.column(support[i]);
  out.planted_support = std::move(support);
  out.planted_coeffs = std::move(coeffs);
  return out;
}

ClassificationDataset SyntheticClassification(const ClassificationSpec& spec) {
  if (spec.samples <= 0 || spec.features <= 0 || spec.informative <= 0 ||
      spec.classes < 2 || spec.informative > spec.features ||
      spec.class_sep < 0.0) {
    throw Error(ErrorKind::kInvalidConfig,
                "classification spec needs positive sizes, classes >= 2 and "
                "informative <= features");
  }
  const int m = spec.samples;
  const int d_inf = spec.informative;
  const int d_red = spec.features - d_inf;

  Rng centroid_rng = Rng::Stream(spec.seed, {kCentroidStream});
  Eigen::MatrixXd centroids(spec.classes, d_inf);
  for (int c = 0; c < spec.classes; ++c) {
    for (int j = 0; j < d_inf; ++j) {
      centroids(c, j) = spec.class_sep * centroid_rng.Normal();
    }
  }

  ClassificationDataset out;
  out.n_informative = d_inf;
  out.n_classes = spec.classes;
  out.labels.resize(m);
  for (int i = 0; i < m; ++i) out.labels[i] = i % spec.classes;
  Rng label_rng = Rng::Stream(spec.seed, {kLabelStream});
  label_rng.Shuffle(out.labels);

  Rng noise_rng = Rng::Stream(spec.seed, {kNoiseStream});
  Eigen::MatrixXd informative(m, d_inf);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < d_inf; ++j) {
      informative(i, j) = centroids(out.labels[i], j) + noise_rng.Normal();
    }
  }

  out.mixing = GaussianMatrix(d_inf, d_red, Rng::Stream(spec.seed, {kMixingStream})) /
               std::sqrt(static_cast<double>(d_inf));
  out.features.resize(m, spec.features);
  out.features.leftCols(d_inf) = informative;
  if (d_red > 0) out.features.rightCols(d_red) = informative * out.mixing;
  return out;
}

void WriteDatasetCsv(std::ostream& out, const ClassificationDataset& data) {
  out << "label";
  for (int j = 0; j < data.features.cols(); ++j) out << ",f" << j;
  out << '\n';
  char buf[40];
  for (int i = 0; i < data.features.rows(); ++i) {
    out << data.labels[i];
    for (int j = 0; j < data.features.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", data.features(i, j));
      out << buf;
    }
    out << '\n';
  }
}

ClassificationDataset ReadDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("label", 0) != 0) {
    throw Error(ErrorKind::kInvalidConfig, "dataset csv: missing header");
  }
  const int cols = static_cast<int>(std::count(line.begin(), line.end(), ','));
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int max_label = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    labels.push_back(std::stoi(cell));
    max_label = std::max(max_label, labels.back());
    std::vector<double> row;
    row.reserve(cols);
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != cols) {
      throw Error(ErrorKind::kInvalidConfig, "dataset csv: ragged row");
    }
    rows.push_back(std::move(row));
  }
  ClassificationDataset out;
  out.features.resize(static_cast<int>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols; ++j) out.features(static_cast<int>(i), j) = rows[i][j];
  }
  out.labels = std::move(labels);
  out.n_classes = max_label + 1;
  return out;
}

}  // namespace moegeo
