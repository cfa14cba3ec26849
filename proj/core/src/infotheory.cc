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
#include "moegeo/infotheory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moegeo/error.h"

namespace moegeo {
namespace {

void CheckStochastic(const Eigen::VectorXd& p, const char* what) {
  if (!p.allFinite() || p.minCoeff() < 0.0) {
    throw Error(ErrorKind::kInvalidDistribution,
                std::string(what) + ": entries must be finite and >= 0");
  }
  if (std::abs(p.sum() - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidDistribution,
                std::string(what) + ": entries must sum to 1");
  }
}

}  // namespace

CategoricalDist::CategoricalDist(Eigen::VectorXd probs)
    : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw Error(ErrorKind::kInvalidDistribution, "need at least two outcomes");
  }
  CheckStochastic(probs_, "distribution");
}

CategoricalDist CategoricalDist::Uniform(int experts) {
  return CategoricalDist(Eigen::VectorXd::Constant(experts, 1.0 / experts));
}

RoutingBatch::RoutingBatch(Eigen::MatrixXd dense_probs,
                           std::vector<Support> selections)
    : dense_(std::move(dense_probs)), selections_(std::move(selections)) {
  if (dense_.rows() < 1 || dense_.cols() < 2) {
    throw Error(ErrorKind::kInvalidShape, "routing batch needs T >= 1, E >= 2");
  }
  if (static_cast<int>(selections_.size()) != dense_.rows()) {
    throw Error(ErrorKind::kInvalidShape, "one selection per token required");
  }
  k_ = static_cast<int>(selections_.front().size());
  for (int t = 0; t < dense_.rows(); ++t) {
    CheckStochastic(dense_.row(t).transpose(), "routing row");
    Support& sel = selections_[t];
    std::sort(sel.begin(), sel.end());
    if (static_cast<int>(sel.size()) != k_ || k_ < 1) {
      throw Error(ErrorKind::kInvalidK, "every selection must hold k experts");
    }
    for (std::size_t i = 0; i < sel.size(); ++i) {
      if (sel[i] < 0 || sel[i] >= experts() || (i > 0 && sel[i] == sel[i - 1])) {
        throw Error(ErrorKind::kInvalidArgument,
                    "selection indices must be distinct and valid");
      }
    }
  }
}

RoutingBatch RoutingBatch::FromDense(Eigen::MatrixXd dense_probs, int k) {
  std::vector<Support> selections;
  selections.reserve(dense_probs.rows());
  for (int t = 0; t < dense_probs.rows(); ++t) {
    const Eigen::VectorXd row = dense_probs.row(t).transpose();
    selections.push_back(TopK(row, k));
  }
  return RoutingBatch(std::move(dense_probs), std::move(selections));
}

Eigen::VectorXd RoutingBatch::DispatchFractions() const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(experts());
  for (const Support& sel : selections_) {
    for (int i : sel) f(i) += 1.0;
  }
  return f / static_cast<double>(tokens());
}

Eigen::VectorXd RoutingBatch::MeanProbabilities() const {
  return dense_.colwise().mean().transpose();
}

Eigen::VectorXd RoutingBatch::SparseRow(int t) const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(experts());
  double mass = 0.0;
  for (int i : selections_[t]) mass += dense_(t, i);
  if (mass <= 0.0) {
    // Selected experts carry no mass; fall back to uniform on the selection.
    for (int i : selections_[t]) q(i) = 1.0 / k_;
    return q;
  }
  for (int i : selections_[t]) q(i) = dense_(t, i) / mass;
  return q;
}

SparseProjection KlSparseProject(const CategoricalDist& p, int k) {
  const int e = p.size();
  if (k < 1 || k > e) {
    throw Error(ErrorKind::kInvalidK,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(e) + "]");
  }
  if (p.probs().minCoeff() < 1e-300) {
    throw Error(ErrorKind::kZeroProbability,
                "projection needs strictly positive probabilities");
  }
  Support support = TopK(p.probs(), k);
  double mass = 0.0;
  for (int i : support) mass += p[i];
  Eigen::VectorXd q = Eigen::VectorXd::Zero(e);
  for (int i : support) q(i) = p[i] / mass;
  const double kl = k == e ? 0.0 : -std::log(mass);
  return SparseProjection{CategoricalDist(std::move(q)), std::move(support), kl};
}

double KlDivergence(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  double kl = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (q(i) <= 0.0) continue;
    if (p(i) <= 0.0) return std::numeric_limits<double>::infinity();
    kl += q(i) * std::log(q(i) / p(i));
  }
  return kl;
}

double Renyi2Entropy(const Eigen::VectorXd& p) {
  return -std::log(p.squaredNorm());
}

double Renyi2Entropy(const CategoricalDist& p) { return Renyi2Entropy(p.probs()); }

double AuxLoss(const RoutingBatch& batch) {
  return batch.experts() *
         batch.DispatchFractions().dot(batch.MeanProbabilities());
}

CollisionCheck CollisionIdentityCheck(const RoutingBatch& batch) {
  const Eigen::VectorXd mean = batch.MeanProbabilities();
  const double e = batch.experts();
  CollisionCheck out;
  out.lhs = e * mean.squaredNorm();
  out.rhs = e * std::exp(-Renyi2Entropy(mean));
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

double TopKConditionalEntropy(const RoutingBatch& batch) {
  double sum = 0.0;
  for (int t = 0; t < batch.tokens(); ++t) sum += ShannonEntropy(batch.SparseRow(t));
  return sum / batch.tokens();
}

double MiLowerBound(int experts, int k) {
  if (k < 1 || k >= experts) {
    throw Error(ErrorKind::kInvalidK, "mutual-information bound needs 1 <= k < E");
  }
  return std::log(static_cast<double>(experts)) - std::log(static_cast<double>(k));
}

MutualInformation EmpiricalMi(const RoutingBatch& batch) {
  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(batch.experts());
  double conditional = 0.0;
  for (int t = 0; t < batch.tokens(); ++t) {
    const Eigen::VectorXd q = batch.SparseRow(t);
    marginal += q;
    conditional += ShannonEntropy(q);
  }
  marginal /= batch.tokens();
  MutualInformation out;
  out.h_z = ShannonEntropy(marginal);
  out.h_z_given_x = conditional / batch.tokens();
  out.mi = out.h_z - out.h_z_given_x;
  return out;
}

}  // namespace moegeo
