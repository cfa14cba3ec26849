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
#include "moegeo/regularizers.h"

#include <cmath>

#include "moegeo/error.h"
#include "moegeo/linalg.h"

namespace moegeo {
namespace {

constexpr double kMinOutputNorm = 1e-8;

struct Normalized {
  Eigen::MatrixXd unit;     // C x k, zero columns where the guard tripped
  Eigen::VectorXd norms;
  std::vector<bool> valid;
};

Normalized NormalizeOutputs(const Eigen::MatrixXd& outputs) {
  Normalized n;
  n.unit = Eigen::MatrixXd::Zero(outputs.rows(), outputs.cols());
  n.norms = outputs.colwise().norm().transpose();
  n.valid.resize(outputs.cols());
  for (int i = 0; i < outputs.cols(); ++i) {
    n.valid[i] = n.norms(i) >= kMinOutputNorm;
    if (n.valid[i]) n.unit.col(i) = outputs.col(i) / n.norms(i);
  }
  return n;
}

// Pulls a gradient on unit vectors back to the raw outputs.
Eigen::MatrixXd BackThroughNormalize(const Normalized& n,
                                     const Eigen::MatrixXd& d_unit) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(d_unit.rows(), d_unit.cols());
  for (int i = 0; i < d_unit.cols(); ++i) {
    if (!n.valid[i]) continue;
    const auto v = n.unit.col(i);
    d.col(i) = (d_unit.col(i) - v * v.dot(d_unit.col(i))) / n.norms(i);
  }
  return d;
}

}  // namespace

OutputPenalty OrthoPenalty(const ForwardTrace& trace) {
  const int batch = trace.batch();
  OutputPenalty out;
  out.d_outputs.reserve(batch);
  for (const SampleTrace& s : trace.samples) {
    const Normalized n = NormalizeOutputs(s.expert_outputs);
    const int k = static_cast<int>(s.expert_outputs.cols());
    const Eigen::MatrixXd cos = n.unit.transpose() * n.unit;
    Eigen::MatrixXd d_unit = Eigen::MatrixXd::Zero(n.unit.rows(), k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j || !n.valid[i] || !n.valid[j]) continue;
        out.value += cos(i, j) * cos(i, j);
        // Each unordered pair appears twice, so d/dv_i of the sum is 4 c_ij v_j.
        d_unit.col(i) += 4.0 * cos(i, j) * n.unit.col(j);
      }
    }
    out.d_outputs.push_back(BackThroughNormalize(n, d_unit) / batch);
  }
  out.value /= batch;
  return out;
}

double OrthoLoss(const ForwardTrace& trace) { return OrthoPenalty(trace).value; }

OutputPenalty SoftDppPenalty(const ForwardTrace& trace, double epsilon) {
  const int batch = trace.batch();
  OutputPenalty out;
  out.d_outputs.reserve(batch);
  for (const SampleTrace& s : trace.samples) {
    const Normalized n = NormalizeOutputs(s.expert_outputs);
    const int k = static_cast<int>(s.expert_outputs.cols());
    Eigen::MatrixXd kernel = n.unit.transpose() * n.unit;
    kernel.diagonal().array() += epsilon;
    const CholeskyResult chol = FactorCholesky(kernel);
    if (chol.broke_down) {
      throw Error(ErrorKind::kNotPsd, "soft-DPP kernel lost definiteness");
    }
    out.value -= LogDetFromPivots(chol);
    const Eigen::MatrixXd inverse =
        CholeskySolveMatrix(chol, Eigen::MatrixXd::Identity(k, k));
    out.d_outputs.push_back(
        BackThroughNormalize(n, -2.0 * n.unit * inverse) / batch);
  }
  out.value /= batch;
  return out;
}

double SoftDppLoss(const ForwardTrace& trace, double epsilon) {
  return SoftDppPenalty(trace, epsilon).value;
}

OutputPenalty NclPenalty(const ForwardTrace& trace) {
  const int batch = trace.batch();
  OutputPenalty out;
  out.d_outputs.reserve(batch);
  for (const SampleTrace& s : trace.samples) {
    const int k = static_cast<int>(s.expert_outputs.cols());
    const int c = static_cast<int>(s.expert_outputs.rows());
    Eigen::MatrixXd probs(c, k);
    for (int i = 0; i < k; ++i) probs.col(i) = Softmax(s.expert_outputs.col(i));
    const Eigen::VectorXd mean = probs.rowwise().mean();
    const Eigen::MatrixXd dev = probs.colwise() - mean;
    Eigen::MatrixXd d_dev = Eigen::MatrixXd::Zero(c, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        out.value += dev.col(i).dot(dev.col(j));
        d_dev.col(i) += 2.0 * dev.col(j);
      }
    }
    // dev_m = p_m - mean(p) couples every column through the mean.
    const Eigen::VectorXd d_mean_share = d_dev.rowwise().sum() / k;
    Eigen::MatrixXd d_out(c, k);
    for (int m = 0; m < k; ++m) {
      const Eigen::VectorXd d_p = d_dev.col(m) - d_mean_share;
      const double inner = d_p.dot(probs.col(m));
      d_out.col(m) = probs.col(m).cwiseProduct(d_p.array().matrix() -
                                               Eigen::VectorXd::Constant(c, inner));
    }
    out.d_outputs.push_back(d_out / batch);
  }
  out.value /= batch;
  return out;
}

double NclLoss(const ForwardTrace& trace) { return NclPenalty(trace).value; }

AmbiguityTerms AmbiguityDecomposition(const Eigen::MatrixXd& outputs,
                                      const Eigen::VectorXd& target) {
  if (outputs.cols() < 1 || outputs.rows() != target.size()) {
    throw Error(ErrorKind::kInvalidShape,
                "ambiguity decomposition needs k >= 1 outputs of target size");
  }
  const int k = static_cast<int>(outputs.cols());
  const Eigen::VectorXd mean = outputs.rowwise().mean();
  AmbiguityTerms t;
  t.ensemble_err = (mean - target).squaredNorm();
  for (int i = 0; i < k; ++i) {
    t.mean_individual_err += (outputs.col(i) - target).squaredNorm();
    t.ambiguity += (outputs.col(i) - mean).squaredNorm();
  }
  t.mean_individual_err /= k;
  t.ambiguity /= k;
  t.gap = std::abs(t.ensemble_err - (t.mean_individual_err - t.ambiguity));
  return t;
}

}  // namespace moegeo
