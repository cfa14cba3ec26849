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
#include "moegeo/moe.h"

#include <cmath>
#include <numbers>
#include <string>

#include "moegeo/error.h"
#include "moegeo/regularizers.h"
#include "moegeo/rng.h"

namespace moegeo {
namespace {

constexpr double kGeluScale = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluCubic = 0.044715;

Eigen::MatrixXd HeNormal(int rows, int cols, Rng& rng) {
  const double scale = std::sqrt(2.0 / cols);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.Normal();
  }
  return m;
}

void RequireFinite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::kNonFinite, std::string("non-finite ") + what);
  }
}

double LogSumExp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

void AdamWTensor(Eigen::MatrixXd& theta, Eigen::MatrixXd& m, Eigen::MatrixXd& v,
                 const Eigen::MatrixXd& g, const MoEConfig& c,
                 double bias1, double bias2) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
  theta *= 1.0 - c.lr * c.weight_decay;
  theta.array() -= c.lr * (m.array() / bias1) /
                    ((v.array() / bias2).sqrt() + c.adam_eps);
}

}  // namespace

std::string_view RegKindName(RegKind kind) {
  switch (kind) {
    case RegKind::kNone: return "none";
    case RegKind::kOrtho: return "ortho";
    case RegKind::kNcl: return "ncl";
    case RegKind::kDpp: return "dpp";
  }
  return "none";
}

std::optional<RegKind> ParseRegKind(std::string_view name) {
  if (name == "none") return RegKind::kNone;
  if (name == "ortho") return RegKind::kOrtho;
  if (name == "ncl") return RegKind::kNcl;
  if (name == "dpp") return RegKind::kDpp;
  return std::nullopt;
}

void MoEConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kInvalidConfig, msg);
  };
  if (input_dim < 1 || experts < 2 || expert_hidden < 1 || classes < 2 ||
      batch < 1 || epochs < 0) {
    fail("model sizes must be positive");
  }
  if (k < 1 || k >= experts) fail("k must satisfy 1 <= k < experts");
  if (!(lr > 0.0) || aux_weight < 0.0 || reg_weight < 0.0 ||
      !(dpp_epsilon > 0.0) || !(adam_eps > 0.0) || weight_decay < 0.0) {
    fail("rates and weights must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail("AdamW betas must lie in [0, 1)");
  }
}

ParamSet ParamSet::Zeros(const MoEConfig& c) {
  ParamSet p;
  p.router = Eigen::MatrixXd::Zero(c.experts, c.input_dim);
  p.w_in.assign(c.experts, Eigen::MatrixXd::Zero(c.expert_hidden, c.input_dim));
  p.w_out.assign(c.experts, Eigen::MatrixXd::Zero(c.classes, c.expert_hidden));
  return p;
}

MoEParams InitParams(const MoEConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  MoEParams p;
  p.weights.router = HeNormal(config.experts, config.input_dim, rng);
  for (int e = 0; e < config.experts; ++e) {
    p.weights.w_in.push_back(HeNormal(config.expert_hidden, config.input_dim, rng));
    p.weights.w_out.push_back(HeNormal(config.classes, config.expert_hidden, rng));
  }
  p.first_moment = ParamSet::Zeros(config);
  p.second_moment = ParamSet::Zeros(config);
  return p;
}

double Gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluScale * (x + kGeluCubic * x * x * x)));
}

double GeluDerivative(double x) {
  const double inner = kGeluScale * (x + kGeluCubic * x * x * x);
  const double t = std::tanh(inner);
  const double d_inner = kGeluScale * (1.0 + 3.0 * kGeluCubic * x * x);
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner;
}

ForwardTrace Forward(const ParamSet& params, const MoEConfig& config,
                     const Eigen::MatrixXd& x_batch) {
  if (x_batch.cols() != config.input_dim) {
    throw Error(ErrorKind::kInvalidShape, "input width does not match config");
  }
  RequireFinite(x_batch, "input batch");
  const int batch = static_cast<int>(x_batch.rows());
  const int k = config.k;

  ForwardTrace trace;
  trace.inputs = x_batch;
  trace.k = k;
  trace.samples.resize(batch);
  const Eigen::MatrixXd router_logits = x_batch * params.router.transpose();
  RequireFinite(router_logits, "router logits");

  for (int b = 0; b < batch; ++b) {
    SampleTrace& s = trace.samples[b];
    const Eigen::VectorXd x = x_batch.row(b).transpose();
    const Eigen::VectorXd h = router_logits.row(b).transpose();
    s.router_probs = Softmax(h);
    s.selected = TopK(h, k);
    s.gates.resize(k);
    double mass = 0.0;
    for (int j = 0; j < k; ++j) mass += s.router_probs(s.selected[j]);
    for (int j = 0; j < k; ++j) s.gates(j) = s.router_probs(s.selected[j]) / mass;

    s.pre_activation.resize(config.expert_hidden, k);
    s.hidden.resize(config.expert_hidden, k);
    s.expert_outputs.resize(config.classes, k);
    for (int j = 0; j < k; ++j) {
      const int e = s.selected[j];
      s.pre_activation.col(j).noalias() = params.w_in[e] * x;
      s.hidden.col(j) = s.pre_activation.col(j).unaryExpr(&Gelu);
      s.expert_outputs.col(j).noalias() = params.w_out[e] * s.hidden.col(j);
    }
    s.logits = s.expert_outputs * s.gates;
    s.class_probs = Softmax(s.logits);
    if (!s.expert_outputs.allFinite() || !s.class_probs.allFinite() ||
        !s.gates.allFinite()) {
      throw Error(ErrorKind::kNonFinite,
                  "non-finite forward state at sample " + std::to_string(b));
    }
  }
  return trace;
}

RoutingBatch RoutingFromTrace(const ForwardTrace& trace) {
  const int batch = trace.batch();
  const int experts = static_cast<int>(trace.samples.front().router_probs.size());
  Eigen::MatrixXd dense(batch, experts);
  std::vector<Support> selections(batch);
  for (int b = 0; b < batch; ++b) {
    dense.row(b) = trace.samples[b].router_probs.transpose();
    selections[b] = trace.samples[b].selected;
  }
  return RoutingBatch(std::move(dense), std::move(selections));
}

double RegularizerValue(const ForwardTrace& trace, const MoEConfig& config) {
  switch (config.reg) {
    case RegKind::kNone: return 0.0;
    case RegKind::kOrtho: return OrthoLoss(trace);
    case RegKind::kNcl: return NclLoss(trace);
    case RegKind::kDpp: return SoftDppLoss(trace, config.dpp_epsilon);
  }
  return 0.0;
}

LossBreakdown TotalLoss(const ForwardTrace& trace, const std::vector<int>& labels,
                        const MoEConfig& config) {
  if (static_cast<int>(labels.size()) != trace.batch()) {
    throw Error(ErrorKind::kInvalidShape, "one label per sample required");
  }
  LossBreakdown out;
  for (int b = 0; b < trace.batch(); ++b) {
    const Eigen::VectorXd& z = trace.samples[b].logits;
    out.task += LogSumExp(z) - z(labels[b]);
  }
  out.task /= trace.batch();
  // Skipped at zero weight so single-expert models (plain MLPs) evaluate.
  if (config.aux_weight != 0.0) {
    out.aux = config.aux_weight * AuxLoss(RoutingFromTrace(trace));
  }
  out.reg = config.reg_weight * RegularizerValue(trace, config);
  out.total = out.task + out.aux + out.reg;
  return out;
}

ParamSet Backward(const ParamSet& params, const ForwardTrace& trace,
                  const std::vector<int>& labels, const MoEConfig& config) {
  if (static_cast<int>(labels.size()) != trace.batch()) {
    throw Error(ErrorKind::kInvalidShape, "one label per sample required");
  }
  const int batch = trace.batch();
  const int k = trace.k;
  const double inv_batch = 1.0 / batch;
  ParamSet grads = ParamSet::Zeros(config);

  // dL/dp_{b,i} from alpha * E * sum_i f_i P_i with f held fixed.
  Eigen::VectorXd aux_grad = Eigen::VectorXd::Zero(config.experts);
  if (config.aux_weight != 0.0) {
    aux_grad = (config.aux_weight * config.experts * inv_batch) *
               RoutingFromTrace(trace).DispatchFractions();
  }

  OutputPenalty penalty;
  switch (config.reg) {
    case RegKind::kNone: break;
    case RegKind::kOrtho: penalty = OrthoPenalty(trace); break;
    case RegKind::kNcl: penalty = NclPenalty(trace); break;
    case RegKind::kDpp: penalty = SoftDppPenalty(trace, config.dpp_epsilon); break;
  }

  Eigen::MatrixXd d_router_logits(batch, config.experts);
  for (int b = 0; b < batch; ++b) {
    const SampleTrace& s = trace.samples[b];
    const Eigen::VectorXd x = trace.inputs.row(b).transpose();

    Eigen::VectorXd d_logits = s.class_probs;
    d_logits(labels[b]) -= 1.0;
    d_logits *= inv_batch;

    const Eigen::VectorXd d_gates = s.expert_outputs.transpose() * d_logits;
    Eigen::MatrixXd d_outputs = d_logits * s.gates.transpose();
    if (config.reg != RegKind::kNone) {
      d_outputs += config.reg_weight * penalty.d_outputs[b];
    }

    for (int j = 0; j < k; ++j) {
      const int e = s.selected[j];
      grads.w_out[e].noalias() += d_outputs.col(j) * s.hidden.col(j).transpose();
      Eigen::VectorXd d_pre = params.w_out[e].transpose() * d_outputs.col(j);
      for (int h = 0; h < d_pre.size(); ++h) {
        d_pre(h) *= GeluDerivative(s.pre_activation(h, j));
      }
      grads.w_in[e].noalias() += d_pre * x.transpose();
    }

    // gates_j = p_j / sum_{l in S} p_l.
    Eigen::VectorXd d_probs = aux_grad;
    double mass = 0.0;
    for (int j = 0; j < k; ++j) mass += s.router_probs(s.selected[j]);
    const double shared = d_gates.dot(s.gates) / mass;
    for (int j = 0; j < k; ++j) {
      d_probs(s.selected[j]) += d_gates(j) / mass - shared;
    }
    const double inner = d_probs.dot(s.router_probs);
    d_router_logits.row(b) =
        (s.router_probs.array() * (d_probs.array() - inner)).matrix().transpose();
  }
  grads.router.noalias() = d_router_logits.transpose() * trace.inputs;
  return grads;
}

void AdamWStep(MoEParams& params, const ParamSet& grads, const MoEConfig& config) {
  ++params.step;
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(params.step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(params.step));
  AdamWTensor(params.weights.router, params.first_moment.router,
              params.second_moment.router, grads.router, config, bias1, bias2);
  for (std::size_t e = 0; e < params.weights.w_in.size(); ++e) {
    AdamWTensor(params.weights.w_in[e], params.first_moment.w_in[e],
                params.second_moment.w_in[e], grads.w_in[e], config, bias1, bias2);
    AdamWTensor(params.weights.w_out[e], params.first_moment.w_out[e],
                params.second_moment.w_out[e], grads.w_out[e], config, bias1, bias2);
  }
}

}  // namespace moegeo
