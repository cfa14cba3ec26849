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
#ifndef MOEGEO_MOE_H_
#define MOEGEO_MOE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "moegeo/infotheory.h"
#include "moegeo/linalg.h"

namespace moegeo {

enum class RegKind { kNone, kOrtho, kNcl, kDpp };

std::string_view RegKindName(RegKind kind);
std::optional<RegKind> ParseRegKind(std::string_view name);

// Defaults reproduce the synthetic-experiment hyperparameters (16 experts,
// top-2, hidden 32, batch 128, AdamW at 1e-3, 30 epochs, alpha 0.01,
// lambda 0.1, seed 42). AdamW moments and decay follow common defaults.
struct MoEConfig {
  int input_dim = 100;
  int experts = 16;
  int k = 2;
  int expert_hidden = 32;
  int classes = 10;
  int batch = 128;
  double lr = 1e-3;
  int epochs = 30;
  double aux_weight = 0.01;
  double reg_weight = 0.1;
  RegKind reg = RegKind::kNone;
  std::uint64_t seed = 42;
  double dpp_epsilon = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.01;

  // Throws InvalidConfig on non-positive sizes/rates or k >= E.
  void Validate() const;
};

// One tensor per role: router W_g (E x D), and per expert W_in (H x D) and
// W_out (C x H). Also used for gradients and optimizer moments.
struct ParamSet {
  Eigen::MatrixXd router;
  std::vector<Eigen::MatrixXd> w_in;
  std::vector<Eigen::MatrixXd> w_out;

  static ParamSet Zeros(const MoEConfig& config);

  // fn(name, tensor) over router, w_in[0..E), w_out[0..E) in that order.
  template <typename Fn>
  void ForEachTensor(Fn&& fn) {
    fn(std::string("router"), router);
    for (std::size_t e = 0; e < w_in.size(); ++e) {
      fn("w_in[" + std::to_string(e) + "]", w_in[e]);
    }
    for (std::size_t e = 0; e < w_out.size(); ++e) {
      fn("w_out[" + std::to_string(e) + "]", w_out[e]);
    }
  }
  template <typename Fn>
  void ForEachTensor(Fn&& fn) const {
    const_cast<ParamSet*>(this)->ForEachTensor(
        [&](const std::string& name, Eigen::MatrixXd& t) {
          fn(name, static_cast<const Eigen::MatrixXd&>(t));
        });
  }
};

struct MoEParams {
  ParamSet weights;
  ParamSet first_moment;
  ParamSet second_moment;
  std::int64_t step = 0;
};

// He-normal initialization (std sqrt(2 / fan_in)) with zero moments.
MoEParams InitParams(const MoEConfig& config, std::uint64_t seed);

// tanh-approximate GELU and its exact derivative.
double Gelu(double x);
double GeluDerivative(double x);

struct SampleTrace {
  Eigen::VectorXd router_probs;    // E, dense softmax
  Support selected;                // k experts, ascending
  Eigen::VectorXd gates;           // k, renormalized over the selection
  Eigen::MatrixXd pre_activation;  // H x k
  Eigen::MatrixXd hidden;          // H x k, GELU(pre_activation)
  Eigen::MatrixXd expert_outputs;  // C x k
  Eigen::VectorXd logits;          // C, sum of gated expert outputs
  Eigen::VectorXd class_probs;     // C
};

struct ForwardTrace {
  Eigen::MatrixXd inputs;  // B x D
  std::vector<SampleTrace> samples;
  int k = 0;

  int batch() const { return static_cast<int>(samples.size()); }
};

// Router softmax, Top-k on the router logits (ties toward lower index),
// renormalized gates, selected experts, gated sum, class softmax.
// Throws NonFinite if any intermediate is NaN or Inf.
ForwardTrace Forward(const ParamSet& params, const MoEConfig& config,
                     const Eigen::MatrixXd& x_batch);

// Routing view of a trace for the load-balancing and entropy tools.
RoutingBatch RoutingFromTrace(const ForwardTrace& trace);

struct LossBreakdown {
  double task = 0.0;  // mean cross-entropy
  double aux = 0.0;   // alpha * E * sum f_i P_i
  double reg = 0.0;   // lambda * regularizer
  double total = 0.0;
};

double RegularizerValue(const ForwardTrace& trace, const MoEConfig& config);

LossBreakdown TotalLoss(const ForwardTrace& trace, const std::vector<int>& labels,
                        const MoEConfig& config);

// Analytic gradient of TotalLoss. The Top-k selection and the dispatch
// fractions f_i are held fixed; gradients reach the router through the
// renormalized gates and through the mean probabilities P_i.
ParamSet Backward(const ParamSet& params, const ForwardTrace& trace,
                  const std::vector<int>& labels, const MoEConfig& config);

// Decoupled weight decay then bias-corrected Adam update:
//   theta <- theta (1 - lr wd) - lr m_hat / (sqrt(v_hat) + eps).
void AdamWStep(MoEParams& params, const ParamSet& grads, const MoEConfig& config);

}  // namespace moegeo

#endif  // MOEGEO_MOE_H_
