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
#ifndef MOEGEO_REGULARIZERS_H_
#define MOEGEO_REGULARIZERS_H_

#include <vector>

#include <Eigen/Dense>

#include "moegeo/moe.h"

namespace moegeo {

// Batch-mean penalty value plus its gradient with respect to each sample's
// selected expert outputs (C x k, already divided by the batch size).
struct OutputPenalty {
  double value = 0.0;
  std::vector<Eigen::MatrixXd> d_outputs;
};

// Sum over ordered pairs i != j of squared cosine similarity between the
// selected expert outputs. Outputs with norm < 1e-8 are excluded.
OutputPenalty OrthoPenalty(const ForwardTrace& trace);
double OrthoLoss(const ForwardTrace& trace);

// -log det(L + eps I) with L the Gram matrix of the normalized selected
// outputs. Throws NotPSD on a pivot below -1e-9.
OutputPenalty SoftDppPenalty(const ForwardTrace& trace, double epsilon);
double SoftDppLoss(const ForwardTrace& trace, double epsilon);

// Sum over ordered pairs i != j of (p_i - pbar)^T (p_j - pbar), p_i the
// softmax of expert i's own logits and pbar their mean over the selection.
OutputPenalty NclPenalty(const ForwardTrace& trace);
double NclLoss(const ForwardTrace& trace);

struct AmbiguityTerms {
  double ensemble_err = 0.0;        // ||mean(outputs) - target||^2
  double mean_individual_err = 0.0; // mean ||output_i - target||^2
  double ambiguity = 0.0;           // mean ||output_i - mean||^2
  double gap = 0.0;                 // |ensemble - (individual - ambiguity)|
};

// outputs holds one candidate per column; the ensemble is their plain mean.
AmbiguityTerms AmbiguityDecomposition(const Eigen::MatrixXd& outputs,
                                      const Eigen::VectorXd& target);

}  // namespace moegeo

#endif  // MOEGEO_REGULARIZERS_H_
