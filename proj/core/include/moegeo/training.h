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
#ifndef MOEGEO_TRAINING_H_
#define MOEGEO_TRAINING_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moegeo/dictgen.h"
#include "moegeo/moe.h"

namespace moegeo {

inline constexpr int kEffectiveRankProbe = 256;

// E x (P * C) matrix whose row e is expert e's outputs on every probe sample,
// evaluated densely (routing ignored), sample-major.
Eigen::MatrixXd ExpertOutputMatrix(const ParamSet& params,
                                   const Eigen::MatrixXd& probe);

// exp of the Shannon entropy of the trace-normalized singular values of m.
// Throws DegenerateProbe when m is identically zero.
double EffectiveRankOfMatrix(const Eigen::MatrixXd& m);
double EffectiveRank(const ParamSet& params, const Eigen::MatrixXd& probe);

// Mutual coherence of the rows of m (zero rows are skipped).
double RowCoherence(const Eigen::MatrixXd& m);

// Entry (e, c): fraction of class-c samples whose Top-k selection contains e.
// Columns sum to k (classes without samples stay zero).
Eigen::MatrixXd SpecializationHeatmap(const ParamSet& params,
                                      const MoEConfig& config,
                                      const Eigen::MatrixXd& x,
                                      const std::vector<int>& labels);

// Mean over classes of the Shannon entropy of each heatmap column / k.
double MeanColumnEntropy(const Eigen::MatrixXd& heatmap);

struct Split {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

struct EpochMetrics {
  int epoch = 0;
  double loss_task = 0.0;
  double loss_aux = 0.0;
  double loss_reg = 0.0;
  double test_acc = 0.0;
  double eff_rank = 0.0;
  double coherence = 0.0;
  double marg_entropy = 0.0;     // H(Z) of the test-split aggregated posterior
  double cond_entropy = 0.0;     // H(Z | X) of the renormalized gates
  double collision_sum = 0.0;    // sum_i P_i^2 on the test split
  double aux_unscaled = 0.0;     // E * sum f_i P_i on the test split
  double ambiguity_gap = 0.0;    // worst identity gap over the test split
};

struct TrainReport {
  int fold = 0;
  RegKind reg = RegKind::kNone;
  std::vector<EpochMetrics> epochs;  // epochs[0] is the untrained model
  Eigen::MatrixXd specialization;    // E x C on the test split
  bool aborted = false;
  std::string abort_reason;

  const EpochMetrics& final() const { return epochs.back(); }
};

// Trains one fold from (config.seed, fold). Initialization and batch order do
// not depend on config.reg, so regularizer arms share both.
TrainReport TrainFold(const MoEConfig& config, const Split& train,
                      const Split& test, int fold);

// Fold id per sample: each class is shuffled and dealt round-robin with a
// running offset, so folds are balanced within one sample overall and per
// class.
std::vector<int> StratifiedFolds(const std::vector<int>& labels, int folds,
                                 std::uint64_t seed);

struct CrossValidation {
  std::vector<TrainReport> folds;
  int completed = 0;
  double mean_final_acc = 0.0;
  double std_final_acc = 0.0;  // population standard deviation
  double mean_final_eff_rank = 0.0;
  std::vector<double> mean_eff_rank;  // per epoch
  Eigen::MatrixXd mean_heatmap;
};

CrossValidation CrossValidate(const MoEConfig& config,
                              const ClassificationDataset& data, int folds,
                              int parallelism);

// fold,epoch,loss_task,loss_aux,loss_reg,test_acc,eff_rank,coherence,marg_entropy
void WriteRunCsv(std::ostream& out, const std::vector<TrainReport>& reports);
// expert,class,freq
void WriteHeatmapCsv(std::ostream& out, const Eigen::MatrixXd& heatmap);

}  // namespace moegeo

#endif  // MOEGEO_TRAINING_H_
