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
#include "moegeo/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "moegeo/error.h"
#include "moegeo/infotheory.h"
#include "moegeo/parallel.h"
#include "moegeo/regularizers.h"
#include "moegeo/rng.h"

namespace moegeo {
namespace {

constexpr std::uint64_t kInitStream = 11;
constexpr std::uint64_t kShuffleStream = 12;
constexpr std::uint64_t kFoldStream = 13;

Eigen::MatrixXd GatherRows(const Eigen::MatrixXd& x, const std::vector<int>& rows,
                           std::size_t begin, std::size_t end) {
  Eigen::MatrixXd out(static_cast<int>(end - begin), x.cols());
  for (std::size_t i = begin; i < end; ++i) {
    out.row(static_cast<int>(i - begin)) = x.row(rows[i]);
  }
  return out;
}

std::vector<int> GatherLabels(const std::vector<int>& y, const std::vector<int>& rows,
                              std::size_t begin, std::size_t end) {
  std::vector<int> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(y[rows[i]]);
  return out;
}

void Evaluate(const ParamSet& params, const MoEConfig& config, const Split& test,
              const Eigen::MatrixXd& probe, EpochMetrics& m) {
  const ForwardTrace trace = Forward(params, config, test.x);
  int correct = 0;
  Eigen::VectorXd target = Eigen::VectorXd::Zero(config.classes);
  for (int b = 0; b < trace.batch(); ++b) {
    const SampleTrace& s = trace.samples[b];
    Eigen::Index pred = 0;
    s.class_probs.maxCoeff(&pred);
    correct += static_cast<int>(pred) == test.y[b];
    target.setZero();
    target(test.y[b]) = 1.0;
    m.ambiguity_gap = std::max(
        m.ambiguity_gap, AmbiguityDecomposition(s.expert_outputs, target).gap);
  }
  m.test_acc = static_cast<double>(correct) / trace.batch();

  const RoutingBatch routing = RoutingFromTrace(trace);
  const MutualInformation mi = EmpiricalMi(routing);
  m.marg_entropy = mi.h_z;
  m.cond_entropy = mi.h_z_given_x;
  m.collision_sum = routing.MeanProbabilities().squaredNorm();
  m.aux_unscaled = AuxLoss(routing);

  const Eigen::MatrixXd outputs = ExpertOutputMatrix(params, probe);
  m.eff_rank = EffectiveRankOfMatrix(outputs);
  m.coherence = RowCoherence(outputs);
}

}  // namespace

Eigen::MatrixXd ExpertOutputMatrix(const ParamSet& params,
                                   const Eigen::MatrixXd& probe) {
  const int experts = static_cast<int>(params.w_in.size());
  const int classes = static_cast<int>(params.w_out.front().rows());
  const int samples = static_cast<int>(probe.rows());
  Eigen::MatrixXd m(experts, samples * classes);
  for (int e = 0; e < experts; ++e) {
    const Eigen::MatrixXd hidden =
        (params.w_in[e] * probe.transpose()).unaryExpr(&Gelu);
    const Eigen::MatrixXd out = params.w_out[e] * hidden;  // C x P
    m.row(e) = Eigen::Map<const Eigen::RowVectorXd>(out.data(), out.size());
  }
  return m;
}

double EffectiveRankOfMatrix(const Eigen::MatrixXd& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::kDegenerateProbe, "expert output matrix is zero");
  }
  // Thin QR of the tall transpose first; the SVD then runs on an E x E factor.
  Eigen::VectorXd sigma;
  if (m.cols() > m.rows()) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m.transpose());
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(m.rows()).triangularView<Eigen::Upper>();
    sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  } else {
    sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  }
  const Eigen::VectorXd normalized = sigma / sigma.sum();
  return std::exp(ShannonEntropy(normalized));
}

double EffectiveRank(const ParamSet& params, const Eigen::MatrixXd& probe) {
  return EffectiveRankOfMatrix(ExpertOutputMatrix(params, probe));
}

double RowCoherence(const Eigen::MatrixXd& m) {
  std::vector<int> live;
  Eigen::MatrixXd unit = m;
  for (int i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (n > 1e-12) {
      unit.row(i) /= n;
      live.push_back(i);
    }
  }
  double mu = 0.0;
  for (std::size_t a = 0; a < live.size(); ++a) {
    for (std::size_t b = a + 1; b < live.size(); ++b) {
      mu = std::max(mu, std::abs(unit.row(live[a]).dot(unit.row(live[b]))));
    }
  }
  return mu;
}

Eigen::MatrixXd SpecializationHeatmap(const ParamSet& params,
                                      const MoEConfig& config,
                                      const Eigen::MatrixXd& x,
                                      const std::vector<int>& labels) {
  const ForwardTrace trace = Forward(params, config, x);
  Eigen::MatrixXd heat = Eigen::MatrixXd::Zero(config.experts, config.classes);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(config.classes);
  for (int b = 0; b < trace.batch(); ++b) {
    counts(labels[b]) += 1.0;
    for (int e : trace.samples[b].selected) heat(e, labels[b]) += 1.0;
  }
  for (int c = 0; c < config.classes; ++c) {
    if (counts(c) > 0.0) heat.col(c) /= counts(c);
  }
  return heat;
}

double MeanColumnEntropy(const Eigen::MatrixXd& heatmap) {
  double sum = 0.0;
  int cols = 0;
  for (int c = 0; c < heatmap.cols(); ++c) {
    const double total = heatmap.col(c).sum();
    if (total <= 0.0) continue;
    sum += ShannonEntropy(Eigen::VectorXd(heatmap.col(c) / total));
    ++cols;
  }
  return cols == 0 ? 0.0 : sum / cols;
}

TrainReport TrainFold(const MoEConfig& config, const Split& train,
                      const Split& test, int fold) {
  config.Validate();
  if (train.x.rows() == 0 || test.x.rows() == 0) {
    throw Error(ErrorKind::kInvalidConfig, "empty train or test split");
  }
  TrainReport report;
  report.fold = fold;
  report.reg = config.reg;

  const auto fold_id = static_cast<std::uint64_t>(fold);
  MoEParams params =
      InitParams(config, Rng::Stream(config.seed, {kInitStream, fold_id}).key());
  const int probe_rows =
      std::min<int>(kEffectiveRankProbe, static_cast<int>(train.x.rows()));
  const Eigen::MatrixXd probe = train.x.topRows(probe_rows);
  const std::size_t n_train = train.y.size();
  const std::size_t batch = static_cast<std::size_t>(config.batch);

  try {
    // Epoch 0: losses over the training split without updates.
    {
      EpochMetrics m;
      std::vector<int> order(n_train);
      std::iota(order.begin(), order.end(), 0);
      double weight = 0.0;
      for (std::size_t start = 0; start < n_train; start += batch) {
        const std::size_t end = std::min(n_train, start + batch);
        const ForwardTrace trace =
            Forward(params.weights, config, GatherRows(train.x, order, start, end));
        const LossBreakdown loss =
            TotalLoss(trace, GatherLabels(train.y, order, start, end), config);
        const double w = static_cast<double>(end - start);
        m.loss_task += w * loss.task;
        m.loss_aux += w * loss.aux;
        m.loss_reg += w * loss.reg;
        weight += w;
      }
      m.loss_task /= weight;
      m.loss_aux /= weight;
      m.loss_reg /= weight;
      Evaluate(params.weights, config, test, probe, m);
      report.epochs.push_back(m);
    }

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      std::vector<int> order(n_train);
      std::iota(order.begin(), order.end(), 0);
      Rng shuffle = Rng::Stream(config.seed, {kShuffleStream, fold_id,
                                              static_cast<std::uint64_t>(epoch)});
      shuffle.Shuffle(order);

      EpochMetrics m;
      m.epoch = epoch;
      double weight = 0.0;
      for (std::size_t start = 0; start < n_train; start += batch) {
        const std::size_t end = std::min(n_train, start + batch);
        const Eigen::MatrixXd xb = GatherRows(train.x, order, start, end);
        const std::vector<int> yb = GatherLabels(train.y, order, start, end);
        const ForwardTrace trace = Forward(params.weights, config, xb);
        const LossBreakdown loss = TotalLoss(trace, yb, config);
        const double w = static_cast<double>(end - start);
        m.loss_task += w * loss.task;
        m.loss_aux += w * loss.aux;
        m.loss_reg += w * loss.reg;
        weight += w;
        const ParamSet grads = Backward(params.weights, trace, yb, config);
        AdamWStep(params, grads, config);
      }
      m.loss_task /= weight;
      m.loss_aux /= weight;
      m.loss_reg /= weight;
      Evaluate(params.weights, config, test, probe, m);
      report.epochs.push_back(m);
    }
    report.specialization =
        SpecializationHeatmap(params.weights, config, test.x, test.y);
  } catch (const Error& e) {
    if (!e.is_numerical()) throw;
    report.aborted = true;
    report.abort_reason = std::string(ErrorKindName(e.kind())) + ": " + e.what();
  }
  return report;
}

std::vector<int> StratifiedFolds(const std::vector<int>& labels, int folds,
                                 std::uint64_t seed) {
  if (folds < 2 || static_cast<std::size_t>(folds) > labels.size()) {
    throw Error(ErrorKind::kInvalidConfig, "folds must lie in [2, samples]");
  }
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> by_class(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i]].push_back(static_cast<int>(i));
  }
  std::vector<int> assignment(labels.size(), -1);
  std::size_t dealt = 0;
  for (int c = 0; c < classes; ++c) {
    Rng rng = Rng::Stream(seed, {kFoldStream, static_cast<std::uint64_t>(c)});
    rng.Shuffle(by_class[c]);
    for (int idx : by_class[c]) assignment[idx] = static_cast<int>(dealt++ % folds);
  }
  return assignment;
}

CrossValidation CrossValidate(const MoEConfig& config,
                              const ClassificationDataset& data, int folds,
                              int parallelism) {
  config.Validate();
  if (data.features.cols() != config.input_dim) {
    throw Error(ErrorKind::kInvalidConfig, "dataset width does not match input_dim");
  }
  const std::vector<int> assignment = StratifiedFolds(data.labels, folds, config.seed);

  CrossValidation cv;
  cv.folds.resize(folds);
  ParallelFor(static_cast<std::size_t>(folds), parallelism, [&](std::size_t f) {
    std::vector<int> train_rows, test_rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      (assignment[i] == static_cast<int>(f) ? test_rows : train_rows)
          .push_back(static_cast<int>(i));
    }
    Split train{GatherRows(data.features, train_rows, 0, train_rows.size()),
                GatherLabels(data.labels, train_rows, 0, train_rows.size())};
    Split test{GatherRows(data.features, test_rows, 0, test_rows.size()),
               GatherLabels(data.labels, test_rows, 0, test_rows.size())};
    cv.folds[f] = TrainFold(config, train, test, static_cast<int>(f));
  });

  // Deterministic fold-ordered reduction over completed folds.
  cv.mean_eff_rank.assign(config.epochs + 1, 0.0);
  cv.mean_heatmap = Eigen::MatrixXd::Zero(config.experts, config.classes);
  std::vector<double> accs;
  for (const TrainReport& r : cv.folds) {
    if (r.aborted) continue;
    ++cv.completed;
    accs.push_back(r.final().test_acc);
    cv.mean_final_eff_rank += r.final().eff_rank;
    for (std::size_t e = 0; e < r.epochs.size(); ++e) {
      cv.mean_eff_rank[e] += r.epochs[e].eff_rank;
    }
    cv.mean_heatmap += r.specialization;
  }
  if (cv.completed > 0) {
    const double n = cv.completed;
    for (double a : accs) cv.mean_final_acc += a;
    cv.mean_final_acc /= n;
    double var = 0.0;
    for (double a : accs) var += (a - cv.mean_final_acc) * (a - cv.mean_final_acc);
    cv.std_final_acc = std::sqrt(var / n);
    cv.mean_final_eff_rank /= n;
    for (double& v : cv.mean_eff_rank) v /= n;
    cv.mean_heatmap /= n;
  }
  return cv;
}

void WriteRunCsv(std::ostream& out, const std::vector<TrainReport>& reports) {
  out << "fold,epoch,loss_task,loss_aux,loss_reg,test_acc,eff_rank,coherence,"
         "marg_entropy\n";
  char buf[256];
  for (const TrainReport& r : reports) {
    for (const EpochMetrics& m : r.epochs) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                    r.fold, m.epoch, m.loss_task, m.loss_aux, m.loss_reg,
                    m.test_acc, m.eff_rank, m.coherence, m.marg_entropy);
      out << buf;
    }
  }
}

void WriteHeatmapCsv(std::ostream& out, const Eigen::MatrixXd& heatmap) {
  out << "expert,class,freq\n";
  char buf[96];
  for (int e = 0; e < heatmap.rows(); ++e) {
    for (int c = 0; c < heatmap.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.6g\n", e, c, heatmap(e, c));
      out << buf;
    }
  }
}

}  // namespace moegeo
