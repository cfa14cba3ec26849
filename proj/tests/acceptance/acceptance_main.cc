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
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moegeo/dictgen.h"
#include "moegeo/dictionary.h"
#include "moegeo/diversity.h"
#include "moegeo/infotheory.h"
#include "moegeo/moe.h"
#include "moegeo/parallel.h"
#include "moegeo/regularizers.h"
#include "moegeo/rng.h"
#include "moegeo/sss.h"
#include "moegeo/training.h"
#include "support/oracles.h"

namespace moegeo {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates failures with the first offending instance as detail.
class Tally {
 public:
  void Expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome Result(const std::string& summary) const {
    std::ostringstream s;
    s << summary << "; " << checks_ << " checks";
    if (failures_ > 0) s << ", " << failures_ << " failed, first: " << first_;
    return {ok(), s.str()};
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::string first_;
};

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

int Between(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.Index(static_cast<std::uint64_t>(hi - lo + 1)));
}

Eigen::VectorXd RandomDistribution(Rng& rng, int n) {
  // A third of the draws are coarsely quantized to exercise ties.
  Eigen::VectorXd p = oracle::RandomSimplex(rng, n);
  if (rng.Index(3) == 0) {
    for (int i = 0; i < n; ++i) p(i) = 1.0 + static_cast<double>(rng.Index(3));
    p /= p.sum();
  }
  return p;
}

Eigen::MatrixXd RandomRouterProbs(Rng& rng, int tokens, int experts) {
  const double temperature = 0.2 + 3.0 * rng.Uniform();
  Eigen::MatrixXd dense(tokens, experts);
  for (int t = 0; t < tokens; ++t) {
    dense.row(t) =
        oracle::LoopSoftmax(temperature * oracle::GaussianVector(rng, experts)).transpose();
  }
  return dense;
}

Outcome KlProjection() {
  Rng rng = Rng::Stream(101, {1});
  Tally tally;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int e = Between(rng, 2, 8);
    const int k = Between(rng, 1, std::min(4, e));
    const Eigen::VectorXd p = RandomDistribution(rng, e);
    const SparseProjection proj = KlSparseProject(CategoricalDist(p), k);
    const oracle::KlOracle truth = oracle::ExhaustiveKl(p, k);
    const std::string tag = "trial " + std::to_string(t);
    const bool among = std::find(truth.minimizers.begin(), truth.minimizers.end(),
                                 proj.support) != truth.minimizers.end();
    tally.Expect(among, tag + ": support is not a brute-force minimizer");
    double mass = 0.0;
    for (int j : proj.support) mass += p(j);
    const double closed = -std::log(mass);
    worst = std::max({worst, std::abs(proj.kl - closed), std::abs(proj.kl - truth.min_kl)});
    tally.Expect(std::abs(proj.kl - closed) <= 1e-10, tag + ": kl off closed form");
    tally.Expect(std::abs(proj.kl - truth.min_kl) <= 1e-10, tag + ": kl off brute force");
    double q_err = 0.0;
    std::set<int> in(proj.support.begin(), proj.support.end());
    for (int j = 0; j < e; ++j) {
      q_err = std::max(q_err, std::abs(proj.q[j] - (in.count(j) ? p(j) / mass : 0.0)));
    }
    tally.Expect(q_err <= 1e-12, tag + ": q is not the renormalized restriction");
  }
  return tally.Result(Fmt("1000 distributions, max kl deviation %.3g", worst));
}

Outcome CollisionIdentity() {
  Rng rng = Rng::Stream(101, {2});
  Tally tally;
  double worst_gap = 0.0, worst_floor = 0.0, worst_uniform = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int e = Between(rng, 2, 16);
    const int k = Between(rng, 1, e - 1);
    const RoutingBatch batch =
        RoutingBatch::FromDense(RandomRouterProbs(rng, Between(rng, 1, 64), e), k);
    const CollisionCheck c = CollisionIdentityCheck(batch);
    worst_gap = std::max(worst_gap, c.gap);
    tally.Expect(c.gap <= 1e-9, "identity gap at trial " + std::to_string(t));
    const Eigen::VectorXd marginal = batch.MeanProbabilities();
    const double excess = marginal.squaredNorm() - 1.0 / e;
    const double distance = (marginal.array() - 1.0 / e).matrix().squaredNorm();
    tally.Expect(excess >= -1e-15, "floor violated at trial " + std::to_string(t));
    // sum P^2 - 1/E equals the squared distance to uniform, so equality forces uniform.
    worst_floor = std::max(worst_floor, std::abs(excess - distance));
    tally.Expect(std::abs(excess - distance) <= 1e-12,
                 "floor excess is not the distance to uniform at trial " + std::to_string(t));
  }
  for (int t = 0; t < 100; ++t) {
    const int e = Between(rng, 2, 16);
    const Eigen::VectorXd minimizer =
        oracle::MinimizeCollision(oracle::RandomSimplex(rng, e), 2000, 0.25);
    const double dev = (minimizer.array() - 1.0 / e).abs().maxCoeff();
    worst_uniform = std::max(worst_uniform, dev);
    tally.Expect(dev < 1e-6, "descent minimizer not uniform at run " + std::to_string(t));
    const double floor = Renyi2Entropy(minimizer);
    tally.Expect(std::abs(floor - std::log(static_cast<double>(e))) < 1e-9,
                 "Renyi-2 entropy at the minimizer is not log E");
  }
  return tally.Result(Fmt("max gap %.3g, floor identity error %.3g, minimizer deviation %.3g",
                          worst_gap, worst_floor, worst_uniform));
}

Outcome EntropyBound() {
  Rng rng = Rng::Stream(101, {3});
  Tally tally;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_uniform = 0.0;
  const int ks[] = {1, 2, 4};
  for (int t = 0; t < 1000; ++t) {
    const int k = ks[t % 3];
    const int e = Between(rng, k + 1, 16);
    const RoutingBatch batch =
        RoutingBatch::FromDense(RandomRouterProbs(rng, Between(rng, 1, 64), e), k);
    const double h = TopKConditionalEntropy(batch);
    worst_slack = std::min(worst_slack, std::log(k) - h);
    tally.Expect(h <= std::log(k) + 1e-9, "bound exceeded at trial " + std::to_string(t));
  }
  for (int k : ks) {
    for (int e = k + 1; e <= 16; ++e) {
      const Eigen::MatrixXd dense = Eigen::MatrixXd::Constant(8, e, 1.0 / e);
      const double h = TopKConditionalEntropy(RoutingBatch::FromDense(dense, k));
      worst_uniform = std::max(worst_uniform, std::abs(h - std::log(k)));
      tally.Expect(std::abs(h - std::log(k)) <= 1e-9, "uniform rows miss log k");
    }
  }
  return tally.Result(Fmt("min slack %.3g, uniform-row deviation %.3g", worst_slack,
                          worst_uniform));
}

struct BarrierRun {
  BarrierCurve curve;
  std::string csv;
};

BarrierRun RunBarrier(int parallelism) {
  SweepSpec spec;
  spec.mu_grid = DefaultMuGrid();
  spec.k = 6;
  spec.trials = 200;
  spec.law = CoefficientLaw::kRademacher;
  spec.parallelism = parallelism;
  BarrierRun run;
  run.curve = BarrierSweep(spec);
  std::ostringstream csv;
  WriteBarrierCsv(csv, run.curve);
  run.csv = csv.str();
  return run;
}

Outcome Barrier(const BarrierRun& run) {
  const BarrierCurve& c = run.curve;
  Tally tally;
  const double bound = 1.0 / 11.0;
  tally.Expect(std::abs(c.theoretical_bound - bound) < 1e-15, "bound is not 1/11");
  int below = 0;
  for (std::size_t g = 0; g < c.mu_grid.size(); ++g) {
    for (const RecoveryOutcome& o : c.outcomes[g]) {
      if (o.mu_measured >= bound) continue;
      ++below;
      tally.Expect(o.greedy_exact, Fmt("greedy missed at measured mu %.4g", o.mu_measured));
    }
    if (c.mu_measured_max[g] < bound) {
      tally.Expect(c.success_rate_greedy[g] == 1.0,
                   Fmt("grid point %.4g below bound has rate %.3f", c.mu_grid[g],
                       c.success_rate_greedy[g]));
    }
  }
  tally.Expect(below > 0, "no trial landed below the bound");
  const double last = c.success_rate_greedy.back();
  tally.Expect(last < 0.5, Fmt("rate %.3f at the highest coherence", last));
  const std::vector<double> smooth = MovingAverage3(c.success_rate_greedy);
  for (std::size_t g = 1; g < smooth.size(); ++g) {
    tally.Expect(smooth[g] <= smooth[g - 1],
                 Fmt("smoothed curve rises at grid point %.4g", c.mu_grid[g]));
  }
  return tally.Result(Fmt("%.0f trials below 1/11 all exact, final rate %.3f", below, last));
}

Outcome OrthogonalEquivalence() {
  Rng rng = Rng::Stream(101, {5});
  Tally tally;
  for (int t = 0; t < 500; ++t) {
    const int n = Between(rng, 2, 12);
    const int d = Between(rng, n, n + 8);
    const int k = Between(rng, 1, std::min(4, n));
    const UnitDictionary dict = RandomOrthonormalDictionary(d, n, rng.NextU64());
    const Eigen::VectorXd y = t % 2 == 0
                                  ? oracle::GaussianVector(rng, d)
                                  : PlantedSignal(dict, k, rng.NextU64()).vector +
                                        0.3 * oracle::GaussianVector(rng, d);
    const Support greedy = GreedyTopKSelect(dict, y, k);
    const SparseSolution brute = BruteForceSss(dict, y, k);
    tally.Expect(greedy == brute.support, "supports differ at trial " + std::to_string(t));
    tally.Expect(greedy == oracle::ExhaustiveSupport(dict.matrix(), y, k),
                 "greedy differs from the QR oracle at trial " + std::to_string(t));
  }
  return tally.Result("500 orthonormal dictionaries");
}

Outcome Submodularity() {
  Rng rng = Rng::Stream(101, {6});
  Tally tally;
  const double floor = 1.0 - std::exp(-1.0);
  double worst_ratio = std::numeric_limits<double>::infinity();
  long violations = 0, samples = 0, instances = 0;
  for (int kernel_index = 0; kernel_index < 50; ++kernel_index) {
    const int n = Between(rng, 5, 12);
    const int d = Between(rng, 2, n + 2);
    const double eps = kernel_index % 2 == 0 ? 1e-4 : 0.1;
    const Kernel kernel = Kernel::FromFeatures(
        NormalizeColumns(oracle::GaussianMatrix(rng, d, n)), eps);
    const SubmodularityReport audit = SubmodularityAudit(kernel, 1000, rng.NextU64());
    violations += audit.violations;
    samples += audit.samples;
    tally.Expect(audit.violations == 0 && audit.samples == 1000,
                 "audit violation on kernel " + std::to_string(kernel_index));
    for (int k = 1; k <= std::min(4, n); ++k) {
      ++instances;
      const double greedy = ShiftedLogDet(kernel, DppGreedySelect(kernel, k));
      double best = -std::numeric_limits<double>::infinity();
      oracle::ForEachSubset(n, k, [&](const std::vector<int>& s) {
        best = std::max(best, std::log(oracle::CofactorDeterminant(kernel.Regularized(s))) -
                                  k * std::log(eps));
      });
      tally.Expect(std::abs(ShiftedLogDet(kernel, DppExhaustiveSelect(kernel, k)) - best) <=
                       1e-7 * std::max(1.0, best),
                   "exhaustive search disagrees with the cofactor oracle");
      const double ratio = best > 0.0 ? greedy / best : 1.0;
      worst_ratio = std::min(worst_ratio, ratio);
      tally.Expect(ratio >= floor - 1e-9, Fmt("greedy ratio %.6f below 1 - 1/e", ratio));
    }
  }
  std::ostringstream s;
  s << violations << " violations in " << samples << " chains, " << instances
    << " instances, worst greedy ratio " << worst_ratio;
  return tally.Result(s.str());
}

Outcome Ambiguity() {
  Rng rng = Rng::Stream(101, {7});
  Tally tally;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = Between(rng, 1, 8);
    const int dim = Between(rng, 1, 16);
    const double scale = std::pow(10.0, rng.Uniform(-2.0, 2.0));
    const Eigen::MatrixXd outputs = scale * oracle::GaussianMatrix(rng, dim, k);
    const Eigen::VectorXd target = scale * oracle::GaussianVector(rng, dim);
    const AmbiguityTerms a = AmbiguityDecomposition(outputs, target);
    double ens = 0.0, ind = 0.0, amb = 0.0;
    for (int r = 0; r < dim; ++r) {
      double mean = 0.0;
      for (int i = 0; i < k; ++i) mean += outputs(r, i) / k;
      ens += (mean - target(r)) * (mean - target(r));
      for (int i = 0; i < k; ++i) {
        ind += (outputs(r, i) - target(r)) * (outputs(r, i) - target(r)) / k;
        amb += (outputs(r, i) - mean) * (outputs(r, i) - mean) / k;
      }
    }
    const double norm = std::max(1.0, ind);
    const bool terms_ok = std::abs(a.ensemble_err - ens) <= 1e-12 * std::max(1.0, ens) &&
                          std::abs(a.mean_individual_err - ind) <= 1e-12 * norm &&
                          std::abs(a.ambiguity - amb) <= 1e-12 * std::max(1.0, amb);
    tally.Expect(terms_ok, "terms disagree with the loop oracle at trial " + std::to_string(t));
    worst = std::max(worst, a.gap);
    tally.Expect(a.gap <= 1e-10, Fmt("gap %.3g", a.gap));
  }
  return tally.Result(Fmt("1000 ensembles, max gap %.3g", worst));
}

std::vector<Eigen::MatrixXd> Tensors(const ParamSet& p) {
  std::vector<Eigen::MatrixXd> out;
  p.ForEachTensor([&](const std::string&, const Eigen::MatrixXd& t) { out.push_back(t); });
  return out;
}

Outcome Gradients() {
  Tally tally;
  double worst = 0.0;
  int skipped = 0;
  for (RegKind reg : {RegKind::kNone, RegKind::kOrtho, RegKind::kNcl, RegKind::kDpp}) {
    MoEConfig c;
    c.input_dim = 12;
    c.experts = 8;
    c.k = 2;
    c.expert_hidden = 10;
    c.classes = 5;
    c.batch = 4;
    c.reg = reg;
    c.aux_weight = 0.05;
    c.reg_weight = 0.5;
    c.dpp_epsilon = 0.1;
    Rng rng = Rng::Stream(101, {8, static_cast<std::uint64_t>(reg)});
    for (int t = 0; t < 5; ++t) {
      const ParamSet params = InitParams(c, rng.NextU64()).weights;
      const Eigen::MatrixXd x = oracle::GaussianMatrix(rng, c.batch, c.input_dim);
      std::vector<int> y(c.batch);
      for (int& v : y) v = static_cast<int>(rng.Index(c.classes));
      const std::vector<Eigen::MatrixXd> analytic =
          Tensors(Backward(params, Forward(params, c, x), y, c));
      const oracle::FdGradient fd = oracle::FiniteDifference(params, c, x, y);
      skipped += fd.skipped;
      const std::vector<Eigen::MatrixXd> numeric = Tensors(fd.grad);
      const std::vector<Eigen::MatrixXd> mask = Tensors(fd.unstable);
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const Eigen::MatrixXd a = (mask[i].array() > 0.0).select(0.0, analytic[i]);
        const double scale = std::max(a.norm(), numeric[i].norm());
        if (scale < 1e-12) continue;
        const double rel = (a - numeric[i]).norm() / scale;
        worst = std::max(worst, rel);
        tally.Expect(rel < 1e-4, std::string(RegKindName(reg)) + Fmt(" tensor %.0f rel %.3g",
                                                                    static_cast<double>(i), rel));
      }
    }
  }
  return tally.Result(Fmt("4 regularizers x 5 batches, max relative error %.3g, %.0f "
                          "selection-unstable entries skipped",
                          worst, skipped));
}

struct ArmRun {
  RegKind reg;
  CrossValidation cv;
  std::string run_csv;
  std::string heatmap_csv;
};

std::vector<ArmRun> RunArms(int parallelism) {
  const ClassificationDataset data = SyntheticClassification(ClassificationSpec{});
  std::vector<ArmRun> arms;
  for (RegKind reg : {RegKind::kNone, RegKind::kOrtho, RegKind::kNcl, RegKind::kDpp}) {
    MoEConfig config;
    config.reg = reg;
    ArmRun arm{reg, CrossValidate(config, data, 10, parallelism), {}, {}};
    std::ostringstream run, heat;
    WriteRunCsv(run, arm.cv.folds);
    WriteHeatmapCsv(heat, arm.cv.mean_heatmap);
    arm.run_csv = run.str();
    arm.heatmap_csv = heat.str();
    arms.push_back(std::move(arm));
  }
  return arms;
}

Outcome Orderings(const std::vector<ArmRun>& arms) {
  Tally tally;
  for (const ArmRun& a : arms) {
    tally.Expect(a.cv.completed == 10,
                 std::string(RegKindName(a.reg)) + " did not complete every fold");
  }
  const CrossValidation& base = arms[0].cv;
  const double rank1 = base.mean_eff_rank[1];
  const double rank30 = base.mean_eff_rank.back();
  tally.Expect(rank30 < rank1, Fmt("baseline rank %.4f at epoch 30 vs %.4f at epoch 1",
                                   rank30, rank1));
  for (std::size_t i = 1; i < arms.size(); ++i) {
    tally.Expect(arms[i].cv.mean_final_eff_rank > base.mean_final_eff_rank,
                 std::string(RegKindName(arms[i].reg)) + " rank not above baseline");
  }
  tally.Expect(arms[1].cv.mean_final_acc >= base.mean_final_acc - 0.01,
               Fmt("ortho acc %.4f vs baseline %.4f", arms[1].cv.mean_final_acc,
                   base.mean_final_acc));
  for (const ArmRun& a : arms) {
    tally.Expect(a.cv.mean_final_acc > 0.40,
                 std::string(RegKindName(a.reg)) + Fmt(" acc %.4f", a.cv.mean_final_acc));
  }
  std::ostringstream s;
  s << "baseline rank " << rank1 << " -> " << rank30;
  for (const ArmRun& a : arms) {
    s << "; " << RegKindName(a.reg) << " acc " << a.cv.mean_final_acc << " rank "
      << a.cv.mean_final_eff_rank;
  }
  return tally.Result(s.str());
}

Outcome Determinism(const BarrierRun& barrier, const std::vector<ArmRun>& arms,
                    int parallelism) {
  const int other = parallelism == 1 ? 3 : 1;
  Tally tally;
  tally.Expect(RunBarrier(parallelism).csv == barrier.csv, "barrier rerun differs");
  tally.Expect(RunBarrier(other + 1).csv == barrier.csv,
               "barrier differs under another parallelism");
  const std::vector<ArmRun> again = RunArms(other);
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const std::string name(RegKindName(arms[i].reg));
    tally.Expect(again[i].run_csv == arms[i].run_csv, name + " run.csv differs");
    tally.Expect(again[i].heatmap_csv == arms[i].heatmap_csv, name + " heatmap.csv differs");
    tally.Expect(again[i].cv.mean_final_acc == arms[i].cv.mean_final_acc &&
                     again[i].cv.mean_final_eff_rank == arms[i].cv.mean_final_eff_rank,
                 name + " aggregates differ");
  }
  std::ostringstream s;
  s << "barrier at parallelism " << parallelism << " and " << other + 1
    << ", training at " << parallelism << " and " << other;
  return tally.Result(s.str());
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace moegeo

int main(int argc, char** argv) {
  using namespace moegeo;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto selected = [&](int id) { return only.empty() || only.count(id) > 0; };

  const int parallelism = DefaultParallelism();
  BarrierRun barrier;
  std::vector<ArmRun> arms;
  const std::vector<Criterion> criteria = {
      {1, "kl projection matches brute force", 5, KlProjection},
      {2, "collision identity and uniform floor", 5, CollisionIdentity},
      {3, "top-k conditional entropy bound", 5, EntropyBound},
      {4, "greedy recovery barrier", 120,
       [&] {
         barrier = RunBarrier(parallelism);
         return Barrier(barrier);
       }},
      {5, "greedy optimal on orthonormal dictionaries", 30, OrthogonalEquivalence},
      {6, "log-det submodularity and greedy bound", 60, Submodularity},
      {7, "ambiguity decomposition identity", 2, Ambiguity},
      {8, "analytic gradients match finite differences", 60, Gradients},
      {9, "regularizer orderings under cross-validation", 1800,
       [&] {
         arms = RunArms(parallelism);
         return Orderings(arms);
       }},
      {10, "determinism across reruns and parallelism", 0,
       [&] {
         if (barrier.csv.empty()) barrier = RunBarrier(parallelism);
         if (arms.empty()) arms = RunArms(parallelism);
         return Determinism(barrier, arms, parallelism);
       }},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    if (!selected(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += Fmt("; exceeded %.0f s budget", c.budget_seconds);
    }
    all = all && o.pass;
    std::printf("%s criterion %d: %s (%.2f s) -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  if (!arms.empty()) {
    for (const ArmRun& a : arms) {
      std::printf("INFO heatmap mean column entropy %s: %.4f\n", RegKindName(a.reg).data(),
                  MeanColumnEntropy(a.cv.mean_heatmap));
    }
  }
  return all ? 0 : 1;
}
