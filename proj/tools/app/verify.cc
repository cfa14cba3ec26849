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
#include "app/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "app/config.h"
#include "moegeo/dictgen.h"
#include "moegeo/dictionary.h"
#include "moegeo/diversity.h"
#include "moegeo/infotheory.h"
#include "moegeo/linalg.h"
#include "moegeo/moe.h"
#include "moegeo/regularizers.h"
#include "moegeo/rng.h"
#include "moegeo/sss.h"

namespace moegeo::app {
namespace {

// Tracks the smallest slack seen; slack = tolerance - error.
class Margin {
 public:
  void Observe(double slack) {
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    worst_ = std::min(worst_, slack);
    ++count_;
  }
  CheckResult Result(std::string id, std::string detail = {}) const {
    std::ostringstream ss;
    ss << count_ << " cases";
    if (!detail.empty()) ss << "; " << detail;
    return CheckResult{std::move(id), worst_ >= 0.0, worst_, ss.str()};
  }

 private:
  double worst_ = std::numeric_limits<double>::infinity();
  int count_ = 0;
};

void ForEachSubset(int n, int k, const std::function<void(const Support&)>& fn) {
  Support s(k);
  std::iota(s.begin(), s.end(), 0);
  if (k == 0) {
    fn(s);
    return;
  }
  while (true) {
    fn(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

Eigen::VectorXd RandomSimplex(Rng& rng, int e) {
  Eigen::VectorXd p(e);
  const bool tied = rng.Uniform() < 0.25;
  for (int i = 0; i < e; ++i) {
    p(i) = tied ? 1.0 + static_cast<double>(rng.Index(4)) : -std::log(1.0 - rng.Uniform());
  }
  return p / p.sum();
}

Eigen::MatrixXd RandomRows(Rng& rng, int t, int e, double scale) {
  Eigen::MatrixXd m(t, e);
  for (int r = 0; r < t; ++r) {
    Eigen::VectorXd h(e);
    for (int i = 0; i < e; ++i) h(i) = scale * rng.Normal();
    m.row(r) = Softmax(h).transpose();
  }
  return m;
}

Eigen::MatrixXd Gaussian(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.Normal();
  }
  return m;
}

Eigen::VectorXd GaussianVector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.Normal();
  return v;
}

Kernel RandomKernel(Rng& rng, int n) {
  const int dim = 2 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(n)));
  return Kernel::FromFeatures(NormalizeColumns(Gaussian(rng, dim, n)));
}

// ---- thm1: sparse KL projection ----

std::vector<CheckResult> Thm1(std::uint64_t seed, bool fault) {
  Margin oracle, closed;
  for (int trial = 0; trial < 300; ++trial) {
    Rng rng = Rng::Stream(seed, {1, static_cast<std::uint64_t>(trial)});
    const int e = 2 + static_cast<int>(rng.Index(7));
    const int k = 1 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(std::min(4, e))));
    const Eigen::VectorXd p = RandomSimplex(rng, e);
    const SparseProjection proj = KlSparseProject(CategoricalDist(p), k);
    const double kl = fault ? -proj.kl : proj.kl;
    double best = std::numeric_limits<double>::infinity();
    ForEachSubset(e, k, [&](const Support& s) {
      double mass = 0.0;
      for (int j : s) mass += p(j);
      best = std::min(best, -std::log(mass));
    });
    double chosen = 0.0;
    for (int j : proj.support) chosen += p(j);
    oracle.Observe(1e-10 - std::max(std::abs(kl - best),
                                    std::abs(-std::log(chosen) - best)));
    closed.Observe(1e-10 - std::abs(KlDivergence(proj.q.probs(), p) - kl));
  }
  return {oracle.Result("thm1.projection_oracle", "KL vs exhaustive minimum, tol 1e-10"),
          closed.Result("thm1.closed_form", "KL vs direct divergence, tol 1e-10")};
}

// ---- thm2: load-balancing loss and collision probability ----

std::vector<CheckResult> Thm2(std::uint64_t seed) {
  Margin identity, floor, uniform;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = Rng::Stream(seed, {2, static_cast<std::uint64_t>(trial)});
    const int e = 2 + static_cast<int>(rng.Index(15));
    const int k = 1 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(e - 1)));
    const int t = 1 + static_cast<int>(rng.Index(32));
    const RoutingBatch batch =
        RoutingBatch::FromDense(RandomRows(rng, t, e, rng.Uniform(0.1, 4.0)), k);
    identity.Observe(1e-9 - CollisionIdentityCheck(batch).gap);
    floor.Observe(batch.MeanProbabilities().squaredNorm() - 1.0 / e + 1e-12);
  }
  for (int e = 2; e <= 16; ++e) {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(e, 1.0 / e);
    uniform.Observe(1e-9 - std::abs(u.squaredNorm() - 1.0 / e));
  }
  return {identity.Result("thm2.collision_identity", "tol 1e-9"),
          floor.Result("thm2.cauchy_schwarz_floor", "sum P_i^2 >= 1/E"),
          uniform.Result("thm2.uniform_equality", "tol 1e-9")};
}

// ---- thm3: conditional entropy of Top-k routing ----

std::vector<CheckResult> Thm3(std::uint64_t seed) {
  Margin bound, equality, chain;
  const int ks[] = {1, 2, 4};
  for (int trial = 0; trial < 300; ++trial) {
    Rng rng = Rng::Stream(seed, {3, static_cast<std::uint64_t>(trial)});
    const int k = ks[trial % 3];
    const int e = k + 1 + static_cast<int>(rng.Index(12));
    const int t = 1 + static_cast<int>(rng.Index(48));
    const RoutingBatch batch =
        RoutingBatch::FromDense(RandomRows(rng, t, e, rng.Uniform(0.0, 5.0)), k);
    const double h = TopKConditionalEntropy(batch);
    bound.Observe(std::log(k) + 1e-9 - h);
    const MutualInformation mi = EmpiricalMi(batch);
    chain.Observe(mi.mi - (mi.h_z - std::log(k)) + 1e-9);
  }
  for (int k : ks) {
    const int e = 2 * k + 1;
    const RoutingBatch uniform =
        RoutingBatch::FromDense(Eigen::MatrixXd::Constant(8, e, 1.0 / e), k);
    equality.Observe(1e-9 - std::abs(TopKConditionalEntropy(uniform) - std::log(k)));
  }
  return {bound.Result("thm3.entropy_bound", "H(Z|X) <= log k + 1e-9"),
          equality.Result("thm3.uniform_equality", "tol 1e-9"),
          chain.Result("thm3.mi_bound_chain", "I >= H(Z) - log k - 1e-9")};
}

// ---- thm5: orthonormal dictionaries ----

std::vector<CheckResult> Thm5(std::uint64_t seed) {
  Margin m;
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::Stream(seed, {5, static_cast<std::uint64_t>(trial)});
    const int n = 2 + static_cast<int>(rng.Index(11));
    const int d = n + static_cast<int>(rng.Index(5));
    const int k = 1 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(std::min(4, n))));
    const UnitDictionary dict = RandomOrthonormalDictionary(d, n, rng.NextU64());
    const Eigen::VectorXd y = GaussianVector(rng, d);
    const bool same = GreedyTopKSelect(dict, y, k) == BruteForceSss(dict, y, k).support;
    if (!same) ++mismatches;
    m.Observe(same ? 0.0 : -1.0);
  }
  return {m.Result("thm5.orthogonal_equivalence",
                   std::to_string(mismatches) + " support mismatches")};
}

// ---- thm6: coherence barrier ----

std::vector<CheckResult> Thm6(std::uint64_t seed) {
  Margin region, dominance;
  const int k = 3;
  const double bound = 1.0 / (2 * k - 1);
  int trial_id = 0;
  for (double mu : {0.0, 0.1, 0.18, 0.4}) {
    for (int t = 0; t < 15; ++t, ++trial_id) {
      TrialSpec spec;
      spec.d = 40;
      spec.n = 20;
      spec.k = k;
      spec.target_mu = mu;
      spec.tol = 0.01;
      spec.with_oracle = true;
      const RecoveryOutcome o = RunRecoveryTrial(
          spec, Rng::Stream(seed, {6, static_cast<std::uint64_t>(trial_id)}).key());
      if (o.mu_measured < bound) region.Observe(o.greedy_exact ? 0.0 : -1.0);
      dominance.Observe(o.greedy_residual_sq - *o.oracle_residual_sq + 1e-9);
    }
  }
  return {region.Result("thm6.guarantee_region", "exact recovery when mu < 1/(2k-1)"),
          dominance.Result("thm6.oracle_dominance", "greedy residual >= oracle - 1e-9")};
}

// ---- thm7: log-det diversity ----

std::vector<CheckResult> Thm7(std::uint64_t seed) {
  Margin schur, submod, nemhauser;
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = Rng::Stream(seed, {7, 1, static_cast<std::uint64_t>(trial)});
    const int n = 3 + static_cast<int>(rng.Index(8));
    const Kernel kernel = RandomKernel(rng, n);
    const int size = static_cast<int>(rng.Index(static_cast<std::uint64_t>(n - 1)));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    Support s(perm.begin(), perm.begin() + size);
    std::sort(s.begin(), s.end());
    const int e = perm[size];
    Support with = s;
    with.insert(std::upper_bound(with.begin(), with.end(), e), e);
    const double diff =
        LogDetSubset(kernel, with) - (s.empty() ? 0.0 : LogDetSubset(kernel, s));
    schur.Observe(1e-8 - std::abs(diff - MarginalGain(kernel, s, e)));
  }
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng = Rng::Stream(seed, {7, 2, static_cast<std::uint64_t>(trial)});
    const Kernel kernel = RandomKernel(rng, 4 + static_cast<int>(rng.Index(9)));
    const SubmodularityReport r = SubmodularityAudit(kernel, 100, rng.NextU64());
    violations += r.violations;
    submod.Observe(r.violations == 0 ? std::max(0.0, r.worst_margin) : r.worst_margin);
  }
  const double ratio_floor = 1.0 - std::exp(-1.0);
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::Stream(seed, {7, 3, static_cast<std::uint64_t>(trial)});
    const int n = 2 + static_cast<int>(rng.Index(9));
    const int k = 1 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(std::min(4, n))));
    const Kernel kernel = RandomKernel(rng, n);
    const double greedy = ShiftedLogDet(kernel, DppGreedySelect(kernel, k));
    const double best = ShiftedLogDet(kernel, DppExhaustiveSelect(kernel, k));
    const double ratio = best > 0.0 ? greedy / best : 1.0;
    worst_ratio = std::min(worst_ratio, ratio);
    nemhauser.Observe(ratio - (ratio_floor - 1e-9));
  }
  return {schur.Result("thm7.schur_identity", "tol 1e-8"),
          submod.Result("thm7.submodularity",
                        std::to_string(violations) + " violations over 1000 chains"),
          nemhauser.Result("thm7.nemhauser",
                           "worst greedy/optimal ratio " + std::to_string(worst_ratio))};
}

// ---- thm8: ambiguity decomposition ----

std::vector<CheckResult> Thm8(std::uint64_t seed) {
  Margin m;
  for (int trial = 0; trial < 300; ++trial) {
    Rng rng = Rng::Stream(seed, {8, static_cast<std::uint64_t>(trial)});
    const int k = 1 + static_cast<int>(rng.Index(8));
    const int dim = 1 + static_cast<int>(rng.Index(16));
    const AmbiguityTerms t =
        AmbiguityDecomposition(Gaussian(rng, dim, k), GaussianVector(rng, dim));
    m.Observe(1e-10 - t.gap);
  }
  return {m.Result("thm8.ambiguity_identity", "tol 1e-10")};
}

// ---- core ----

std::vector<CheckResult> Core(std::uint64_t seed) {
  Margin determinism, norms, monotone, recompute, coherence;
  {
    Rng a = Rng::Stream(seed, {9, 1});
    Rng b = Rng::Stream(seed, {9, 1});
    Rng c = Rng::Stream(seed, {9, 2});
    int equal = 0, collide = 0;
    for (int i = 0; i < 64; ++i) {
      const std::uint64_t x = a.NextU64();
      equal += x == b.NextU64();
      collide += x == c.NextU64();
    }
    determinism.Observe(equal == 64 && collide == 0 ? 0.0 : -1.0);
  }
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::Stream(seed, {9, 3, static_cast<std::uint64_t>(trial)});
    const int d = 4 + static_cast<int>(rng.Index(12));
    const int n = 2 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(d - 1)));
    Eigen::MatrixXd raw = Gaussian(rng, d, n);
    for (int j = 0; j < n; ++j) raw.col(j) *= std::exp(rng.Uniform(-8.0, 8.0));
    const UnitDictionary dict = NormalizeColumns(raw);
    for (int j = 0; j < n; ++j) norms.Observe(1e-10 - std::abs(dict.column(j).norm() - 1.0));
    const double mu = MutualCoherence(dict);
    coherence.Observe(std::min(mu, 1.0 - mu));

    const Eigen::VectorXd y = GaussianVector(rng, d);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    const int b_size = 1 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(n)));
    const int a_size = static_cast<int>(rng.Index(static_cast<std::uint64_t>(b_size))) + 1;
    Support b(perm.begin(), perm.begin() + b_size);
    Support a(perm.begin(), perm.begin() + std::min(a_size, b_size));
    const SparseSolution sa = LeastSquaresOnSupport(dict, y, a);
    const SparseSolution sb = LeastSquaresOnSupport(dict, y, b);
    monotone.Observe(sa.residual_sq - sb.residual_sq + 1e-9);
    for (const SparseSolution* s : {&sa, &sb}) {
      Eigen::VectorXd r = y;
      for (std::size_t i = 0; i < s->support.size(); ++i) {
        r -= s->coefficients(static_cast<Eigen::Index>(i)) * dict.column(s->support[i]);
      }
      const double direct = r.squaredNorm();
      recompute.Observe(1e-8 * std::max(direct, 1e-12 * y.squaredNorm()) -
                        std::abs(direct - s->residual_sq));
    }
  }
  return {determinism.Result("core.rng_determinism"),
          norms.Result("core.unit_columns", "tol 1e-10"),
          coherence.Result("core.coherence_range", "0 <= mu <= 1"),
          monotone.Result("core.projection_monotonicity", "tol 1e-9"),
          recompute.Result("core.residual_recompute", "relative tol 1e-8")};
}

// ---- dictgen ----

std::vector<CheckResult> Dictgen(std::uint64_t seed) {
  Margin targets, blend, determinism, redundancy;
  for (double mu : {0.09, 0.3, 0.5, 0.8}) {
    const double tol = 0.005;
    const UnitDictionary dict = CoherentDictionary(64, 32, mu, tol, seed);
    targets.Observe(tol - std::abs(MutualCoherence(dict) - mu));
    const UnitDictionary again = CoherentDictionary(64, 32, mu, tol, seed);
    determinism.Observe(dict.matrix() == again.matrix() ? 0.0 : -1.0);
  }
  const CoherenceBlend b(32, 16, seed);
  double previous = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double mu = MutualCoherence(b.At(i / 19.0 * 0.999));
    blend.Observe(mu - previous + 1e-12);
    previous = mu;
  }
  ClassificationSpec spec;
  spec.samples = 400;
  spec.features = 30;
  spec.informative = 6;
  spec.classes = 4;
  spec.seed = seed;
  const ClassificationDataset data = SyntheticClassification(spec);
  const Eigen::MatrixXd inf = data.features.leftCols(spec.informative);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(inf);
  for (int j = spec.informative; j < spec.features; ++j) {
    const Eigen::VectorXd col = data.features.col(j);
    const Eigen::VectorXd fit = inf * qr.solve(col);
    const double centered = (col.array() - col.mean()).matrix().squaredNorm();
    const double r2 = 1.0 - (col - fit).squaredNorm() / centered;
    redundancy.Observe(std::sqrt(std::max(0.0, r2)) - 0.9);
  }
  const ClassificationDataset again = SyntheticClassification(spec);
  determinism.Observe(again.features == data.features && again.labels == data.labels ? 0.0 : -1.0);
  return {targets.Result("dictgen.coherence_targets", "tol 0.005"),
          blend.Result("dictgen.blend_monotonicity", "20 blend values"),
          determinism.Result("dictgen.determinism"),
          redundancy.Result("dictgen.redundancy", "multiple correlation > 0.9")};
}

// ---- moe ----

MoEConfig TinyConfig(RegKind reg, std::uint64_t seed) {
  MoEConfig c;
  c.input_dim = 6;
  c.experts = 4;
  c.k = 2;
  c.expert_hidden = 5;
  c.classes = 3;
  c.batch = 4;
  c.reg = reg;
  c.reg_weight = 0.5;
  c.aux_weight = 0.1;
  c.seed = seed;
  return c;
}

// Per-tensor relative error between the analytic gradient and central
// differences; entries whose perturbation changes any Top-k selection are
// left out of both vectors.
double WorstGradientError(const MoEConfig& c, const ParamSet& w,
                          const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const ForwardTrace base = Forward(w, c, x);
  const ParamSet analytic = Backward(w, base, y, c);
  std::vector<Support> selection;
  for (const SampleTrace& s : base.samples) selection.push_back(s.selected);
  auto stable = [&](const ForwardTrace& t) {
    for (int i = 0; i < t.batch(); ++i) {
      if (t.samples[i].selected != selection[i]) return false;
    }
    return true;
  };
  const double h = 1e-5;
  double worst = 0.0;
  ParamSet probe = w;
  std::vector<Eigen::MatrixXd*> probe_tensors;
  probe.ForEachTensor([&](const std::string&, Eigen::MatrixXd& t) { probe_tensors.push_back(&t); });
  std::vector<const Eigen::MatrixXd*> grad_tensors;
  analytic.ForEachTensor([&](const std::string&, const Eigen::MatrixXd& t) { grad_tensors.push_back(&t); });
  for (std::size_t ti = 0; ti < probe_tensors.size(); ++ti) {
    Eigen::MatrixXd& t = *probe_tensors[ti];
    Eigen::MatrixXd fd = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    Eigen::MatrixXd an = *grad_tensors[ti];
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double saved = t(i);
      t(i) = saved + h;
      const ForwardTrace plus = Forward(probe, c, x);
      t(i) = saved - h;
      const ForwardTrace minus = Forward(probe, c, x);
      t(i) = saved;
      if (!stable(plus) || !stable(minus)) {
        an(i) = 0.0;
        continue;
      }
      fd(i) = (TotalLoss(plus, y, c).total - TotalLoss(minus, y, c).total) / (2 * h);
    }
    const double scale = std::max(an.norm(), fd.norm());
    if (scale < 1e-12) continue;
    worst = std::max(worst, (an - fd).norm() / scale);
  }
  return worst;
}

std::vector<CheckResult> Moe(std::uint64_t seed) {
  std::vector<CheckResult> results;
  Margin gates, entropy, aux;
  for (RegKind reg : {RegKind::kNone, RegKind::kOrtho, RegKind::kNcl, RegKind::kDpp}) {
    Margin grad;
    for (int trial = 0; trial < 3; ++trial) {
      const std::uint64_t s = Rng::Stream(seed, {10, static_cast<std::uint64_t>(reg),
                                                 static_cast<std::uint64_t>(trial)}).key();
      const MoEConfig c = TinyConfig(reg, s);
      Rng rng(s);
      const Eigen::MatrixXd x = Gaussian(rng, c.batch, c.input_dim);
      std::vector<int> y(c.batch);
      for (int& v : y) v = static_cast<int>(rng.Index(static_cast<std::uint64_t>(c.classes)));
      const ParamSet w = InitParams(c, s).weights;
      grad.Observe(1e-4 - WorstGradientError(c, w, x, y));

      const ForwardTrace trace = Forward(w, c, x);
      for (const SampleTrace& st : trace.samples) gates.Observe(1e-12 - std::abs(st.gates.sum() - 1.0));
      const RoutingBatch batch = RoutingFromTrace(trace);
      entropy.Observe(std::log(c.k) + 1e-9 - TopKConditionalEntropy(batch));
      aux.Observe(1e-12 - std::abs(TotalLoss(trace, y, c).aux - c.aux_weight * AuxLoss(batch)));
    }
    results.push_back(grad.Result("moe.gradients." + std::string(RegKindName(reg)),
                                  "relative error < 1e-4"));
  }
  results.push_back(gates.Result("moe.gate_normalization", "tol 1e-12"));
  results.push_back(entropy.Result("moe.entropy_bound", "H <= log k + 1e-9"));
  results.push_back(aux.Result("moe.aux_consistency", "tol 1e-12"));
  return results;
}

}  // namespace

const std::vector<std::string>& CheckGroups() {
  static const std::vector<std::string> groups = {
      "thm1", "thm2", "thm3", "thm5", "thm6", "thm7", "thm8", "core", "dictgen", "moe"};
  return groups;
}

std::vector<CheckResult> RunChecks(const std::vector<std::string>& groups,
                                   std::uint64_t seed,
                                   const std::string& inject_fault) {
  for (const std::string& g : groups) {
    if (std::find(CheckGroups().begin(), CheckGroups().end(), g) == CheckGroups().end()) {
      throw ConfigError("unknown check '" + g + "'");
    }
  }
  if (!inject_fault.empty() && inject_fault != "kl-sign") {
    throw ConfigError("unknown fault '" + inject_fault + "'");
  }
  std::vector<CheckResult> all;
  for (const std::string& g : CheckGroups()) {
    if (!groups.empty() && std::find(groups.begin(), groups.end(), g) == groups.end()) {
      continue;
    }
    std::vector<CheckResult> r;
    if (g == "thm1") r = Thm1(seed, inject_fault == "kl-sign");
    if (g == "thm2") r = Thm2(seed);
    if (g == "thm3") r = Thm3(seed);
    if (g == "thm5") r = Thm5(seed);
    if (g == "thm6") r = Thm6(seed);
    if (g == "thm7") r = Thm7(seed);
    if (g == "thm8") r = Thm8(seed);
    if (g == "core") r = Core(seed);
    if (g == "dictgen") r = Dictgen(seed);
    if (g == "moe") r = Moe(seed);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

}  // namespace moegeo::app
