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
#include "app/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "app/app.h"
#include "app/verify.h"
#include "moegeo/dictgen.h"
#include "moegeo/dictionary.h"
#include "moegeo/diversity.h"
#include "moegeo/error.h"
#include "moegeo/infotheory.h"
#include "moegeo/linalg.h"
#include "moegeo/rng.h"
#include "moegeo/sss.h"
#include "moegeo/training.h"

namespace moegeo::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json ToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream out = OpenOutput(path);
  out << j.dump(2) << "\n";
}

// Creates the output directory and records the effective and verbatim input
// configurations.
fs::path PrepareOutput(const std::string& dir, const RunContext& ctx) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  WriteJson(root / "config.json", ctx.resolved);
  if (!ctx.input_text.empty()) {
    std::ofstream out = OpenOutput(root / "config.input.json");
    out << ctx.input_text;
  }
  return root;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Eigen::MatrixXd ReadFeatureRows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::logic_error&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw ConfigError(path + ": non-numeric row");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError(path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ConfigError(path + ": need at least two atoms");
  Eigen::MatrixXd m(rows.front().size(), rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < rows[j].size(); ++i) m(i, j) = rows[j][i];
  }
  return m;
}

}  // namespace

int RunBarrier(const BarrierConfig& c, const RunContext& ctx) {
  SweepSpec spec;
  spec.d = c.d;
  spec.n = c.n;
  spec.k = c.k;
  spec.mu_grid = c.mu_grid.empty() ? DefaultMuGrid() : c.mu_grid;
  spec.trials = c.trials;
  spec.tol = c.tol;
  spec.seed = c.global.seed;
  spec.law = c.law == "rademacher" ? CoefficientLaw::kRademacher
                                   : CoefficientLaw::kUniformMagnitude;
  spec.parallelism = ResolveParallelism(c.global.parallelism);
  const BarrierCurve curve = BarrierSweep(spec);

  const fs::path root = PrepareOutput(c.global.out, ctx);
  {
    std::ofstream out = OpenOutput(root / "barrier.csv");
    WriteBarrierCsv(out, curve);
  }
  json largest_target = nullptr;
  json largest_measured = nullptr;
  for (std::size_t g = 0; g < curve.mu_grid.size(); ++g) {
    if (curve.success_rate_greedy[g] == 1.0) {
      largest_target = curve.mu_grid[g];
      largest_measured = curve.mu_measured_mean[g];
    }
  }
  json summary = {
      {"theoretical_bound", curve.theoretical_bound},
      {"k", curve.k},
      {"d", c.d},
      {"n", c.n},
      {"trials_per_point", curve.trials_per_point},
      {"law", c.law},
      {"seed", c.global.seed},
      {"mu_grid", curve.mu_grid},
      {"mu_measured_mean", curve.mu_measured_mean},
      {"mu_measured_max", curve.mu_measured_max},
      {"success_rate_greedy", curve.success_rate_greedy},
      {"success_rate_omp", curve.success_rate_omp},
      {"largest_mu_full_greedy_success", largest_target},
      {"largest_mu_full_greedy_success_measured", largest_measured},
      {"metadata", {{"timestamp", UtcTimestamp()}, {"version", "0.1.0"}}},
  };
  WriteJson(root / "summary.json", summary);
  ctx.out << "barrier: " << curve.mu_grid.size() << " grid points, bound "
          << curve.theoretical_bound << ", wrote " << (root / "barrier.csv").string()
          << "\n";
  return kExitOk;
}

int RunTrain(const TrainConfig& c, const RunContext& ctx) {
  MoEConfig model = c.model;
  model.seed = c.global.seed;
  ClassificationSpec spec;
  spec.samples = c.samples;
  spec.features = model.input_dim;
  spec.informative = c.informative;
  spec.classes = model.classes;
  spec.class_sep = c.class_sep;
  spec.seed = c.global.seed;
  const ClassificationDataset data = SyntheticClassification(spec);
  const CrossValidation cv =
      CrossValidate(model, data, c.folds, ResolveParallelism(c.global.parallelism));

  const fs::path root = PrepareOutput(c.global.out, ctx);
  {
    std::ofstream out = OpenOutput(root / "run.csv");
    WriteRunCsv(out, cv.folds);
  }
  {
    std::ofstream out = OpenOutput(root / "heatmap.csv");
    WriteHeatmapCsv(out, cv.mean_heatmap);
  }
  if (c.export_dataset) {
    std::ofstream out = OpenOutput(root / "dataset.csv");
    WriteDatasetCsv(out, data);
  }
  json fold_acc = json::array(), fold_rank = json::array(), aborted = json::array();
  for (const TrainReport& r : cv.folds) {
    if (r.aborted) {
      aborted.push_back({{"fold", r.fold}, {"reason", r.abort_reason}});
      continue;
    }
    fold_acc.push_back(r.final().test_acc);
    fold_rank.push_back(r.final().eff_rank);
  }
  json aggregate = {
      {"reg", std::string(RegKindName(model.reg))},
      {"seed", c.global.seed},
      {"folds", c.folds},
      {"completed", cv.completed},
      {"mean_final_acc", cv.mean_final_acc},
      {"std_final_acc", cv.std_final_acc},
      {"mean_final_eff_rank", cv.mean_final_eff_rank},
      {"mean_eff_rank", cv.mean_eff_rank},
      {"mean_column_entropy", cv.completed > 0 ? MeanColumnEntropy(cv.mean_heatmap) : 0.0},
      {"fold_final_acc", fold_acc},
      {"fold_final_eff_rank", fold_rank},
      {"aborted", aborted},
  };
  WriteJson(root / "aggregate.json", aggregate);
  if (!aborted.empty()) {
    const json& first = aborted.front();
    ctx.err << "numerical: fold " << first["fold"].get<int>() << " aborted: "
            << first["reason"].get<std::string>() << "\n";
    return kExitNumerical;
  }
  ctx.out << "train: reg " << RegKindName(model.reg) << ", mean final acc "
          << cv.mean_final_acc << ", mean final eff_rank " << cv.mean_final_eff_rank
          << "\n";
  return kExitOk;
}

int RunKlProject(const KlConfig& c, const RunContext& ctx) {
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(
      c.probs.data(), static_cast<Eigen::Index>(c.probs.size()));
  const SparseProjection proj = KlSparseProject(CategoricalDist(p), c.k);
  const json j = {
      {"k", c.k},
      {"support", proj.support},
      {"q", ToJson(proj.q.probs())},
      {"kl", proj.kl},
      {"kl_direct", KlDivergence(proj.q.probs(), p)},
  };
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

int RunDppSelect(const DppConfig& c, const RunContext& ctx) {
  const UnitDictionary features =
      c.features.empty() ? CoherentDictionary(c.dim, c.n, c.mu, 0.01, c.global.seed)
                         : NormalizeColumns(ReadFeatureRows(c.features));
  if (c.k > features.atoms()) throw ConfigError("k exceeds the number of atoms");
  const Kernel kernel = Kernel::FromFeatures(features, c.epsilon);
  const Support greedy = DppGreedySelect(kernel, c.k);
  json j = {
      {"atoms", features.atoms()},
      {"dim", features.dim()},
      {"k", c.k},
      {"epsilon", c.epsilon},
      {"coherence", MutualCoherence(features)},
      {"greedy", greedy},
      {"greedy_logdet", LogDetSubset(kernel, greedy)},
      {"greedy_shifted", ShiftedLogDet(kernel, greedy)},
      {"nemhauser_floor", 1.0 - std::exp(-1.0)},
  };
  if (BinomialCoefficient(features.atoms(), c.k) <= 200000) {
    const Support best = DppExhaustiveSelect(kernel, c.k);
    const double opt = ShiftedLogDet(kernel, best);
    j["exhaustive"] = best;
    j["exhaustive_shifted"] = opt;
    j["ratio"] = opt > 0.0 ? ShiftedLogDet(kernel, greedy) / opt : 1.0;
  }
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

int RunInfo(const InfoConfig& c, const RunContext& ctx) {
  json j;
  if (!c.probs.empty()) {
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(
        c.probs.data(), static_cast<Eigen::Index>(c.probs.size()));
    const CategoricalDist dist(p);
    j = {
        {"experts", dist.size()},
        {"renyi2", Renyi2Entropy(dist)},
        {"shannon", ShannonEntropy(p)},
        {"collision", p.squaredNorm()},
        {"collision_floor", 1.0 / dist.size()},
    };
    if (c.k < dist.size()) {
      const SparseProjection proj = KlSparseProject(dist, c.k);
      j["kl_projection"] = {{"k", c.k}, {"support", proj.support}, {"kl", proj.kl}};
    }
  } else {
    Rng rng = Rng::Stream(c.global.seed, {1});
    Eigen::MatrixXd dense(c.tokens, c.experts);
    for (int t = 0; t < c.tokens; ++t) {
      Eigen::VectorXd h(c.experts);
      for (int e = 0; e < c.experts; ++e) h(e) = c.temperature * rng.Normal();
      dense.row(t) = Softmax(h).transpose();
    }
    const RoutingBatch batch = RoutingBatch::FromDense(dense, c.k);
    const CollisionCheck collision = CollisionIdentityCheck(batch);
    const MutualInformation mi = EmpiricalMi(batch);
    j = {
        {"experts", c.experts},
        {"k", c.k},
        {"tokens", c.tokens},
        {"aux_loss", AuxLoss(batch)},
        {"collision", {{"lhs", collision.lhs}, {"rhs", collision.rhs}, {"gap", collision.gap}}},
        {"renyi2_marginal", Renyi2Entropy(batch.MeanProbabilities())},
        {"collision_floor", 1.0 / c.experts},
        {"conditional_entropy", TopKConditionalEntropy(batch)},
        {"log_k", std::log(c.k)},
        {"h_z", mi.h_z},
        {"mi", mi.mi},
        {"mi_lower_bound", MiLowerBound(c.experts, c.k)},
    };
  }
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

int RunVerify(const VerifyConfig& c, const RunContext& ctx) {
  const std::vector<CheckResult> results = RunChecks(c.checks, c.global.seed, c.inject_fault);
  bool all = true;
  json checks = json::array();
  for (const CheckResult& r : results) {
    all = all && r.pass;
    checks.push_back({{"id", r.id},
                      {"pass", r.pass},
                      {"worst_margin", r.worst_margin},
                      {"detail", r.detail}});
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", r.worst_margin);
    ctx.out << (r.pass ? "PASS " : "FAIL ") << r.id << " (margin " << buf << ")\n";
  }
  const fs::path root = PrepareOutput(c.global.out, ctx);
  WriteJson(root / "verify.json",
            {{"seed", c.global.seed}, {"pass", all}, {"checks", checks}});
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace moegeo::app
