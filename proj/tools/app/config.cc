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
#include "app/config.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "moegeo/parallel.h"

namespace moegeo::app {
namespace {

using nlohmann::json;

[[noreturn]] void TypeError(const std::string& name, const char* expected) {
  throw ConfigError(name + " must be " + expected);
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T Convert(const std::string& name, const json& j);

template <>
int Convert<int>(const std::string& name, const json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()) {
    return static_cast<int>(j.get<double>());
  }
  TypeError(name, "an integer");
}

template <>
std::uint64_t Convert<std::uint64_t>(const std::string& name, const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  TypeError(name, "a non-negative integer");
}

template <>
double Convert<double>(const std::string& name, const json& j) {
  if (j.is_number()) return j.get<double>();
  TypeError(name, "a number");
}

template <>
bool Convert<bool>(const std::string& name, const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  TypeError(name, "true or false");
}

template <>
std::string Convert<std::string>(const std::string& name, const json& j) {
  if (j.is_string()) return j.get<std::string>();
  TypeError(name, "a string");
}

template <>
std::vector<double> Convert<std::vector<double>>(const std::string& name,
                                                 const json& j) {
  std::vector<double> out;
  if (j.is_number()) return {j.get<double>()};
  if (j.is_string()) {
    for (const std::string& s : SplitCommas(j.get<std::string>())) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(s, &used));
        if (used != s.size()) TypeError(name, "a list of numbers");
      } catch (const std::logic_error&) {
        TypeError(name, "a list of numbers");
      }
    }
    return out;
  }
  if (!j.is_array()) TypeError(name, "a list of numbers");
  for (const json& v : j) out.push_back(Convert<double>(name, v));
  return out;
}

template <>
std::vector<std::string> Convert<std::vector<std::string>>(
    const std::string& name, const json& j) {
  if (j.is_string()) return SplitCommas(j.get<std::string>());
  if (!j.is_array()) TypeError(name, "a list of strings");
  std::vector<std::string> out;
  for (const json& v : j) out.push_back(Convert<std::string>(name, v));
  return out;
}

template <typename T>
Field Make(std::string name, std::string help, T& ref) {
  const std::string key = name;
  return Field{std::move(name), std::move(help),
               [&ref, key](const json& j) { ref = Convert<T>(key, j); },
               [&ref] { return json(ref); }};
}

Field MakeReg(RegKind& ref) {
  return Field{"reg", "regularizer: none, ortho, ncl or dpp",
               [&ref](const json& j) {
                 const auto kind = ParseRegKind(Convert<std::string>("reg", j));
                 if (!kind) throw ConfigError("reg must be one of none, ortho, ncl, dpp");
                 ref = *kind;
               },
               [&ref] { return json(std::string(RegKindName(ref))); }};
}

void AddGlobal(std::vector<Field>& f, GlobalOptions& g) {
  f.push_back(Make("seed", "master seed (MOEGEO_SEED overrides the file)", g.seed));
  f.push_back(Make("out", "output directory", g.out));
  f.push_back(Make("parallelism", "worker threads, 0 = available cores", g.parallelism));
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<Field> Fields(BarrierConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  f.push_back(Make("d", "ambient dimension", c.d));
  f.push_back(Make("n", "number of atoms (n <= d)", c.n));
  f.push_back(Make("k", "planted sparsity", c.k));
  f.push_back(Make("mu_grid", "ascending coherence targets in [0, 1); empty = 25 points on [0, 0.95]", c.mu_grid));
  f.push_back(Make("trials", "trials per grid point", c.trials));
  f.push_back(Make("tol", "coherence tolerance", c.tol));
  f.push_back(Make("law", "coefficient law: rademacher or uniform_magnitude", c.law));
  return f;
}

std::vector<Field> Fields(TrainConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  MoEConfig& m = c.model;
  f.push_back(MakeReg(m.reg));
  f.push_back(Make("input_dim", "input features D", m.input_dim));
  f.push_back(Make("experts", "number of experts E", m.experts));
  f.push_back(Make("k", "active experts per sample", m.k));
  f.push_back(Make("expert_hidden", "expert hidden width", m.expert_hidden));
  f.push_back(Make("classes", "number of classes C", m.classes));
  f.push_back(Make("batch", "minibatch size", m.batch));
  f.push_back(Make("lr", "AdamW learning rate", m.lr));
  f.push_back(Make("epochs", "training epochs", m.epochs));
  f.push_back(Make("aux_weight", "load-balancing weight alpha", m.aux_weight));
  f.push_back(Make("reg_weight", "regularizer weight lambda", m.reg_weight));
  f.push_back(Make("dpp_epsilon", "soft-DPP Tikhonov constant", m.dpp_epsilon));
  f.push_back(Make("beta1", "AdamW first-moment decay", m.beta1));
  f.push_back(Make("beta2", "AdamW second-moment decay", m.beta2));
  f.push_back(Make("adam_eps", "AdamW epsilon", m.adam_eps));
  f.push_back(Make("weight_decay", "AdamW decoupled weight decay", m.weight_decay));
  f.push_back(Make("folds", "stratified cross-validation folds", c.folds));
  f.push_back(Make("samples", "dataset size", c.samples));
  f.push_back(Make("informative", "informative features", c.informative));
  f.push_back(Make("class_sep", "class centroid scale", c.class_sep));
  f.push_back(Make("export_dataset", "also write dataset.csv", c.export_dataset));
  return f;
}

std::vector<Field> Fields(KlConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  f.push_back(Make("probs", "distribution to project (comma list)", c.probs));
  f.push_back(Make("k", "support size", c.k));
  return f;
}

std::vector<Field> Fields(DppConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  f.push_back(Make("n", "number of candidate atoms", c.n));
  f.push_back(Make("dim", "feature dimension", c.dim));
  f.push_back(Make("k", "subset size", c.k));
  f.push_back(Make("mu", "target coherence of the random features", c.mu));
  f.push_back(Make("epsilon", "Tikhonov constant", c.epsilon));
  f.push_back(Make("features", "CSV of features, one atom per row (overrides n/dim/mu)", c.features));
  return f;
}

std::vector<Field> Fields(InfoConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  f.push_back(Make("experts", "number of experts E", c.experts));
  f.push_back(Make("k", "active experts", c.k));
  f.push_back(Make("tokens", "tokens in the synthetic routing batch", c.tokens));
  f.push_back(Make("temperature", "router logit scale for the synthetic batch", c.temperature));
  f.push_back(Make("probs", "optional distribution to analyse (comma list)", c.probs));
  return f;
}

std::vector<Field> Fields(VerifyConfig& c) {
  std::vector<Field> f;
  AddGlobal(f, c.global);
  f.push_back(Make("checks", "check groups to run (comma list), empty = all", c.checks));
  return f;
}

void Validate(const BarrierConfig& c) {
  Require(c.d >= 1 && c.n >= 2 && c.n <= c.d, "need 2 <= n <= d");
  Require(c.k >= 1 && c.k <= c.n, "need 1 <= k <= n");
  Require(c.trials >= 1, "trials must be >= 1");
  Require(c.tol > 0.0, "tol must be positive");
  for (std::size_t i = 0; i < c.mu_grid.size(); ++i) {
    Require(c.mu_grid[i] >= 0.0 && c.mu_grid[i] < 1.0, "mu_grid values must lie in [0, 1)");
    Require(i == 0 || c.mu_grid[i] > c.mu_grid[i - 1], "mu_grid must ascend");
  }
  Require(c.law == "rademacher" || c.law == "uniform_magnitude",
          "law must be rademacher or uniform_magnitude");
  Require(c.global.parallelism >= 0, "parallelism must be >= 0");
}

void Validate(const TrainConfig& c) {
  try {
    c.model.Validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  Require(c.folds >= 2 && c.folds <= c.samples, "folds must lie in [2, samples]");
  Require(c.samples >= c.model.classes, "samples must cover every class");
  Require(c.informative >= 1 && c.informative <= c.model.input_dim,
          "informative must lie in [1, input_dim]");
  Require(c.class_sep >= 0.0, "class_sep must be >= 0");
  Require(c.global.parallelism >= 0, "parallelism must be >= 0");
}

void Validate(const KlConfig& c) {
  Require(c.probs.size() >= 2, "probs needs at least two entries");
  Require(c.k >= 1 && c.k <= static_cast<int>(c.probs.size()), "need 1 <= k <= len(probs)");
}

void Validate(const DppConfig& c) {
  Require(c.k >= 1, "k must be >= 1");
  Require(c.epsilon > 0.0, "epsilon must be positive");
  if (c.features.empty()) {
    Require(c.n >= 2 && c.n <= c.dim, "need 2 <= n <= dim");
    Require(c.k <= c.n, "need k <= n");
    Require(c.mu >= 0.0 && c.mu < 1.0, "mu must lie in [0, 1)");
  }
}

void Validate(const InfoConfig& c) {
  Require(c.experts >= 2, "experts must be >= 2");
  Require(c.k >= 1 && c.k < c.experts, "need 1 <= k < experts");
  Require(c.tokens >= 1, "tokens must be >= 1");
  Require(c.temperature > 0.0, "temperature must be positive");
}

void Validate(const VerifyConfig& c) {
  Require(c.global.parallelism >= 0, "parallelism must be >= 0");
}

void ApplyJson(std::vector<Field>& fields, const json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const Field& f) { return f.name == key; });
    if (it == fields.end()) throw ConfigError("unknown key '" + key + "'");
    it->set(value);
  }
}

json ToJson(const std::vector<Field>& fields) {
  json j = json::object();
  for (const Field& f : fields) j[f.name] = f.get();
  return j;
}

json ParseOverride(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return json(text);
  return j;
}

int ResolveParallelism(int requested) {
  return requested > 0 ? requested : DefaultParallelism();
}

}  // namespace moegeo::app
