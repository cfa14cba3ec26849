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
#ifndef MOEGEO_TOOLS_APP_CONFIG_H_
#define MOEGEO_TOOLS_APP_CONFIG_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "moegeo/moe.h"

namespace moegeo::app {

// Bad configuration: unknown key, wrong type, failed validation. Reported as
// "config: <message>" with exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One configurable key. The same name is used in the JSON file and as the
// --name override on the command line.
struct Field {
  std::string name;
  std::string help;
  std::function<void(const nlohmann::json&)> set;
  std::function<nlohmann::json()> get;
};

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string out;
  int parallelism = 0;  // 0 = available cores
};

struct BarrierConfig {
  GlobalOptions global{42, "out", 0};
  int d = 128;
  int n = 64;
  int k = 6;
  std::vector<double> mu_grid;  // empty = 25 points on [0, 0.95]
  int trials = 200;
  double tol = 0.005;
  std::string law = "rademacher";
};

struct TrainConfig {
  GlobalOptions global{42, "out", 0};
  MoEConfig model;
  int folds = 10;
  int samples = 4000;
  int informative = 10;
  double class_sep = 0.6;
  bool export_dataset = false;
};

struct KlConfig {
  GlobalOptions global;
  std::vector<double> probs;
  int k = 2;
};

struct DppConfig {
  GlobalOptions global;
  int n = 12;
  int dim = 16;
  int k = 4;
  double mu = 0.3;
  double epsilon = 1e-4;
  std::string features;  // optional CSV, one atom per row
};

struct InfoConfig {
  GlobalOptions global;
  int experts = 16;
  int k = 2;
  int tokens = 256;
  double temperature = 1.0;
  std::vector<double> probs;
};

struct VerifyConfig {
  GlobalOptions global{42, "out", 0};
  std::vector<std::string> checks;  // empty = all
  std::string inject_fault;         // test hook
};

std::vector<Field> Fields(BarrierConfig& c);
std::vector<Field> Fields(TrainConfig& c);
std::vector<Field> Fields(KlConfig& c);
std::vector<Field> Fields(DppConfig& c);
std::vector<Field> Fields(InfoConfig& c);
std::vector<Field> Fields(VerifyConfig& c);

void Validate(const BarrierConfig& c);
void Validate(const TrainConfig& c);
void Validate(const KlConfig& c);
void Validate(const DppConfig& c);
void Validate(const InfoConfig& c);
void Validate(const VerifyConfig& c);

// Applies a JSON object; unknown keys and type mismatches raise ConfigError.
void ApplyJson(std::vector<Field>& fields, const nlohmann::json& j);
nlohmann::json ToJson(const std::vector<Field>& fields);

// Parses a command-line override: JSON when it parses as JSON, otherwise the
// raw string. Comma lists are accepted where a field expects an array.
nlohmann::json ParseOverride(const std::string& text);

int ResolveParallelism(int requested);

}  // namespace moegeo::app

#endif  // MOEGEO_TOOLS_APP_CONFIG_H_
