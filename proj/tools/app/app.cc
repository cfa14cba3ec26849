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
#include "app/app.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "app/commands.h"
#include "app/config.h"
#include "moegeo/error.h"

namespace moegeo::app {
namespace {

using nlohmann::json;

struct Binding {
  Field* field;
  CLI::Option* option;
  std::string value;
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Field> fields;
  std::function<void()> validate;
  std::function<int(const RunContext&)> run;
  CLI::App* sub = nullptr;
  std::string config_path;
  std::vector<std::unique_ptr<Binding>> bindings;
};

template <typename Config>
std::unique_ptr<Command> MakeCommand(
    std::string name, std::string description, Config& config,
    int (*run)(const Config&, const RunContext&)) {
  auto cmd = std::make_unique<Command>();
  cmd->name = std::move(name);
  cmd->description = std::move(description);
  cmd->fields = Fields(config);
  cmd->validate = [&config] { Validate(config); };
  cmd->run = [&config, run](const RunContext& ctx) { return run(config, ctx); };
  return cmd;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Field& FindField(std::vector<Field>& fields, const std::string& name) {
  for (Field& f : fields) {
    if (f.name == name) return f;
  }
  throw ConfigError("unknown key '" + name + "'");
}

void ApplyOverride(Field& field, const std::string& text) {
  try {
    field.set(ParseOverride(text));
  } catch (const ConfigError&) {
    field.set(json(text));
  }
}

void ApplyEnvironment(std::vector<Field>& fields) {
  const char* env = std::getenv("MOEGEO_SEED");
  if (env == nullptr || *env == '\0') return;
  const std::string text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("MOEGEO_SEED must be a non-negative integer");
  }
  FindField(fields, "seed").set(json(seed));
}

std::string TypeName(const json& value) {
  if (value.is_boolean()) return "BOOL";
  if (value.is_number_integer()) return "INT";
  if (value.is_number()) return "FLOAT";
  if (value.is_array()) return "LIST";
  return "TEXT";
}

int Execute(Command& cmd, std::ostream& out, std::ostream& err) {
  std::string input_text;
  if (!cmd.config_path.empty()) {
    input_text = ReadFile(cmd.config_path);
    const json file = json::parse(input_text, nullptr, false);
    if (file.is_discarded()) throw ConfigError("invalid JSON in " + cmd.config_path);
    ApplyJson(cmd.fields, file);
  }
  ApplyEnvironment(cmd.fields);
  for (const auto& b : cmd.bindings) {
    if (b->option->count() == 0) continue;
    const bool bare_flag = b->field->get().is_boolean() &&
                           (b->option->results().empty() || b->option->results()[0].empty());
    ApplyOverride(*b->field, bare_flag ? "true" : b->value);
  }
  cmd.validate();
  return cmd.run(RunContext{out, err, ToJson(cmd.fields), input_text});
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  BarrierConfig barrier;
  TrainConfig train;
  KlConfig kl;
  DppConfig dpp;
  InfoConfig info;
  VerifyConfig verify;

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(MakeCommand(
      "barrier", "Greedy vs. oracle sparse recovery across a coherence grid",
      barrier, &RunBarrier));
  commands.push_back(MakeCommand(
      "train", "Cross-validated MoE training with an expert-diversity regularizer",
      train, &RunTrain));
  commands.push_back(MakeCommand(
      "kl-project", "KL projection of a distribution onto k-sparse support",
      kl, &RunKlProject));
  commands.push_back(MakeCommand(
      "dpp-select", "Greedy vs. exhaustive log-det expert selection", dpp,
      &RunDppSelect));
  commands.push_back(MakeCommand(
      "info", "Routing information measures on a synthetic batch", info,
      &RunInfo));
  commands.push_back(MakeCommand(
      "verify", "Run the property audit suite and write verify.json", verify,
      &RunVerify));

  CLI::App app{"moegeo: MoE routing geometry lab", "moegeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "moegeo 0.1.0");
  for (auto& cmd : commands) {
    cmd->sub = app.add_subcommand(cmd->name, cmd->description);
    cmd->sub->add_option("--config", cmd->config_path, "JSON configuration file");
    for (Field& f : cmd->fields) {
      auto binding = std::make_unique<Binding>();
      binding->field = &f;
      std::string names = "--" + f.name;
      std::string dashed = f.name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != f.name) names += ",--" + dashed;
      binding->option = cmd->sub->add_option(names, binding->value, f.help)
                            ->allow_extra_args(false)
                            ->option_text(TypeName(f.get()) + " [" + f.get().dump() + "]");
      if (f.get().is_boolean()) binding->option->expected(0, 1);
      cmd->bindings.push_back(std::move(binding));
    }
  }
  std::string inject_fault;
  commands.back()
      ->sub->add_option("--inject_fault", inject_fault)
      ->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  verify.inject_fault = inject_fault;

  for (auto& cmd : commands) {
    if (!cmd->sub->parsed()) continue;
    try {
      return Execute(*cmd, out, err);
    } catch (const ConfigError& e) {
      err << "config: " << e.what() << "\n";
      return kExitConfig;
    } catch (const Error& e) {
      if (e.is_numerical()) {
        err << "numerical: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
        return kExitNumerical;
      }
      err << "config: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace moegeo::app
