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
#ifndef MOEGEO_TOOLS_APP_COMMANDS_H_
#define MOEGEO_TOOLS_APP_COMMANDS_H_

#include <iosfwd>
#include <string>

#include "app/config.h"
#include "json.hpp"

namespace moegeo::app {

struct RunContext {
  std::ostream& out;
  std::ostream& err;
  nlohmann::json resolved;  // effective configuration
  std::string input_text;   // verbatim --config file, empty when absent
};

int RunBarrier(const BarrierConfig& c, const RunContext& ctx);
int RunTrain(const TrainConfig& c, const RunContext& ctx);
int RunKlProject(const KlConfig& c, const RunContext& ctx);
int RunDppSelect(const DppConfig& c, const RunContext& ctx);
int RunInfo(const InfoConfig& c, const RunContext& ctx);
int RunVerify(const VerifyConfig& c, const RunContext& ctx);

}  // namespace moegeo::app

#endif  // MOEGEO_TOOLS_APP_COMMANDS_H_
