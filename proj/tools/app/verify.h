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
#ifndef MOEGEO_TOOLS_APP_VERIFY_H_
#define MOEGEO_TOOLS_APP_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace moegeo::app {

// worst_margin is the smallest slack against the check's tolerance; negative
// means violated.
struct CheckResult {
  std::string id;
  bool pass = false;
  double worst_margin = 0.0;
  std::string detail;
};

const std::vector<std::string>& CheckGroups();

// Runs the named groups (all when empty) in the order of CheckGroups().
// inject_fault == "kl-sign" negates the KL reported by the sparse projection.
std::vector<CheckResult> RunChecks(const std::vector<std::string>& groups,
                                   std::uint64_t seed,
                                   const std::string& inject_fault);

}  // namespace moegeo::app

#endif  // MOEGEO_TOOLS_APP_VERIFY_H_
