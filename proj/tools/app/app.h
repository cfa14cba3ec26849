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
#ifndef MOEGEO_TOOLS_APP_APP_H_
#define MOEGEO_TOOLS_APP_APP_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace moegeo::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Entry point of the moegeo executable. args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace moegeo::app

#endif  // MOEGEO_TOOLS_APP_APP_H_
