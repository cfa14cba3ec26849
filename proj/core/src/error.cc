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
#include "moegeo/error.h"

namespace moegeo {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kZeroColumn: return "ZeroColumn";
    case ErrorKind::kSingularGram: return "SingularGram";
    case ErrorKind::kInvalidShape: return "InvalidShape";
    case ErrorKind::kUnreachable: return "Unreachable";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kNotPsd: return "NotPSD";
    case ErrorKind::kInvalidK: return "InvalidK";
    case ErrorKind::kZeroProbability: return "ZeroProbability";
    case ErrorKind::kInvalidDistribution: return "InvalidDistribution";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kDegenerateProbe: return "DegenerateProbe";
  }
  return "Unknown";
}

}  // namespace moegeo
