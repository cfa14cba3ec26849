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

#ifndef MOEGEO_ERROR_H_
#define MOEGEO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace moegeo {

// Every failure raised by the library carries a stable kind so callers (the
// CLI in particular) can map it onto exit codes without parsing messages.
enum class ErrorKind {
  kZeroColumn,
  kSingularGram,
  kInvalidShape,
  kUnreachable,
  kTooLarge,
  kNotPsd,
  kInvalidK,
  kZeroProbability,
  kInvalidDistribution,
  kInvalidConfig,
  kInvalidArgument,
  kNonFinite,
  kDegenerateProbe,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // True for failures that indicate numerical breakdown rather than bad input.
  bool is_numerical() const {
    return kind_ == ErrorKind::kNonFinite || kind_ == ErrorKind::kNotPsd ||
           kind_ == ErrorKind::kSingularGram ||
           kind_ == ErrorKind::kDegenerateProbe ||
           kind_ == ErrorKind::kUnreachable;
  }

 private:
  ErrorKind kind_;
};

}  // namespace moegeo

#endif  // MOEGEO_ERROR_H_
