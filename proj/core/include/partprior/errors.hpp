// Copyright 2026 The PartPrior Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace partprior {

/// Error categories. Each maps to a stable CLI exit code so scripts can
/// distinguish bad flags from bad files from bad data.
enum class ErrorKind {
  invalid_config,          // exit 2
  io,                      // exit 3
  parse,                   // exit 4
  schema,                  // exit 4
  dimension_mismatch,      // exit 4
  degenerate_segment,      // exit 4 (usually caught and the part skipped)
  insufficient_keypoints,  // exit 4 (usually caught and the part skipped)
  empty_supervision,       // exit 4
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::invalid_config:
        return 2;
      case ErrorKind::io:
        return 3;
      default:
        return 4;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace partprior
