// Copyright 2026 The Wildcard Authors
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

#ifndef WILDCARD_ERROR_H_
#define WILDCARD_ERROR_H_

#include <stdexcept>
#include <string>

namespace wildcard {

// Numeric values double as CLI exit codes.
enum class ErrorCode : int {
  kUsage = 1,   // invalid argument, configuration or out-of-range parameter
  kData = 2,    // malformed input, missing prediction, I/O failure
  kSolver = 3,  // optimizer or root finder did not converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_usage(const std::string& what);
[[noreturn]] void throw_data(const std::string& what);
[[noreturn]] void throw_solver(const std::string& what);

}  // namespace wildcard

#endif  // WILDCARD_ERROR_H_
