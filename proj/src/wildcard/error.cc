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

#include "wildcard/error.h"

namespace wildcard {

void throw_usage(const std::string& what) { throw Error(ErrorCode::kUsage, what); }
void throw_data(const std::string& what) { throw Error(ErrorCode::kData, what); }
void throw_solver(const std::string& what) { throw Error(ErrorCode::kSolver, what); }

}  // namespace wildcard
