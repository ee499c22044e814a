// Copyright 2026 The Dialeval Authors.
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

#ifndef DIALEVAL_CLI_CLI_H_
#define DIALEVAL_CLI_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>

namespace dialeval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

// `dialeval gen|train|eval|chat|report [flags]`. Returns the process exit
// code; errors are reported on `err`.
int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err);

// The explicit seed if given, else DIALEVAL_SEED, else 1.
uint64_t ResolveSeed(std::optional<uint64_t> flag);

}  // namespace dialeval

#endif  // DIALEVAL_CLI_CLI_H_
