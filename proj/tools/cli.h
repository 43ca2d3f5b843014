/*
 * Copyright 2026 The fairwelfare Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRWELFARE_TOOLS_CLI_H_
#define FAIRWELFARE_TOOLS_CLI_H_

#include <ostream>
#include <span>
#include <string>

namespace fairwelfare::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSolver = 2;

// Runs the command line `args` (without the program name). Reports go to
// `out` unless --out is given; diagnostics go to `err`.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fairwelfare::cli

#endif  // FAIRWELFARE_TOOLS_CLI_H_
