// Copyright 2026 The idvmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idv {

/// Exit codes of every subcommand.
inline constexpr int kExitOk = 0;       // verdict true or run complete
inline constexpr int kExitFalse = 1;    // verdict false; witness printed
inline constexpr int kExitError = 2;    // usage, parse, domain or resource error

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, single-line diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idv
