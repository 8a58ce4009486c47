// Copyright 2026 The nbstab Authors
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

#ifndef NBSTAB_CLI_HPP
#define NBSTAB_CLI_HPP

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace nbstab::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of the raw input, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace nbstab::cli

#endif  // NBSTAB_CLI_HPP
