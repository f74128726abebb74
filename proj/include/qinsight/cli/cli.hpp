// Copyright 2026 The qinsight Authors.
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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qinsight::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

// `key = value` per line; `#` starts a comment. Throws ConfigError with the
// line number on anything else.
std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

// Expands `--config FILE` into flags appended after the command line.
// Options keep their first occurrence, so explicit flags win over the file.
// A value of true/false becomes a bare flag or nothing.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace qinsight::cli
