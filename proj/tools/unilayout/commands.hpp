// Copyright 2026 The Unilayout Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef UNILAYOUT_TOOLS_COMMANDS_HPP_
#define UNILAYOUT_TOOLS_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace unilayout::cli {

// Subcommands: ingest, emit-train, generate, evaluate, render. Options may
// also come from a key=value file given with --config; flags override it.
// Every command writes its resolved options to run_config.txt in its output
// directory. Returns the process exit code.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: args exclude the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace unilayout::cli

#endif  // UNILAYOUT_TOOLS_COMMANDS_HPP_
