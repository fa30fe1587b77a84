// Copyright 2026 The ghzlocc Authors
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

#ifndef GHZLOCC_TOOLS_CLI_APP_HPP_
#define GHZLOCC_TOOLS_CLI_APP_HPP_

#include <cstdint>
#include <ostream>
#include <string>

namespace ghzlocc::cli {

struct RunConfig {
  std::string command;
  std::string protocol = "ghz";  // ghz | two-bell
  int block_qubits_u = 1;
  int block_qubits_v = 1;
  int trials = 20;
  std::uint64_t seed = 0;
  std::string mode = "enumerate";  // sampled | enumerate
  std::string format = "text";     // text | machine
  bool schedule_sweep = false;
  // Testing hook: drop one classical correction so the failure path is
  // exercisable. none | skip-bob-x | skip-charlie-x | skip-alice-z.
  std::string inject_fault = "none";
};

/// Parses argv and runs one command. Returns 0 when every check passes,
/// 1 on a verification failure (with the failing trial's seed, branch, and
/// transcript on `out`), 2 on unusable flags (usage text on `err`).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace ghzlocc::cli

#endif  // GHZLOCC_TOOLS_CLI_APP_HPP_
