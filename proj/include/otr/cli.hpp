// Copyright 2026 The OTR Labeling Authors
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

#ifndef OTR_CLI_HPP_
#define OTR_CLI_HPP_

#include <iosfwd>

namespace otr {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParse = 3,
  kExitNumeric = 4,
  kExitIo = 5,
};

// Entry point of the `otr` tool: label, select-experts, diagnose and
// demo-gridworld. Normal output goes to `out`, diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace otr

#endif  // OTR_CLI_HPP_
