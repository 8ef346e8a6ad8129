// SPDX-License-Identifier: Apache-2.0
//
// bdris-sim: beyond-diagonal RIS phase-response library and NOMA LEO downlink simulator
// Copyright (C) 2026 The bdris-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BDRIS_TOOLS_CLI_HPP
#define BDRIS_TOOLS_CLI_HPP

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdris/ris.hpp"

namespace bdris::cli
{

enum ExitCode : int
{
    kSuccess = 0,
    kRuntimeFailure = 1,
    kConfigError = 2
};

/// Malformed phase-response file.
class PhaseFileError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Phase responses are stored as JSON:
///   {"matrices": [{"re": [[...], ...], "im": [[...], ...]}, ...]}
/// one entry per mode matrix, row-major.
PhaseResponse read_phase_response(const std::filesystem::path &path);
void write_phase_response(const PhaseResponse &pr, const std::filesystem::path &path);

/// Runs the command line `args` (without the program name). Results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on runtime failure or an
/// infeasible outcome, 2 on configuration or parse errors.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace bdris::cli

#endif
