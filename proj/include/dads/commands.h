/******************************************************************************
 * Copyright 2026 The DADS Toolkit Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

/**
 * @file commands.h
 * @brief The dadsctl subcommands as library functions.
 *
 * Exit codes: 0 success, 1 unexpected error, 2 parse, usage or horizon
 * error, 3 divergence, 4 majorant violation, 5 failed check.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dads/scenario.h"

namespace dads {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitUsage = 2,
  kExitDivergence = 3,
  kExitMajorant = 4,
  kExitCheckFailed = 5,
};

/// Command-line overrides applied on top of a loaded scenario.
struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  /// Output directory; falls back to the scenario's output_dir.
  std::optional<std::string> out;
};

/// Loads `path` and applies the overrides (re-validating the horizon).
Scenario LoadWithOverrides(const std::string& path, const CommandOptions& opts);

/// Writes <out>/<name>.csv and prints a trajectory_stats summary line.
int cmd_simulate(const std::string& scenario_file, const CommandOptions& opts,
                 std::ostream& out, std::ostream& err);
/// Writes <out>/<name>_synthesis.txt with the stage trace and certificates.
int cmd_synthesize(const std::string& scenario_file, const CommandOptions& opts,
                   std::ostream& out, std::ostream& err);
/// Runs the scenario's checks; writes <out>/<name>_checks.csv.
int cmd_verify(const std::string& scenario_file, const CommandOptions& opts,
               std::ostream& out, std::ostream& err);
/// Side-by-side table of at least two scenarios on one system and horizon;
/// writes <out>/compare.csv.  Adds the drift contrast when a deadzone run,
/// a sigma > 0 run and a sigma = 0 run are all present.
int cmd_compare(const std::vector<std::string>& scenario_files,
                const CommandOptions& opts, std::ostream& out,
                std::ostream& err);

/// Runs the checks of an already loaded scenario.
std::vector<CheckReport> RunChecks(const Scenario& scenario);

/// Entry point shared by dadsctl and the tests.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dads
