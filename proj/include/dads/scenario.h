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
 * @file scenario.h
 * @brief Scenario files: a sectioned key = value text format.
 *
 * Example:
 * @code
 *   [scenario]
 *   name = fig1_dads
 *
 *   [controller]
 *   kind = dads-wingrock
 *   c = 0.5
 *   K = 14
 *
 *   [sim]
 *   t_end = 10
 *   dt = 1e-4
 *   plant_init = 1, -0.5, -18
 *   ctrl_init = -log(10)
 *
 *   [disturbance]
 *   kind = sinusoid
 *   amplitude = 20, 10
 *   frequency = 10, 20
 * @endcode
 *
 * Sections: scenario, system, level.<j>, controller, sim, disturbance,
 * parameter, checks and majorants.<j>.  Numeric values are closed
 * expressions ("-log(10)", "2*pi"); map values are expressions in the
 * state names (x1.., y1..), z and the parameter names t1...  '#' starts a
 * comment.  Missing keys take the wing-rock defaults of the chosen
 * controller.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dads/controllers.h"
#include "dads/simulator.h"
#include "dads/synthesis.h"
#include "dads/system_model.h"

namespace dads {

/// Parse or validation error; line() is 1-based, 0 when not tied to a line.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

struct LevelConfig {
  std::string h = "0";
  std::string g = "1";
  std::string phi;    // p comma separated expressions; empty means zeros
  std::string alpha;  // l comma separated expressions; empty means zeros
  std::string eta = "1";
  std::string mu;     // empty: no upper majorant
  bool operator==(const LevelConfig&) const = default;
};

struct SystemConfig {
  /// "wingrock" selects the built-in plant and ignores the inline fields.
  std::string builtin = "wingrock";
  std::string name;
  int integrators = 0;
  int p = 0;
  int l = 0;
  /// "whole <sample box>" or "ball <radius>".
  std::string theta_set = "whole 40";
  std::vector<int> outputs;
  std::vector<LevelConfig> levels;
  bool operator==(const SystemConfig&) const = default;
};

struct MajorantConfig {
  int level = 0;
  std::string R, r, rho;  // empty: keep the built-in entry
  bool operator==(const MajorantConfig&) const = default;
};

enum class ControllerKind { kDadsWingRock, kSigmaMod, kDadsSynthesized };

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kDadsWingRock;
  double c = 0.5;
  double K = 14.0;
  double gamma = 20.0;
  double eps = 0.01;
  double sigma = 0.4;
  double a = 2.0;
  double b = 1.0;
  bool flip_xi_term = false;
  bool operator==(const ControllerConfig&) const = default;
};

/// One verifier check.  For "vanishing" the number is the threshold on
/// |x(t_end)|.
struct CheckConfig {
  std::string name;  // dissipation, estimates, tradeoff or vanishing
  double tolerance = 0.0;
  int samples = 1000;
  bool operator==(const CheckConfig&) const = default;
};

struct Scenario {
  std::string name;
  std::string output_dir = "out";
  std::uint64_t seed = kDefaultSeed;
  SystemConfig system;
  ControllerConfig controller;
  SimConfig sim;
  std::vector<CheckConfig> checks;
  std::vector<MajorantConfig> majorants;
  bool operator==(const Scenario&) const = default;
};

std::string ControllerKindName(ControllerKind kind);

/// Parses and validates; throws ScenarioError.
Scenario ParseScenario(const std::string& text);
Scenario LoadScenario(const std::string& path);
/// Text that ParseScenario maps back to an equal Scenario.
std::string SerializeScenario(const Scenario& scenario);

/// Plant described by the scenario.  Throws ScenarioError on bad maps.
StrictFeedbackSystem BuildSystem(const Scenario& scenario);
/// Built-in majorants with the scenario's overrides applied.
MajorantPack BuildMajorants(const Scenario& scenario,
                            const StrictFeedbackSystem& sys);
DadsGains BuildGains(const Scenario& scenario);
SynthesisOptions BuildSynthesisOptions(const Scenario& scenario);
/// Closed loop for the scenario's controller; synthesizes when needed (may
/// throw MajorantViolation).
std::shared_ptr<const ClosedLoop> BuildLoop(const Scenario& scenario);

}  // namespace dads
