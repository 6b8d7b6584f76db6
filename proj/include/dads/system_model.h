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
 * @file system_model.h
 * @brief Strict-feedback plants, disturbance signals and majorant checks.
 *
 * One type covers both plant classes:
 *
 *   integrators > 0:  x_i' = x_{i+1} (i < n), x_n' = y_1, followed by the
 *                     y-cascade  y_j' = h_j + g_j y_{j+1} + phi_j' theta
 *                                       + alpha_j' d,    y_{m+1} = u;
 *   integrators = 0:  the pure chain x_i' = h_i(x_1..x_i)
 *                     + g_i(x_1..x_i, theta) x_{i+1} + phi_i' theta
 *                     + alpha_i' d,  x_{n+1} = u.
 *
 * Level j maps take the first (integrators + j) state coordinates; g_j
 * additionally takes theta appended after the state.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dads/smooth_map.h"

namespace dads {

struct CascadeLevel {
  SmoothMap h;      // state prefix -> R, h(0) = 0
  SmoothMap g;      // (state prefix, theta) -> R
  SmoothMap phi;    // state prefix -> R^p, phi(0) = 0
  SmoothMap alpha;  // state prefix -> R^l
  SmoothMap eta;    // state prefix -> (0, inf), eta <= g
  // Upper majorant |g| <= mu (1 + |theta|); unused on the last level.
  std::optional<SmoothMap> mu;
};

/// Admissible parameter set, described by a sampler and a membership test.
class ThetaSet {
 public:
  using Sampler = std::function<std::vector<double>(std::mt19937_64&)>;
  using Membership = std::function<bool(std::span<const double>)>;

  ThetaSet() = default;
  ThetaSet(int dim, Sampler sampler, Membership contains);

  /// All of R^dim; samples uniformly from the box |theta_i| <= sample_box.
  static ThetaSet Whole(int dim, double sample_box);
  /// Closed Euclidean ball of the given radius.
  static ThetaSet Ball(int dim, double radius);

  int dim() const { return dim_; }
  std::vector<double> Sample(std::mt19937_64& rng) const;
  bool Contains(std::span<const double> theta) const;

 private:
  int dim_ = 0;
  Sampler sampler_;
  Membership contains_;
};

struct StrictFeedbackSystem {
  std::string name;
  int integrators = 0;  // n of the (x, y) cascade; 0 for the pure chain
  int p = 0;            // dim theta
  int l = 0;            // dim d
  std::vector<CascadeLevel> levels;
  ThetaSet theta_set;
  /// State coordinates forming the regulated output Y.
  std::vector<int> output_indices;

  int num_levels() const { return static_cast<int>(levels.size()); }
  int state_dim() const { return integrators + num_levels(); }
  bool pure() const { return integrators == 0; }
  /// Number of state coordinates seen by level j (1-based).
  int prefix_dim(int level) const { return integrators + level; }
  /// Conventional variable names: x1.., then y1.. for the cascade form.
  std::vector<std::string> StateNames() const;
  /// Throws std::invalid_argument when map arities are inconsistent or
  /// h(0) != 0, phi(0) != 0.
  void Validate() const;
};

/// Full time derivative of the plant state (length state_dim()).
std::vector<double> eval_dynamics(const StrictFeedbackSystem& sys,
                                  std::span<const double> state, double u,
                                  std::span<const double> theta,
                                  std::span<const double> d);

/// Jet version of eval_dynamics; theta and d enter as constants.
JetVec eval_dynamics(const StrictFeedbackSystem& sys, const JetVec& state,
                     const Jet& u, std::span<const double> theta,
                     std::span<const double> d);

/// Dynamics of the first `dims` state coordinates with `top_input` in place
/// of the coordinate that would follow them (the next state or u).
JetVec SubsystemDynamics(const StrictFeedbackSystem& sys, int dims,
                         const JetVec& state, const Jet& top_input,
                         std::span<const double> theta,
                         std::span<const double> d);

struct MajorantViolationRecord {
  int level;
  std::string which;  // "eta" or "mu"
  double margin;
  std::vector<double> state;
  std::vector<double> theta;
};

struct MajorantReport {
  double worst_margin_low = 0.0;   // min (g - eta)
  double worst_margin_high = 0.0;  // min (mu (1 + |theta|) - g)
  std::vector<MajorantViolationRecord> violations;
};

constexpr std::uint64_t kDefaultSeed = 20260101;

/// Samples states uniformly in [-box_radius, box_radius]^dim and theta from
/// the system's ThetaSet; reports the worst margins of eta <= g and
/// |g| <= mu (1 + |theta|).
MajorantReport validate_majorants(const StrictFeedbackSystem& sys,
                                  int n_samples, double box_radius = 5.0,
                                  std::uint64_t seed = kDefaultSeed);

class DisturbanceProfile {
 public:
  enum class Kind { kZero, kSinusoidBank, kVanishing, kCustomTable };

  DisturbanceProfile() = default;
  static DisturbanceProfile Zero(int channels);
  /// d_i(t) = amplitude_i cos(frequency_i t).
  static DisturbanceProfile SinusoidBank(std::vector<double> amplitude,
                                         std::vector<double> frequency);
  /// d_i(t) = amplitude_i cos(frequency_i t) exp(-decay t).
  static DisturbanceProfile Vanishing(std::vector<double> amplitude,
                                      std::vector<double> frequency,
                                      double decay);
  /// Piecewise-linear table; times strictly increasing.  Outside the table
  /// the nearest end row is held.
  static DisturbanceProfile CustomTable(std::vector<double> times,
                                        std::vector<std::vector<double>> rows);

  Kind kind() const { return kind_; }
  int channels() const { return channels_; }
  const std::vector<double>& amplitude() const { return amplitude_; }
  const std::vector<double>& frequency() const { return frequency_; }
  double decay() const { return decay_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  std::vector<double> Sample(double t) const;

  bool operator==(const DisturbanceProfile&) const = default;

 private:
  Kind kind_ = Kind::kZero;
  int channels_ = 0;
  std::vector<double> amplitude_;
  std::vector<double> frequency_;
  double decay_ = 0.0;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

/// Deterministic evaluation; t < 0 is an argument error.
std::vector<double> sample_disturbance(const DisturbanceProfile& profile,
                                       double t);

class ParameterSignal {
 public:
  enum class Kind { kConstant, kTable };

  ParameterSignal() = default;
  static ParameterSignal Constant(std::vector<double> theta);
  /// Piecewise-linear in time, end rows held.
  static ParameterSignal Table(std::vector<double> times,
                               std::vector<std::vector<double>> rows);

  Kind kind() const { return kind_; }
  int dim() const;
  std::vector<double> Value(double t) const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  /// Throws std::invalid_argument if any tabulated value lies outside `set`.
  void CheckAdmissible(const ThetaSet& set) const;

  bool operator==(const ParameterSignal&) const = default;

 private:
  Kind kind_ = Kind::kConstant;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

double Norm(std::span<const double> v);

}  // namespace dads
