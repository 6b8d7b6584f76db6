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
 * @file verifier.h
 * @brief Executable checks of dissipation inequalities and trajectory
 * estimates.
 *
 * Sampled checks draw points from a box (component-wise uniform, with the
 * state scale cycling through 1e-3, 0.1, 1 and the full box so that the
 * neighbourhood of the origin is covered).  Trajectory checks read a
 * TrajectoryLog.  Asymptotic claims are checked over the final 20% of the
 * horizon with a 10% slack on the bound; both numbers are recorded in the
 * report detail.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dads/check_report.h"
#include "dads/controllers.h"
#include "dads/simulator.h"
#include "dads/smooth_map.h"
#include "dads/synthesis.h"

namespace dads {

constexpr double kTailFraction = 0.2;
constexpr double kTailSlack = 0.1;
constexpr double kKinkBand = 1e-9;

struct SampleBox {
  double x = 3.0;
  double z = 3.0;
  double theta = 40.0;
  double d = 30.0;
};

struct DissipationSample {
  std::vector<double> state;  // augmented closed-loop state
  std::vector<double> theta;
  std::vector<double> d;
};

using DissipationSampler =
    std::function<DissipationSample(std::mt19937_64& rng, int index)>;
using VectorFieldFn = std::function<std::vector<double>(
    std::span<const double> state, std::span<const double> theta,
    std::span<const double> d)>;
using BoundFn = std::function<double(std::span<const double> state,
                                     std::span<const double> theta,
                                     std::span<const double> d, double V)>;

struct DissipationOptions {
  std::string name = "dissipation";
  std::uint64_t seed = kDefaultSeed;
  /// Samples with |V - kink_level| < kKinkBand are skipped (the deadzone
  /// boundary, where the update law is not differentiable).  NaN disables.
  double kink_level = std::numeric_limits<double>::quiet_NaN();
};

/// Samples dV/dstate . rhs <= bound.  V takes (state, theta); only the
/// state partials enter the left side.  Margin is bound - lhs; the witness
/// is (state, theta, d) of the worst sample.
CheckReport check_dissipation(const SmoothMap& V, const VectorFieldFn& rhs,
                              const BoundFn& bound,
                              const DissipationSampler& sampler, int n,
                              double tol, const DissipationOptions& options = {});

/// Sampler over `box` for an augmented state of dimension `state_dim`
/// whose coordinates listed in `z_indices` use the z range and those in
/// `theta_like_indices` use the theta range.
DissipationSampler BoxSampler(int state_dim, int theta_dim, int d_dim,
                              const SampleBox& box,
                              std::vector<int> z_indices = {},
                              std::vector<int> theta_like_indices = {});

/// V of the closed-form wing-rock law over (x1, x2, x3, z, theta).
SmoothMap WingRockLyapunovMap(const WingRockDadsController& ctrl);
/// W of the sigma-modification law over (x1, x2, x3, thetahat, theta).
SmoothMap SigmaModLyapunovMap(const SigmaModController& ctrl);

/// Vdot <= -cV + 2 (|d|^2 + ((|theta| - 1 - e^z)^+)^2) / (1 + e^z) for the
/// wing-rock DADS pair.
CheckReport check_wingrock_dissipation(const WingRockDadsController& ctrl,
                                       int n, double tol,
                                       std::uint64_t seed = kDefaultSeed,
                                       const SampleBox& box = {});

/// Wdot <= -c (x1^2 + zeta^2 + chi^2) - sigma/(2 Gamma) |thetahat - theta|^2
///         + |d|^2 / 2 + sigma/(2 Gamma) |theta|^2.
CheckReport check_sigma_mod_dissipation(const SigmaModController& ctrl, int n,
                                        double tol,
                                        std::uint64_t seed = kDefaultSeed,
                                        const SampleBox& box = {});

struct SignalBounds {
  double d_sup = 0.0;
  double theta_sup = 0.0;
};

/// Four reports on a DADS log (controller state z):
///  envelope:  V(t) <= e^-ct V0 + a (d^2 + ((th - b - lambda(e^z0))^+)^2)
///                                  / (c (1 + kappa(e^z0)))
///  z-monotone: z non-decreasing and finite
///  tail-V:    V <= eps_dz (1 + slack) on the tail
///  tail-Y:    |Y| <= (sqrt(c^2 + 1) + c) sqrt(2 eps_dz) (1 + slack) on the tail
/// `envelope_tol` is added to the envelope bound.
std::vector<CheckReport> check_trajectory_estimates(
    const TrajectoryLog& log, const DadsGains& gains, double V0,
    const SignalBounds& bounds, double envelope_tol = 1e-6);
/// Same, with the bounds read from the log's sampled signals.
std::vector<CheckReport> check_trajectory_estimates(const TrajectoryLog& log,
                                                    const DadsGains& gains,
                                                    double V0);

/// (sqrt(c^2 + 1) + c) sqrt(2 eps).
double AttractivityRadius(double c, double eps);

/// Relative growth of the gain column over the final `tail_fraction` of the
/// horizon: sup over the whole log / sup before the tail - 1.
double GainTailGrowth(const TrajectoryLog& log,
                      double tail_fraction = kTailFraction);

/// |thetahat(t_end)| / |thetahat(t_end / 2)| from the gain column.
double GainHalfHorizonRatio(const TrajectoryLog& log);

/// Persistent-disturbance contrast: the DADS gain and the sigma > 0 gain
/// plateau (growth < 1% over the tail) while the sigma = 0 gain drifts
/// (more than 10% growth between t_end / 2 and t_end).  With
/// `expect_drift` false all three gains must plateau.  Throws
/// std::invalid_argument when the horizons or time grids differ.
CheckReport check_drift_contrast(const TrajectoryLog& dads_log,
                                 const TrajectoryLog& sigma0_log,
                                 const TrajectoryLog& sigma_log,
                                 bool expect_drift = true);

/// (|d|_inf^2 / 2 + sigma / (2 Gamma) |theta|^2) / c.
double SigmaTradeoffBound(const SigmaModController& ctrl,
                          std::span<const double> theta, double d_sup);

/// Tail sup of x1^2 + zeta^2 + chi^2 against SigmaTradeoffBound (1 + slack).
CheckReport check_sigma_tradeoff(const TrajectoryLog& sigma_log,
                                 std::span<const double> theta,
                                 const SigmaModController& ctrl);

/// |plant state(t_end)| < threshold.
CheckReport check_vanishing(const TrajectoryLog& log, double threshold = 1e-3);

/// CSV with columns name, passed, worst_margin, tolerance, n_samples,
/// witness (';'-separated).
void WriteReportsCsv(const std::vector<CheckReport>& reports, std::ostream& os);
/// One "PASS|FAIL name: margin ..." line per report.
std::string FormatReports(const std::vector<CheckReport>& reports);

}  // namespace dads
