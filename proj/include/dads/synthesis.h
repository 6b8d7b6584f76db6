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
 * @file synthesis.h
 * @brief Recursive construction of deadzone-adapted backstepping controllers.
 *
 * A controller is built level by level.  The base level is either the
 * pole-placement step for an integrator chain feeding a cascade, or the
 * scalar step for a pure strict-feedback chain.  Each further level applies
 * the backstepping step:
 *
 *   Vbar(x, y, z) = V(x, z) + (y - k(x, z))^2 / 2
 *   kbar(x, y, z) = -M(x, y, z) / eta(x, y) * (y - k(x, z))
 *
 * which halves the decay rate and doubles the disturbance gain.  All
 * derivatives of earlier levels come from nested jet evaluation.  The
 * majorants R, r, rho bounding the lower-level terms are user supplied and
 * validated by sampling.
 *
 * Example:
 * @code
 *   auto sys = dads::WingRockSystem();
 *   auto pack = dads::WingRockMajorants();
 *   dads::DadsGains gains;  // c = 0.5, a = 2, b = 1, Gamma = 20
 *   auto result = dads::synthesize(sys, gains, pack);
 *   double u = result.k_final.EvaluateScalar(std::vector{0.1, 0.2, 0.3, 0.0});
 * @endcode
 */

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dads/check_report.h"
#include "dads/smooth_map.h"
#include "dads/system_model.h"

namespace dads {

struct DadsGains {
  double b = 1.0;
  double gamma = 20.0;
  /// Level inside the positive part of the update law.
  double eps_dz = 0.01;
  double c = 0.5;
  double a = 2.0;
  SmoothMap kappa = IdentityMap();
  SmoothMap lambda = IdentityMap();

  /// Integrator-chain form uses eps^2 / (2 M).
  static double DeadzoneFromCascadeEpsilon(double eps, double M) {
    return eps * eps / (2.0 * M);
  }
  /// Pure chain form uses eps^2 / 2.
  static double DeadzoneFromChainEpsilon(double eps) { return eps * eps / 2.0; }
  /// The closed-form wing-rock law uses eps itself.
  static double DeadzoneFromExampleEpsilon(double eps) { return eps; }

  /// Throws std::invalid_argument unless all scalars are positive and
  /// kappa, lambda vanish at 0 and increase on a sample grid.
  void Validate() const;
};

/// Majorants for one level.  Level 1 uses only r; later levels use R over
/// (x, z), r over x and rho over (x, y), where x is the previous level's
/// state prefix and y the new coordinate.
struct StageMajorants {
  std::optional<SmoothMap> R;
  std::optional<SmoothMap> r;
  std::optional<SmoothMap> rho;
};
using MajorantPack = std::vector<StageMajorants>;

/// Sampled majorant inequality lhs <= rhs.  Margins are (rhs - lhs) /
/// (1 + |lhs|); a margin below -1e-9 raises MajorantViolation.
struct MajorantCheck {
  std::string name;
  int level = 0;
  int n_samples = 0;
  double worst_margin = 0.0;
  std::vector<double> witness;
};

class MajorantViolation : public std::runtime_error {
 public:
  explicit MajorantViolation(MajorantCheck check);
  const MajorantCheck& check() const { return check_; }

 private:
  MajorantCheck check_;
};

struct DadsStage {
  int level = 0;
  int state_dims = 0;  // maps take (state_0..state_{dims-1}, z)
  SmoothMap V;
  SmoothMap k;
  SmoothMap sigma;
  double rate_c = 0.0;
  double gain_a = 0.0;
  StageMajorants majorants;
  std::vector<MajorantCheck> majorant_checks;
};

struct BaseAlgebra {
  Eigen::MatrixXd P;
  Eigen::VectorXd omega;
  double K_const = 0.0;
  double M_raw = 0.0;
  double M_const = 0.0;
  /// Largest eigenvalue of P Abar + Abar' P + 2^m c P (should be <= 0).
  double lyapunov_max_eig = 0.0;
  /// Smallest eigenvalue of M_const Q - I (should be >= 0).
  double comparison_min_eig = 0.0;
  Eigen::MatrixXd Q;  // quadratic form of the base Lyapunov function
};

struct BaseStepResult {
  BaseAlgebra algebra;
  DadsStage stage;
};

struct SynthesisOptions {
  int majorant_samples = 400;
  double box_radius = 3.0;
  double z_radius = 3.0;
  std::uint64_t seed = kDefaultSeed;
  /// Jet orders kept available on the final maps (1 = gradients).
  int final_order = 1;
};

struct SynthesisResult {
  SmoothMap k_final;
  SmoothMap V_final;
  double M_const = 0.0;
  std::vector<DadsStage> stage_trace;
  std::optional<BaseAlgebra> base;
  double user_a = 0.0;
  double user_c = 0.0;
};

/// Pole placement and shifted Lyapunov solve for an n-integrator chain
/// feeding an m-level cascade.
BaseAlgebra SolveBaseAlgebra(int n, int m, double c);

BaseStepResult solve_base_theorem1(const StrictFeedbackSystem& sys,
                                   const DadsGains& gains,
                                   const StageMajorants& majorants,
                                   const SynthesisOptions& options = {});

DadsStage solve_base_theorem3(const StrictFeedbackSystem& sys,
                              const DadsGains& gains,
                              const StageMajorants& majorants,
                              const SynthesisOptions& options = {});

/// Builds level prev.level + 1 from `prev`.
DadsStage backstep(const DadsStage& prev, const StrictFeedbackSystem& sys,
                   const DadsGains& gains, const StageMajorants& majorants,
                   const SynthesisOptions& options = {});

SynthesisResult synthesize(const StrictFeedbackSystem& sys,
                           const DadsGains& gains, const MajorantPack& pack,
                           const SynthesisOptions& options = {});

/// Samples the stage's dissipation inequality
///   dV/dstate * f + dV/dz Gamma e^-z (V - eps)^+
///     <= -rate V + gain (|d|^2 + ((|theta| - b - lambda(e^z))^+)^2)
///                  / (1 + kappa(e^z)).
/// States are drawn at several scales up to `box`, theta from the system's
/// ThetaSet.  Margins are normalised by 1 + |lhs| + |rhs|; samples with
/// |V - eps| < 1e-9 (the deadzone kink) are skipped.
CheckReport StageCertificate(const StrictFeedbackSystem& sys,
                             const DadsStage& stage, const DadsGains& gains,
                             int n_samples, double tolerance,
                             std::uint64_t seed = kDefaultSeed,
                             double box = 3.0, double z_box = 3.0,
                             double d_box = 30.0);

/// Samples |state|^2 <= sigma V at the stage.
CheckReport ComparisonCertificate(const DadsStage& stage, int n_samples,
                                  double tolerance,
                                  std::uint64_t seed = kDefaultSeed,
                                  double box = 3.0, double z_box = 3.0);

/// Structured text report of a synthesis run.
std::string SynthesisReport(const SynthesisResult& result,
                            const std::vector<CheckReport>& certificates);

// Ingredients of the backstepping gain at one point.  Templated so the
// formula can be checked with doubles against hand evaluation.
template <typename T>
struct BackstepTerms {
  T V;               // previous Lyapunov function
  T dV_dz;           // its z-derivative
  T dk_dz;           // z-derivative of the previous virtual control
  T dk_dx_sq;        // |dk/dx|^2
  T s;               // y - k
  T x_sq;            // |x|^2
  T R, r, rho, mu;   // majorants
  T sigma;           // previous comparison function
  T lambda_ez;       // lambda(e^z)
  T kappa_ez;        // kappa(e^z)
  T exp_neg_z;       // e^-z
  T alpha_mix_sq;    // |alpha' - dk/dx G|^2
};

struct BackstepConstants {
  double c;  // decay rate of the previous level
  double a;  // disturbance gain of the previous level
  double b;
  double gamma;
};

template <typename T>
T BackstepP(const BackstepTerms<T>& t) {
  return (t.r + t.mu) * 0.5 * (1.0 + t.dk_dx_sq) + t.rho +
         (1.0 + t.mu * 0.5 * (3.0 + t.dk_dx_sq) + t.rho) * t.R;
}

template <typename T>
T BackstepM(const BackstepTerms<T>& t, const BackstepConstants& k) {
  const T P = BackstepP(t);
  const T one_dkz = 1.0 + t.dk_dz * t.dk_dz;
  const T ge = k.gamma * t.exp_neg_z;
  const T lam_b = k.b + t.lambda_ez;
  const T lam_b1 = k.b + 1.0 + t.lambda_ez;
  const T kap1 = 1.0 + t.kappa_ez;
  return k.c / 4.0 + ge * ge / (4.0 * k.c) * one_dkz * one_dkz * t.V +
         P * lam_b + 0.5 * (ge / 4.0 * (1.0 + t.s * t.s) + t.mu) * one_dkz +
         t.rho + t.sigma / k.c * P * P * lam_b1 * lam_b1 +
         kap1 / (4.0 * k.a) * t.alpha_mix_sq +
         kap1 / (2.0 * k.a) * P * P * (t.s * t.s + t.x_sq) +
         ge / 4.0 * (1.0 + t.dV_dz * t.dV_dz);
}

}  // namespace dads
