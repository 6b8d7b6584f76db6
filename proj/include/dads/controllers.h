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
 * @file controllers.h
 * @brief Runtime control laws.
 *
 * Three controllers are provided:
 *  - the closed-form deadzone-adapted law for the wing-rock plant,
 *  - the sigma-modification adaptive baseline for the same plant,
 *  - the law produced by synthesize() for any strict-feedback plant.
 *
 * Each exposes pure functions of (plant state, controller state).  The
 * wing-rock formulas are templates so that the simulator can evaluate them
 * on jets to obtain exact Jacobians.
 */

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dads/jet.h"
#include "dads/synthesis.h"

namespace dads {

class WingRockDadsController {
 public:
  /// Throws std::invalid_argument unless c >= 1/2, K >= 28 c, gamma > 0 and
  /// eps > 0.  `flip_xi_term` negates the last term of the control law; it
  /// exists only to exercise the verifier on a broken controller.
  WingRockDadsController(double c = 0.5, double K = 14.0, double gamma = 20.0,
                         double eps = 0.01, bool flip_xi_term = false);

  double c() const { return c_; }
  double K() const { return K_; }
  double gamma() const { return gamma_; }
  double eps() const { return eps_; }
  bool flip_xi_term() const { return flip_xi_term_; }

 private:
  double c_, K_, gamma_, eps_;
  bool flip_xi_term_;
};

class SigmaModController {
 public:
  /// Throws std::invalid_argument unless c > 0, gamma > 0, K >= 1 + 2c and
  /// sigma >= 0.
  SigmaModController(double c = 0.5, double gamma = 20.0, double K = 14.0,
                     double sigma = 0.4);

  double c() const { return c_; }
  double gamma() const { return gamma_; }
  double K() const { return K_; }
  double sigma() const { return sigma_; }

 private:
  double c_, gamma_, K_, sigma_;
};

template <typename T>
struct WingRockIntermediates {
  T zeta, rho, L, xi, V;
};

template <typename T>
WingRockIntermediates<T> wingrock_intermediates(const T& x1, const T& x2,
                                                const T& x3, const T& z,
                                                double c, double K) {
  using std::exp;
  WingRockIntermediates<T> w;
  w.zeta = x2 + 2.0 * c * x1;
  w.rho = 1.0 + exp(z);
  const T x1s = x1 * x1, x2s = x2 * x2;
  w.L = 1.0 + x1s * x1s + x2s * x2s;
  w.xi = x3 + x1 + 2.0 * c * x2 + K * (w.rho * w.rho) * w.L * w.zeta;
  w.V = 0.5 * x1s + 0.5 * (w.zeta * w.zeta) + 0.5 * (w.xi * w.xi);
  return w;
}

template <typename T>
T wingrock_control(const T& x1, const T& x2, const T& x3, const T& z,
                   const WingRockDadsController& ctrl) {
  const double c = ctrl.c(), K = ctrl.K(), G = ctrl.gamma();
  const auto w = wingrock_intermediates(x1, x2, x3, z, c, K);
  const T rho2 = w.rho * w.rho;
  const T inner = 1.0 + 18.0 * c * K * rho2 * w.L;
  const T xi_term =
      42.0 * c * (2.0 * c + 1.0) * rho2 * w.L * (inner * inner) * w.xi;
  const T lead = (2.0 * c + K * rho2 * (w.L + 4.0 * w.zeta * (x2 * x2 * x2))) * x3;
  T u = -lead - w.zeta - x2 -
        2.0 * G * K * w.rho * w.L * relu_plus(w.V - ctrl.eps()) * w.zeta -
        K * rho2 * x2 * (4.0 * (x1 * x1 * x1) * w.zeta + 2.0 * c * w.L);
  if (ctrl.flip_xi_term()) {
    u += xi_term;
  } else {
    u -= xi_term;
  }
  return u;
}

template <typename T>
T wingrock_z_rate(const T& x1, const T& x2, const T& x3, const T& z,
                  const WingRockDadsController& ctrl) {
  using std::exp;
  const auto w = wingrock_intermediates(x1, x2, x3, z, ctrl.c(), ctrl.K());
  return ctrl.gamma() * exp(-z) * relu_plus(w.V - ctrl.eps());
}

template <typename T>
struct SigmaModOutput {
  T u;
  std::array<T, 4> w;
  T zeta, chi, phi;
};

template <typename T>
SigmaModOutput<T> sigma_mod_control(const T& x1, const T& x2, const T& x3,
                                    const std::array<T, 4>& th,
                                    const SigmaModController& ctrl) {
  const double c = ctrl.c(), K = ctrl.K(), G = ctrl.gamma(), s = ctrl.sigma();
  SigmaModOutput<T> o;
  const T x12 = x1 * x2, x22 = x2 * x2;
  o.zeta = x2 + 2.0 * c * x1;
  const T reg = th[0] * x1 + th[1] * x2 + th[2] * x12 + th[3] * x22;
  o.chi = reg + 2.0 * c * x2 + K * o.zeta + x1 + x3;
  o.phi = 2.0 * c + K + th[1] + th[2] * x1 + 2.0 * th[3] * x2;
  const T drive = G * (o.zeta + o.phi * o.chi);
  o.w = {drive * x1 - s * th[0], drive * x2 - s * th[1],
         drive * x12 - s * th[2], drive * x22 - s * th[3]};
  o.u = -(o.w[0] + 2.0 * c + o.w[2] * x2) * x1 -
        (th[0] + o.w[1] + 2.0 + 2.0 * K * c) * x2 - (th[2] + o.w[3]) * x22 -
        o.phi * (reg + x3) - (K + o.phi * o.phi) * o.chi;
  return o;
}

/// W(x, thetahat) = x1^2/2 + zeta^2/2 + chi^2/2 + |thetahat - theta|^2/(2 Gamma).
template <typename T>
T sigma_mod_lyapunov(const T& x1, const T& x2, const T& x3,
                     const std::array<T, 4>& th, std::span<const double> theta,
                     const SigmaModController& ctrl) {
  const auto o = sigma_mod_control(x1, x2, x3, th, ctrl);
  T W = 0.5 * (x1 * x1) + 0.5 * (o.zeta * o.zeta) + 0.5 * (o.chi * o.chi);
  for (int i = 0; i < 4; ++i) {
    const T e = th[i] - theta[i];
    W = W + (e * e) / (2.0 * ctrl.gamma());
  }
  return W;
}

class SynthesizedDadsController {
 public:
  /// Throws std::invalid_argument unless gamma > 0, eps > 0.
  SynthesizedDadsController(SmoothMap k_final, SmoothMap V_final, double gamma,
                            double eps);
  SynthesizedDadsController(const SynthesisResult& result,
                            const DadsGains& gains);

  int state_dim() const { return k_.arity() - 1; }
  const SmoothMap& k() const { return k_; }
  const SmoothMap& V() const { return V_; }
  double gamma() const { return gamma_; }
  double eps() const { return eps_; }

 private:
  SmoothMap k_, V_;
  double gamma_, eps_;
};

struct SynthesizedOutput {
  double u;
  double z_rate;
};

/// u = k(state, z), z' = Gamma e^-z (V(state, z) - eps)^+.
SynthesizedOutput synthesized_control(std::span<const double> state, double z,
                                      const SynthesizedDadsController& ctrl);

}  // namespace dads
