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

#include "dads/controllers.h"

#include <string>

namespace dads {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

WingRockDadsController::WingRockDadsController(double c, double K,
                                               double gamma, double eps,
                                               bool flip_xi_term)
    : c_(c), K_(K), gamma_(gamma), eps_(eps), flip_xi_term_(flip_xi_term) {
  Require(c >= 0.5, "DADS controller needs c >= 1/2");
  Require(K >= 28.0 * c, "DADS controller needs K >= 28 c");
  Require(gamma > 0.0, "DADS controller needs Gamma > 0");
  Require(eps > 0.0, "DADS controller needs eps > 0");
}

SigmaModController::SigmaModController(double c, double gamma, double K,
                                       double sigma)
    : c_(c), gamma_(gamma), K_(K), sigma_(sigma) {
  Require(c > 0.0, "sigma-mod controller needs c > 0");
  Require(gamma > 0.0, "sigma-mod controller needs Gamma > 0");
  Require(K >= 1.0 + 2.0 * c, "sigma-mod controller needs K >= 1 + 2c");
  Require(sigma >= 0.0, "sigma-mod controller needs sigma >= 0");
}

SynthesizedDadsController::SynthesizedDadsController(SmoothMap k_final,
                                                     SmoothMap V_final,
                                                     double gamma, double eps)
    : k_(std::move(k_final)), V_(std::move(V_final)), gamma_(gamma), eps_(eps) {
  Require(gamma > 0.0 && eps > 0.0, "synthesized controller needs Gamma, eps > 0");
  Require(k_.arity() == V_.arity() && k_.codim() == 1 && V_.codim() == 1,
          "synthesized controller maps must be scalar with equal arity");
}

SynthesizedDadsController::SynthesizedDadsController(
    const SynthesisResult& result, const DadsGains& gains)
    : SynthesizedDadsController(result.k_final, result.V_final, gains.gamma,
                                gains.eps_dz) {}

SynthesizedOutput synthesized_control(std::span<const double> state, double z,
                                      const SynthesizedDadsController& ctrl) {
  if (static_cast<int>(state.size()) != ctrl.state_dim()) {
    throw std::invalid_argument("synthesized_control: state has dimension " +
                                std::to_string(state.size()) + ", expected " +
                                std::to_string(ctrl.state_dim()));
  }
  std::vector<double> sz(state.begin(), state.end());
  sz.push_back(z);
  SynthesizedOutput out;
  out.u = ctrl.k().EvaluateScalar(sz);
  out.z_rate = ctrl.gamma() * std::exp(-z) *
               relu_plus(ctrl.V().EvaluateScalar(sz) - ctrl.eps());
  return out;
}

}  // namespace dads
