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
 * @file wingrock.h
 * @brief Built-in wing-rock plant and its majorant pack.
 *
 *   x1' = x2
 *   x2' = theta1 x1 + theta2 x2 + theta3 x1 x2 + theta4 x2^2 + x3 + d1
 *   x3' = u + d2
 */

#pragma once

#include <array>
#include <span>

#include "dads/synthesis.h"
#include "dads/system_model.h"

namespace dads {

/// Right-hand side of the wing-rock plant for scalar or jet states.
template <typename T>
std::array<T, 3> WingRockField(const T& x1, const T& x2, const T& x3,
                               const T& u, std::span<const double> theta,
                               std::span<const double> d) {
  return {x2,
          theta[0] * x1 + theta[1] * x2 + theta[2] * (x1 * x2) +
              theta[3] * (x2 * x2) + x3 + d[0],
          u + d[1]};
}

/// Three-level pure chain, p = 4, l = 2, outputs (x1, x2), theta in R^4
/// (sampled from |theta_i| <= 40).
StrictFeedbackSystem WingRockSystem();

/// Majorants valid for the default DadsGains (c = 0.5, a = 2, b = 1,
/// Gamma = 20, kappa = lambda = id).  Level 3 uses a coefficient table
///   R(x1, x2, z) = sum_{j, beta} C_{j, beta} t^j e^{beta z},
///   t = sqrt(1 + x1^2 + x2^2).
MajorantPack WingRockMajorants();

/// The level-3 table majorant on its own.
SmoothMap WingRockLevel3R();

}  // namespace dads
