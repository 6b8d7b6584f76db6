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
 * @file smooth_map.h
 * @brief Smooth maps R^arity -> R^codim evaluable on jets.
 *
 * A SmoothMap wraps an evaluator that accepts `arity` jets of a common shape
 * and returns `codim` jets of the same shape.  Derivative maps are built by
 * variable extension: the inputs are re-expanded with one extra variable per
 * argument at order q+1, and the coefficients linear in the extra variables
 * are read back.  Nesting this construction gives exact higher derivatives
 * of composed maps, which is what recursive backstepping needs.
 */

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dads/jet.h"

namespace dads {

using JetVec = std::vector<Jet>;

/// Raised when a map is evaluated above its declared max_order.
class MaxOrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SmoothMap {
 public:
  using Evaluator = std::function<JetVec(const JetVec&)>;

  /// Default value is the scalar zero map of arity 1.
  SmoothMap();
  SmoothMap(int arity, int codim, int max_order, Evaluator evaluator,
            std::string name = "");

  int arity() const { return arity_; }
  int codim() const { return codim_; }
  int max_order() const { return max_order_; }
  const std::string& name() const { return name_; }

  /// Evaluates on jets.  All inputs must share one shape whose order does
  /// not exceed max_order().
  JetVec operator()(const JetVec& inputs) const;

  /// Plain numeric evaluation (order-0 jets).
  std::vector<double> Evaluate(std::span<const double> point) const;
  double EvaluateScalar(std::span<const double> point) const;

  /// Map returning [f_0..f_{codim-1}, df_0/dx_0..df_0/dx_{arity-1},
  /// df_1/dx_0, ...], i.e. codim * (1 + arity) outputs, with max_order one
  /// lower than this map.
  SmoothMap WithGradient() const;

  /// Same map declared with a smaller max_order.
  SmoothMap WithMaxOrder(int max_order) const;

  /// Same map with a different display name.
  SmoothMap Renamed(std::string name) const;

 private:
  int arity_;
  int codim_;
  int max_order_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::string name_;
};

/// Exact first-order partials of a scalar map at `point`.
std::vector<double> gradient(const SmoothMap& f, std::span<const double> point);

/// Jacobian rows (codim x arity) at `point`.
std::vector<std::vector<double>> jacobian(const SmoothMap& f,
                                          std::span<const double> point);

/// Lifts `point` to coordinate jets of the given order.
JetVec LiftPoint(std::span<const double> point, int order);

/// Constant map of the given arity with value `values`.
SmoothMap ConstantMap(int arity, std::vector<double> values,
                      std::string name = "");
/// Map returning input coordinate `index`.
SmoothMap CoordinateMap(int arity, int index, int max_order = 16);
/// Identity on R (a class-K-infinity function).
SmoothMap IdentityMap();
/// Componentwise composition: outer(inner(x)).
SmoothMap Compose(const SmoothMap& outer, const SmoothMap& inner);
/// Restricts arguments: result(x) = f(x[indices[0]], x[indices[1]], ...).
SmoothMap Reindex(const SmoothMap& f, int new_arity,
                  std::vector<int> indices);

/// Convenience: jet constant with the shape of `like`.
inline Jet ConstantLike(const Jet& like, double value) {
  return Jet(like.layout(), value);
}

}  // namespace dads
