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
 * @file jet.h
 * @brief Truncated multivariate Taylor polynomials ("jets").
 *
 * A Jet of order q in N variables stores every Taylor coefficient
 * f^(alpha)(p) / alpha! with |alpha| <= q, densely, in graded lexicographic
 * order: degree 0 first, then degree 1 as (1,0,..), (0,1,..), ..., then
 * degree 2 as (2,0,..), (1,1,..), ... .  Arithmetic truncates at q, so the
 * result of composing smooth operations is the exact order-q Taylor
 * expansion of the composed map.
 *
 * Usage:
 * @code
 * auto x = dads::lift(2.0, 0, 1, 2);   // coordinate x at 2, order 2
 * auto y = x * x;                      // {4, 4, 1}
 * y.partial(0);                        // 4 = d(x^2)/dx
 * @endcode
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace dads {

using MultiIndex = std::vector<int>;

/// Immutable coefficient layout shared by every Jet with the same
/// (n_vars, order).  Instances are cached for the process lifetime.
class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static const JetLayout& Get(int n_vars, int order);

  int n_vars() const { return n_vars_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& multi_index(std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// Position of `alpha`, or -1 when |alpha| exceeds the order.
  std::ptrdiff_t index_of(const MultiIndex& alpha) const;
  /// Position of the degree-1 monomial of variable `var`.
  std::size_t linear_index(int var) const { return 1 + var; }

  /// All (i, j, k) with alpha_i + alpha_j = alpha_k.
  const std::vector<ProductTerm>& product_terms() const { return products_; }

 private:
  JetLayout(int n_vars, int order);

  int n_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::map<MultiIndex, std::uint32_t> position_;
  std::vector<ProductTerm> products_;
};

class Jet {
 public:
  /// Order-0 jet in one variable with value 0.
  Jet();
  Jet(const JetLayout& layout, double value);

  static Jet Constant(double value, int n_vars, int order);
  static Jet Variable(double value, int var_index, int n_vars, int order);

  const JetLayout& layout() const { return *layout_; }
  int order() const { return layout_->order(); }
  int n_vars() const { return layout_->n_vars(); }
  bool SameShape(const Jet& other) const { return layout_ == other.layout_; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> mutable_coeffs() { return coeffs_; }
  double coeff(const MultiIndex& alpha) const;

  /// First partial derivative with respect to `var` at the expansion point.
  double partial(int var) const;
  /// Jet of d/d(var) of order order()-1 (requires order() >= 1).
  Jet Derivative(int var) const;
  /// Drops all terms of degree greater than `order`.
  Jet Truncated(int order) const;
  /// Same jet with every non-constant coefficient zeroed.
  Jet ConstantPart() const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  Jet operator-() const;

 private:
  void RequireSameShape(const Jet& other) const;

  const JetLayout* layout_;
  std::vector<double> coeffs_;

  friend Jet operator*(const Jet& a, const Jet& b);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double b);
Jet operator-(Jet a, double b);
Jet operator*(Jet a, double b);
Jet operator/(Jet a, double b);
Jet operator+(double a, Jet b);
Jet operator-(double a, const Jet& b);
Jet operator*(double a, Jet b);
Jet operator/(double a, const Jet& b);

/// Coordinate function x_{var_index} expanded at `value`.
Jet lift(double value, int var_index, int n_vars, int order);
Jet jet_mul(const Jet& a, const Jet& b);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet inverse(const Jet& a);
Jet pow_int(const Jet& a, int p);
/// Positive part (a)^+.  Zero jet when value <= 0 (the kink takes the left
/// limit), `a` unchanged when value > 0.
Jet relu_plus(const Jet& a);

inline Jet jet_exp(const Jet& a) { return exp(a); }
inline Jet jet_pow_int(const Jet& a, int p) { return pow_int(a, p); }
inline Jet jet_relu_plus(const Jet& a) { return relu_plus(a); }

// Scalar counterparts so formulas templated on the scalar type compile for
// both double and Jet.
inline double relu_plus(double a) { return a > 0.0 ? a : 0.0; }
double pow_int(double a, int p);
inline double value_of(double a) { return a; }
inline double value_of(const Jet& a) { return a.value(); }

}  // namespace dads
