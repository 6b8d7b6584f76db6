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

#include "dads/jet.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace dads {
namespace {

// Appends every multi-index of `n_vars` entries and total degree `degree` in
// lexicographically descending order.
void AppendDegree(int n_vars, int degree, MultiIndex* prefix,
                  std::vector<MultiIndex>* out) {
  const int pos = static_cast<int>(prefix->size());
  if (pos == n_vars - 1) {
    prefix->push_back(degree);
    out->push_back(*prefix);
    prefix->pop_back();
    return;
  }
  for (int first = degree; first >= 0; --first) {
    prefix->push_back(first);
    AppendDegree(n_vars, degree - first, prefix, out);
    prefix->pop_back();
  }
}

// Taylor composition f(a) = sum_k derivs[k] / k! * h^k with h = a - a(0).
// `scaled` holds derivs[k] / k!.
Jet ComposeUnivariate(const Jet& a, const std::vector<double>& scaled) {
  const int q = a.order();
  Jet h = a;
  h.mutable_coeffs()[0] = 0.0;
  Jet result(a.layout(), scaled[q]);
  for (int k = q - 1; k >= 0; --k) {
    result = result * h;
    result.mutable_coeffs()[0] += scaled[k];
  }
  return result;
}

}  // namespace

JetLayout::JetLayout(int n_vars, int order) : n_vars_(n_vars), order_(order) {
  MultiIndex prefix;
  for (int d = 0; d <= order; ++d) {
    AppendDegree(n_vars, d, &prefix, &indices_);
  }
  degrees_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    int deg = 0;
    for (int v : indices_[i]) deg += v;
    degrees_.push_back(deg);
    position_.emplace(indices_[i], static_cast<std::uint32_t>(i));
  }
  MultiIndex sum(n_vars);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) {
        // Indices are sorted by degree, so no later j fits either.
        break;
      }
      for (int v = 0; v < n_vars; ++v) {
        sum[v] = indices_[i][v] + indices_[j][v];
      }
      products_.push_back({static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j), position_.at(sum)});
    }
  }
}

const JetLayout& JetLayout::Get(int n_vars, int order) {
  if (n_vars < 1 || order < 0) {
    throw std::invalid_argument("JetLayout: need n_vars >= 1 and order >= 0");
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_vars, order}];
  if (!slot) slot.reset(new JetLayout(n_vars, order));
  return *slot;
}

std::ptrdiff_t JetLayout::index_of(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != n_vars_) {
    throw std::invalid_argument("JetLayout::index_of: wrong multi-index size");
  }
  int deg = 0;
  for (int v : alpha) {
    if (v < 0) throw std::invalid_argument("negative multi-index entry");
    deg += v;
  }
  if (deg > order_) return -1;
  return static_cast<std::ptrdiff_t>(position_.at(alpha));
}

Jet::Jet() : Jet(JetLayout::Get(1, 0), 0.0) {}

Jet::Jet(const JetLayout& layout, double value)
    : layout_(&layout), coeffs_(layout.size(), 0.0) {
  coeffs_[0] = value;
}

Jet Jet::Constant(double value, int n_vars, int order) {
  return Jet(JetLayout::Get(n_vars, order), value);
}

Jet Jet::Variable(double value, int var_index, int n_vars, int order) {
  return lift(value, var_index, n_vars, order);
}

double Jet::coeff(const MultiIndex& alpha) const {
  const std::ptrdiff_t i = layout_->index_of(alpha);
  return i < 0 ? 0.0 : coeffs_[i];
}

double Jet::partial(int var) const {
  if (var < 0 || var >= n_vars()) {
    throw std::out_of_range("Jet::partial: variable index out of range");
  }
  if (order() < 1) {
    throw std::logic_error("Jet::partial: order-0 jet carries no derivatives");
  }
  return coeffs_[layout_->linear_index(var)];
}

Jet Jet::Derivative(int var) const {
  if (var < 0 || var >= n_vars()) {
    throw std::out_of_range("Jet::Derivative: variable index out of range");
  }
  if (order() < 1) {
    throw std::logic_error("Jet::Derivative: order-0 jet");
  }
  const JetLayout& lower = JetLayout::Get(n_vars(), order() - 1);
  Jet out(lower, 0.0);
  MultiIndex raised;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    raised = lower.multi_index(i);
    raised[var] += 1;
    out.coeffs_[i] = raised[var] * coeffs_[layout_->index_of(raised)];
  }
  return out;
}

Jet Jet::Truncated(int new_order) const {
  if (new_order < 0 || new_order > order()) {
    throw std::invalid_argument("Jet::Truncated: order out of range");
  }
  const JetLayout& lower = JetLayout::Get(n_vars(), new_order);
  Jet out(lower, 0.0);
  // Graded ordering makes the lower-order layout a prefix.
  std::copy(coeffs_.begin(), coeffs_.begin() + lower.size(),
            out.coeffs_.begin());
  return out;
}

Jet Jet::ConstantPart() const { return Jet(*layout_, value()); }

void Jet::RequireSameShape(const Jet& other) const {
  if (layout_ != other.layout_) {
    throw std::invalid_argument(
        "Jet shape mismatch: (" + std::to_string(n_vars()) + " vars, order " +
        std::to_string(order()) + ") vs (" + std::to_string(other.n_vars()) +
        " vars, order " + std::to_string(other.order()) + ")");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  RequireSameShape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  RequireSameShape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  *this = *this / rhs;
  return *this;
}

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  for (double& c : coeffs_) c /= rhs;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  a.RequireSameShape(b);
  Jet out(*a.layout_, 0.0);
  if (a.layout_->size() == 1) {
    out.coeffs_[0] = a.coeffs_[0] * b.coeffs_[0];
    return out;
  }
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* po = out.coeffs_.data();
  for (const auto& term : a.layout_->product_terms()) {
    po[term.out] += pa[term.lhs] * pb[term.rhs];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet out = a * inverse(b);
  out.mutable_coeffs()[0] = a.value() / b.value();
  return out;
}
Jet operator+(Jet a, double b) { return a += b; }
Jet operator-(Jet a, double b) { return a -= b; }
Jet operator*(Jet a, double b) { return a *= b; }
Jet operator/(Jet a, double b) { return a /= b; }
Jet operator+(double a, Jet b) { return b += a; }
Jet operator-(double a, const Jet& b) { return (-b) += a; }
Jet operator*(double a, Jet b) { return b *= a; }
Jet operator/(double a, const Jet& b) {
  Jet out = inverse(b) *= a;
  out.mutable_coeffs()[0] = a / b.value();
  return out;
}

Jet lift(double value, int var_index, int n_vars, int order) {
  if (n_vars < 1 || order < 0) {
    throw std::invalid_argument("lift: need n_vars >= 1 and order >= 0");
  }
  if (var_index < 0 || var_index >= n_vars) {
    throw std::invalid_argument("lift: var_index " + std::to_string(var_index) +
                                " out of range for " + std::to_string(n_vars) +
                                " variables");
  }
  const JetLayout& layout = JetLayout::Get(n_vars, order);
  Jet out(layout, value);
  if (order >= 1) out.mutable_coeffs()[layout.linear_index(var_index)] = 1.0;
  return out;
}

Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }

Jet exp(const Jet& a) {
  const int q = a.order();
  const double e = std::exp(a.value());
  std::vector<double> scaled(q + 1);
  double fact = 1.0;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) fact *= k;
    scaled[k] = e / fact;
  }
  return ComposeUnivariate(a, scaled);
}

Jet log(const Jet& a) {
  const int q = a.order();
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("log: non-positive jet value");
  // d^k/dv^k log v / k! = (-1)^(k-1) / (k v^k).
  std::vector<double> scaled(q + 1);
  scaled[0] = std::log(v);
  double vk = 1.0;
  for (int k = 1; k <= q; ++k) {
    vk *= v;
    scaled[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * vk);
  }
  return ComposeUnivariate(a, scaled);
}

Jet sin(const Jet& a) {
  const int q = a.order();
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> scaled(q + 1);
  double fact = 1.0;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) fact *= k;
    scaled[k] = cycle[k % 4] / fact;
  }
  return ComposeUnivariate(a, scaled);
}

Jet cos(const Jet& a) {
  const int q = a.order();
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> scaled(q + 1);
  double fact = 1.0;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) fact *= k;
    scaled[k] = cycle[k % 4] / fact;
  }
  return ComposeUnivariate(a, scaled);
}

Jet sqrt(const Jet& a) {
  const int q = a.order();
  const double v = a.value();
  if (v < 0.0 || (v == 0.0 && q > 0)) {
    throw std::domain_error("sqrt: jet value must be positive");
  }
  // Generalized binomial coefficients C(1/2, k) v^(1/2 - k).
  std::vector<double> scaled(q + 1);
  double binom = 1.0;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) binom *= (0.5 - (k - 1)) / k;
    scaled[k] = binom * std::pow(v, 0.5 - k);
  }
  return ComposeUnivariate(a, scaled);
}

Jet inverse(const Jet& a) {
  const int q = a.order();
  const double v = a.value();
  if (v == 0.0) throw std::domain_error("inverse: zero jet value");
  std::vector<double> scaled(q + 1);
  double term = 1.0 / v;
  for (int k = 0; k <= q; ++k) {
    scaled[k] = term;
    term *= -1.0 / v;
  }
  return ComposeUnivariate(a, scaled);
}

Jet pow_int(const Jet& a, int p) {
  if (p < 0) return inverse(pow_int(a, -p));
  Jet result(a.layout(), 1.0);
  Jet base = a;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return result;
}

double pow_int(double a, int p) {
  if (p < 0) return 1.0 / pow_int(a, -p);
  double result = 1.0;
  double base = a;
  while (p > 0) {
    if (p & 1) result *= base;
    p >>= 1;
    if (p > 0) base *= base;
  }
  return result;
}

Jet relu_plus(const Jet& a) {
  if (a.value() > 0.0) return a;
  return Jet(a.layout(), 0.0);
}

}  // namespace dads
