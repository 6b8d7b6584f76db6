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

#include "dads/smooth_map.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>

namespace dads {
namespace {

// Index tables relating a small layout (n vars, order q) to the extended
// layout (n + extra vars, order q + 1).
struct ExtensionTables {
  const JetLayout* small;
  const JetLayout* big;
  // embed[i]: big index of small multi-index i padded with zeros.
  std::vector<std::uint32_t> embed;
  // linear[j][i]: big index of (small multi-index i, e_j).
  std::vector<std::vector<std::uint32_t>> linear;
};

const ExtensionTables& GetExtension(int n_vars, int extra, int order) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<ExtensionTables>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_vars, extra, order}];
  if (slot) return *slot;
  auto tables = std::make_unique<ExtensionTables>();
  tables->small = &JetLayout::Get(n_vars, order);
  tables->big = &JetLayout::Get(n_vars + extra, order + 1);
  const std::size_t size = tables->small->size();
  tables->embed.resize(size);
  tables->linear.assign(extra, std::vector<std::uint32_t>(size));
  MultiIndex padded(n_vars + extra, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const MultiIndex& alpha = tables->small->multi_index(i);
    std::fill(padded.begin(), padded.end(), 0);
    std::copy(alpha.begin(), alpha.end(), padded.begin());
    tables->embed[i] =
        static_cast<std::uint32_t>(tables->big->index_of(padded));
    for (int j = 0; j < extra; ++j) {
      padded[n_vars + j] = 1;
      tables->linear[j][i] =
          static_cast<std::uint32_t>(tables->big->index_of(padded));
      padded[n_vars + j] = 0;
    }
  }
  slot = std::move(tables);
  return *slot;
}

void RequireUniformShape(const JetVec& inputs, const std::string& who) {
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    if (!inputs[i].SameShape(inputs[0])) {
      throw std::invalid_argument(who + ": inputs have mixed jet shapes");
    }
  }
}

}  // namespace

SmoothMap::SmoothMap()
    : SmoothMap(1, 1, 64,
                [](const JetVec& in) { return JetVec{ConstantLike(in[0], 0)}; },
                "zero") {}

SmoothMap::SmoothMap(int arity, int codim, int max_order, Evaluator evaluator,
                     std::string name)
    : arity_(arity),
      codim_(codim),
      max_order_(max_order),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      name_(std::move(name)) {
  if (arity < 1 || codim < 1 || max_order < 0) {
    throw std::invalid_argument("SmoothMap: need arity >= 1, codim >= 1 and "
                                "max_order >= 0");
  }
}

JetVec SmoothMap::operator()(const JetVec& inputs) const {
  const std::string who = name_.empty() ? "SmoothMap" : name_;
  if (static_cast<int>(inputs.size()) != arity_) {
    throw std::invalid_argument(who + ": expected " + std::to_string(arity_) +
                                " inputs, got " +
                                std::to_string(inputs.size()));
  }
  RequireUniformShape(inputs, who);
  if (inputs[0].order() > max_order_) {
    throw MaxOrderError(who + ": requested jet order " +
                        std::to_string(inputs[0].order()) +
                        " exceeds declared max_order " +
                        std::to_string(max_order_));
  }
  JetVec out = (*evaluator_)(inputs);
  if (static_cast<int>(out.size()) != codim_) {
    throw std::logic_error(who + ": evaluator returned " +
                           std::to_string(out.size()) + " outputs, expected " +
                           std::to_string(codim_));
  }
  return out;
}

std::vector<double> SmoothMap::Evaluate(std::span<const double> point) const {
  JetVec out = (*this)(LiftPoint(point, 0));
  std::vector<double> values(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) values[i] = out[i].value();
  return values;
}

double SmoothMap::EvaluateScalar(std::span<const double> point) const {
  if (codim_ != 1) {
    throw std::invalid_argument(name_ + ": EvaluateScalar on a vector map");
  }
  return Evaluate(point)[0];
}

SmoothMap SmoothMap::WithGradient() const {
  if (max_order_ < 1) {
    throw MaxOrderError(name_ + ": cannot differentiate a max_order-0 map");
  }
  const SmoothMap self = *this;
  const int arity = arity_;
  const int codim = codim_;
  auto eval = [self, arity, codim](const JetVec& in) {
    const int n_vars = in[0].n_vars();
    const int order = in[0].order();
    const ExtensionTables& ext = GetExtension(n_vars, arity, order);
    JetVec extended;
    extended.reserve(arity);
    for (int i = 0; i < arity; ++i) {
      Jet e(*ext.big, 0.0);
      auto src = in[i].coeffs();
      auto dst = e.mutable_coeffs();
      for (std::size_t k = 0; k < src.size(); ++k) dst[ext.embed[k]] = src[k];
      dst[ext.big->linear_index(n_vars + i)] += 1.0;
      extended.push_back(std::move(e));
    }
    const JetVec raw = self(extended);
    JetVec out;
    out.reserve(codim * (1 + arity));
    for (int c = 0; c < codim; ++c) {
      Jet v(*ext.small, 0.0);
      auto src = raw[c].coeffs();
      auto dst = v.mutable_coeffs();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[ext.embed[k]];
      out.push_back(std::move(v));
    }
    for (int c = 0; c < codim; ++c) {
      auto src = raw[c].coeffs();
      for (int j = 0; j < arity; ++j) {
        Jet d(*ext.small, 0.0);
        auto dst = d.mutable_coeffs();
        const auto& table = ext.linear[j];
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[table[k]];
        out.push_back(std::move(d));
      }
    }
    return out;
  };
  return SmoothMap(arity_, codim_ * (1 + arity_), max_order_ - 1, eval,
                   name_.empty() ? "" : "grad " + name_);
}

SmoothMap SmoothMap::WithMaxOrder(int max_order) const {
  SmoothMap out = *this;
  out.max_order_ = max_order;
  return out;
}

SmoothMap SmoothMap::Renamed(std::string name) const {
  SmoothMap out = *this;
  out.name_ = std::move(name);
  return out;
}

JetVec LiftPoint(std::span<const double> point, int order) {
  if (point.empty()) throw std::invalid_argument("LiftPoint: empty point");
  JetVec out;
  out.reserve(point.size());
  const int n = static_cast<int>(point.size());
  for (int i = 0; i < n; ++i) {
    if (order == 0) {
      out.push_back(Jet::Constant(point[i], n, 0));
    } else {
      out.push_back(lift(point[i], i, n, order));
    }
  }
  return out;
}

std::vector<double> gradient(const SmoothMap& f, std::span<const double> point) {
  if (f.codim() != 1) {
    throw std::invalid_argument("gradient: map is not scalar-valued");
  }
  return jacobian(f, point)[0];
}

std::vector<std::vector<double>> jacobian(const SmoothMap& f,
                                          std::span<const double> point) {
  if (static_cast<int>(point.size()) != f.arity()) {
    throw std::invalid_argument("jacobian: point has " +
                                std::to_string(point.size()) +
                                " entries, map arity is " +
                                std::to_string(f.arity()));
  }
  const JetVec out = f(LiftPoint(point, 1));
  std::vector<std::vector<double>> rows(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    rows[i].resize(point.size());
    for (int j = 0; j < f.arity(); ++j) rows[i][j] = out[i].partial(j);
  }
  return rows;
}

SmoothMap ConstantMap(int arity, std::vector<double> values, std::string name) {
  const int codim = static_cast<int>(values.size());
  return SmoothMap(
      arity, codim, 64,
      [values](const JetVec& in) {
        JetVec out;
        out.reserve(values.size());
        for (double v : values) out.push_back(ConstantLike(in[0], v));
        return out;
      },
      std::move(name));
}

SmoothMap CoordinateMap(int arity, int index, int max_order) {
  if (index < 0 || index >= arity) {
    throw std::invalid_argument("CoordinateMap: index out of range");
  }
  return SmoothMap(
      arity, 1, max_order,
      [index](const JetVec& in) { return JetVec{in[index]}; },
      "x" + std::to_string(index + 1));
}

SmoothMap IdentityMap() { return CoordinateMap(1, 0, 64).Renamed("id"); }

SmoothMap Compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (outer.arity() != inner.codim()) {
    throw std::invalid_argument("Compose: arity/codim mismatch");
  }
  const int max_order = std::min(outer.max_order(), inner.max_order());
  return SmoothMap(
      inner.arity(), outer.codim(), max_order,
      [outer, inner](const JetVec& in) { return outer(inner(in)); },
      outer.name() + "(" + inner.name() + ")");
}

SmoothMap Reindex(const SmoothMap& f, int new_arity, std::vector<int> indices) {
  if (static_cast<int>(indices.size()) != f.arity()) {
    throw std::invalid_argument("Reindex: need one index per argument");
  }
  for (int i : indices) {
    if (i < 0 || i >= new_arity) {
      throw std::invalid_argument("Reindex: index out of range");
    }
  }
  return SmoothMap(
      new_arity, f.codim(), f.max_order(),
      [f, indices](const JetVec& in) {
        JetVec picked;
        picked.reserve(indices.size());
        for (int i : indices) picked.push_back(in[i]);
        return f(picked);
      },
      f.name());
}

}  // namespace dads
