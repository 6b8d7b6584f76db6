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

#include "dads/system_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dads {
namespace {

void RequireDim(std::size_t got, int want, const char* what) {
  if (static_cast<int>(got) != want) {
    throw std::invalid_argument(std::string("dimension mismatch for ") + what +
                                ": expected " + std::to_string(want) +
                                ", got " + std::to_string(got));
  }
}

void RequireMap(const SmoothMap& f, int arity, int codim, const std::string& what) {
  if (f.arity() != arity || f.codim() != codim) {
    throw std::invalid_argument(
        what + ": expected a map R^" + std::to_string(arity) + " -> R^" +
        std::to_string(codim) + ", got R^" + std::to_string(f.arity()) +
        " -> R^" + std::to_string(f.codim()));
  }
}

// Linear interpolation in a table with held end rows.
std::vector<double> Interpolate(const std::vector<double>& times,
                                const std::vector<std::vector<double>>& rows,
                                double t) {
  if (t <= times.front()) return rows.front();
  if (t >= times.back()) return rows.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  std::vector<double> out(rows[lo].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - w) * rows[lo][i] + w * rows[hi][i];
  }
  return out;
}

void ValidateTable(const std::vector<double>& times,
                   const std::vector<std::vector<double>>& rows) {
  if (times.empty() || times.size() != rows.size()) {
    throw std::invalid_argument("table needs one row per time, at least one");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("table times must be strictly increasing");
    }
    if (rows[i].size() != rows[0].size()) {
      throw std::invalid_argument("table rows must have equal length");
    }
  }
}

}  // namespace

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

ThetaSet::ThetaSet(int dim, Sampler sampler, Membership contains)
    : dim_(dim), sampler_(std::move(sampler)), contains_(std::move(contains)) {}

ThetaSet ThetaSet::Whole(int dim, double sample_box) {
  return ThetaSet(
      dim,
      [dim, sample_box](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-sample_box, sample_box);
        std::vector<double> th(dim);
        for (double& v : th) v = u(rng);
        return th;
      },
      [](std::span<const double>) { return true; });
}

ThetaSet ThetaSet::Ball(int dim, double radius) {
  return ThetaSet(
      dim,
      [dim, radius](std::mt19937_64& rng) {
        std::normal_distribution<double> n(0.0, 1.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> th(dim);
        for (double& v : th) v = n(rng);
        const double norm = Norm(th);
        const double r = radius * std::pow(u(rng), 1.0 / dim);
        for (double& v : th) v = norm > 0 ? v * r / norm : 0.0;
        return th;
      },
      [radius](std::span<const double> th) { return Norm(th) <= radius; });
}

std::vector<double> ThetaSet::Sample(std::mt19937_64& rng) const {
  if (!sampler_) return std::vector<double>(dim_, 0.0);
  return sampler_(rng);
}

bool ThetaSet::Contains(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dim_) return false;
  return !contains_ || contains_(theta);
}

std::vector<std::string> StrictFeedbackSystem::StateNames() const {
  std::vector<std::string> names;
  if (pure()) {
    for (int i = 0; i < num_levels(); ++i) {
      names.push_back("x" + std::to_string(i + 1));
    }
  } else {
    for (int i = 0; i < integrators; ++i) {
      names.push_back("x" + std::to_string(i + 1));
    }
    for (int j = 0; j < num_levels(); ++j) {
      names.push_back("y" + std::to_string(j + 1));
    }
  }
  return names;
}

void StrictFeedbackSystem::Validate() const {
  if (integrators < 0 || levels.empty()) {
    throw std::invalid_argument(name + ": need at least one cascade level");
  }
  if (theta_set.dim() != p) {
    throw std::invalid_argument(name + ": theta set dimension != p");
  }
  for (int j = 1; j <= num_levels(); ++j) {
    const CascadeLevel& lv = levels[j - 1];
    const int k = prefix_dim(j);
    const std::string tag = name + " level " + std::to_string(j);
    RequireMap(lv.h, k, 1, tag + " h");
    RequireMap(lv.g, k + p, 1, tag + " g");
    RequireMap(lv.phi, k, std::max(p, 1), tag + " phi");
    RequireMap(lv.alpha, k, std::max(l, 1), tag + " alpha");
    RequireMap(lv.eta, k, 1, tag + " eta");
    if (lv.mu) RequireMap(*lv.mu, k, 1, tag + " mu");
    const std::vector<double> origin(k, 0.0);
    if (lv.h.EvaluateScalar(origin) != 0.0) {
      throw std::invalid_argument(tag + ": h(0) must vanish");
    }
    for (double v : lv.phi.Evaluate(origin)) {
      if (v != 0.0) throw std::invalid_argument(tag + ": phi(0) must vanish");
    }
  }
  for (int idx : output_indices) {
    if (idx < 0 || idx >= state_dim()) {
      throw std::invalid_argument(name + ": output index out of range");
    }
  }
}

JetVec SubsystemDynamics(const StrictFeedbackSystem& sys, int dims,
                         const JetVec& state, const Jet& top_input,
                         std::span<const double> theta,
                         std::span<const double> d) {
  RequireDim(state.size(), dims, "state");
  RequireDim(theta.size(), sys.p, "theta");
  RequireDim(d.size(), sys.l, "d");
  if (dims < 1 || dims > sys.state_dim()) {
    throw std::invalid_argument("SubsystemDynamics: dims out of range");
  }
  const Jet& like = state[0];
  auto next = [&](int idx) -> const Jet& {
    return idx + 1 < dims ? state[idx + 1] : top_input;
  };
  JetVec out;
  out.reserve(dims);
  for (int i = 0; i < std::min(dims, sys.integrators); ++i) {
    out.push_back(next(i));
  }
  for (int idx = sys.integrators; idx < dims; ++idx) {
    const CascadeLevel& lv = sys.levels[idx - sys.integrators];
    JetVec prefix(state.begin(), state.begin() + idx + 1);
    JetVec with_theta = prefix;
    for (double th : theta) with_theta.push_back(ConstantLike(like, th));
    Jet v = lv.h(prefix)[0] + lv.g(with_theta)[0] * next(idx);
    if (sys.p > 0) {
      const JetVec phi = lv.phi(prefix);
      for (int k = 0; k < sys.p; ++k) v += phi[k] * theta[k];
    }
    if (sys.l > 0) {
      const JetVec alpha = lv.alpha(prefix);
      for (int k = 0; k < sys.l; ++k) v += alpha[k] * d[k];
    }
    out.push_back(std::move(v));
  }
  return out;
}

JetVec eval_dynamics(const StrictFeedbackSystem& sys, const JetVec& state,
                     const Jet& u, std::span<const double> theta,
                     std::span<const double> d) {
  return SubsystemDynamics(sys, sys.state_dim(), state, u, theta, d);
}

std::vector<double> eval_dynamics(const StrictFeedbackSystem& sys,
                                  std::span<const double> state, double u,
                                  std::span<const double> theta,
                                  std::span<const double> d) {
  RequireDim(state.size(), sys.state_dim(), "state");
  const JetVec jets = LiftPoint(state, 0);
  const JetVec out =
      eval_dynamics(sys, jets, ConstantLike(jets[0], u), theta, d);
  std::vector<double> values(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) values[i] = out[i].value();
  return values;
}

MajorantReport validate_majorants(const StrictFeedbackSystem& sys,
                                  int n_samples, double box_radius,
                                  std::uint64_t seed) {
  if (n_samples <= 0) {
    throw std::invalid_argument("validate_majorants: n_samples must be > 0");
  }
  MajorantReport report;
  report.worst_margin_low = std::numeric_limits<double>::infinity();
  report.worst_margin_high = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-box_radius, box_radius);
  for (int j = 1; j <= sys.num_levels(); ++j) {
    const CascadeLevel& lv = sys.levels[j - 1];
    const int k = sys.prefix_dim(j);
    for (int s = 0; s < n_samples; ++s) {
      std::vector<double> x(k);
      for (double& v : x) v = box(rng);
      const std::vector<double> theta = sys.theta_set.Sample(rng);
      std::vector<double> xt = x;
      xt.insert(xt.end(), theta.begin(), theta.end());
      const double g = lv.g.EvaluateScalar(xt);
      const double eta = lv.eta.EvaluateScalar(x);
      const double low = std::min(g - eta, eta);
      report.worst_margin_low = std::min(report.worst_margin_low, g - eta);
      if (low < 0.0 || !std::isfinite(low)) {
        report.violations.push_back({j, "eta", low, x, theta});
      }
      if (lv.mu) {
        const double mu = lv.mu->EvaluateScalar(x);
        const double high = mu * (1.0 + Norm(theta)) - std::abs(g);
        report.worst_margin_high = std::min(report.worst_margin_high, high);
        if (high < 0.0 || !(mu > 0.0)) {
          report.violations.push_back({j, "mu", high, x, theta});
        }
      }
    }
  }
  if (!std::isfinite(report.worst_margin_high)) report.worst_margin_high = 0.0;
  return report;
}

DisturbanceProfile DisturbanceProfile::Zero(int channels) {
  DisturbanceProfile p;
  p.kind_ = Kind::kZero;
  p.channels_ = channels;
  return p;
}

DisturbanceProfile DisturbanceProfile::SinusoidBank(
    std::vector<double> amplitude, std::vector<double> frequency) {
  if (amplitude.size() != frequency.size() || amplitude.empty()) {
    throw std::invalid_argument(
        "sinusoid bank: need one frequency per amplitude");
  }
  DisturbanceProfile p;
  p.kind_ = Kind::kSinusoidBank;
  p.channels_ = static_cast<int>(amplitude.size());
  p.amplitude_ = std::move(amplitude);
  p.frequency_ = std::move(frequency);
  return p;
}

DisturbanceProfile DisturbanceProfile::Vanishing(std::vector<double> amplitude,
                                                 std::vector<double> frequency,
                                                 double decay) {
  if (!(decay > 0.0)) {
    throw std::invalid_argument("vanishing disturbance: decay must be > 0");
  }
  DisturbanceProfile p = SinusoidBank(std::move(amplitude), std::move(frequency));
  p.kind_ = Kind::kVanishing;
  p.decay_ = decay;
  return p;
}

DisturbanceProfile DisturbanceProfile::CustomTable(
    std::vector<double> times, std::vector<std::vector<double>> rows) {
  ValidateTable(times, rows);
  DisturbanceProfile p;
  p.kind_ = Kind::kCustomTable;
  p.channels_ = static_cast<int>(rows[0].size());
  p.times_ = std::move(times);
  p.rows_ = std::move(rows);
  return p;
}

std::vector<double> DisturbanceProfile::Sample(double t) const {
  if (t < 0.0) {
    throw std::invalid_argument("disturbance sampled at negative time");
  }
  switch (kind_) {
    case Kind::kZero:
      return std::vector<double>(channels_, 0.0);
    case Kind::kSinusoidBank:
    case Kind::kVanishing: {
      const double env = kind_ == Kind::kVanishing ? std::exp(-decay_ * t) : 1.0;
      std::vector<double> d(channels_);
      for (int i = 0; i < channels_; ++i) {
        d[i] = amplitude_[i] * std::cos(frequency_[i] * t) * env;
      }
      return d;
    }
    case Kind::kCustomTable:
      return Interpolate(times_, rows_, t);
  }
  return {};
}

std::vector<double> sample_disturbance(const DisturbanceProfile& profile,
                                       double t) {
  return profile.Sample(t);
}

ParameterSignal ParameterSignal::Constant(std::vector<double> theta) {
  ParameterSignal s;
  s.kind_ = Kind::kConstant;
  s.times_ = {0.0};
  s.rows_ = {std::move(theta)};
  return s;
}

ParameterSignal ParameterSignal::Table(std::vector<double> times,
                                       std::vector<std::vector<double>> rows) {
  ValidateTable(times, rows);
  ParameterSignal s;
  s.kind_ = Kind::kTable;
  s.times_ = std::move(times);
  s.rows_ = std::move(rows);
  return s;
}

int ParameterSignal::dim() const {
  return rows_.empty() ? 0 : static_cast<int>(rows_[0].size());
}

std::vector<double> ParameterSignal::Value(double t) const {
  if (rows_.empty()) return {};
  if (kind_ == Kind::kConstant) return rows_[0];
  return Interpolate(times_, rows_, t);
}

void ParameterSignal::CheckAdmissible(const ThetaSet& set) const {
  for (const auto& row : rows_) {
    if (!set.Contains(row)) {
      throw std::invalid_argument("parameter value outside the admissible set");
    }
  }
}

}  // namespace dads
