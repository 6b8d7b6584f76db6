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

#include "dads/verifier.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dads {
namespace {

double SampleScale(int i, double box) {
  const double scales[] = {1e-3, 0.1, 1.0, box};
  return std::min(scales[i % 4], box);
}

std::vector<double> Concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

CheckReport NewReport(std::string name, double tol) {
  CheckReport r;
  r.name = std::move(name);
  r.tolerance = tol;
  r.worst_margin = std::numeric_limits<double>::infinity();
  return r;
}

// Index of the first log entry inside the tail window.
std::size_t TailBegin(const TrajectoryLog& log, double tail_fraction) {
  const double t0 = log.times.front(), t1 = log.times.back();
  const double start = t1 - tail_fraction * (t1 - t0);
  const auto it = std::lower_bound(log.times.begin(), log.times.end(),
                                   start - 1e-12 * (1.0 + std::abs(start)));
  return static_cast<std::size_t>(it - log.times.begin());
}

void RequireLog(const TrajectoryLog& log, const char* what) {
  if (log.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": log needs two entries");
  }
}

double Sup(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  double s = -std::numeric_limits<double>::infinity();
  for (std::size_t i = begin; i < end; ++i) s = std::max(s, v[i]);
  return s;
}

}  // namespace

CheckReport check_dissipation(const SmoothMap& V, const VectorFieldFn& rhs,
                              const BoundFn& bound,
                              const DissipationSampler& sampler, int n,
                              double tol, const DissipationOptions& options) {
  CheckReport report = NewReport(options.name, tol);
  std::mt19937_64 rng(options.seed);
  int skipped = 0;
  for (int i = 0; i < n; ++i) {
    const DissipationSample s = sampler(rng, i);
    const std::vector<double> point = Concat(s.state, s.theta);
    if (static_cast<int>(point.size()) != V.arity()) {
      throw std::invalid_argument("check_dissipation: V arity mismatch");
    }
    const JetVec vj = V(LiftPoint(point, 1));
    const double v = vj[0].value();
    if (!std::isnan(options.kink_level) &&
        std::abs(v - options.kink_level) < kKinkBand) {
      ++skipped;
      continue;
    }
    const std::vector<double> f = rhs(s.state, s.theta, s.d);
    double lhs = 0.0;
    for (std::size_t k = 0; k < s.state.size(); ++k) {
      lhs += vj[0].partial(static_cast<int>(k)) * f[k];
    }
    const double b = bound(s.state, s.theta, s.d, v);
    double m = (b - lhs) / (1.0 + std::abs(lhs) + std::abs(b));
    if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
    ++report.n_samples;
    if (m < report.worst_margin) {
      report.worst_margin = m;
      report.witness = point;
      report.witness.insert(report.witness.end(), s.d.begin(), s.d.end());
    }
  }
  std::ostringstream detail;
  detail << "margin (bound - lhs) / (1 + |lhs| + |bound|); " << skipped
         << " samples in the kink band skipped";
  report.detail = detail.str();
  report.Finalize();
  return report;
}

DissipationSampler BoxSampler(int state_dim, int theta_dim, int d_dim,
                              const SampleBox& box, std::vector<int> z_indices,
                              std::vector<int> theta_like_indices) {
  return [=](std::mt19937_64& rng, int index) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = SampleScale(index, box.x);
    DissipationSample s;
    s.state.resize(state_dim);
    for (int k = 0; k < state_dim; ++k) {
      double r = scale;
      if (std::find(z_indices.begin(), z_indices.end(), k) != z_indices.end()) {
        r = box.z;
      } else if (std::find(theta_like_indices.begin(), theta_like_indices.end(),
                           k) != theta_like_indices.end()) {
        r = box.theta;
      }
      s.state[k] = r * unit(rng);
    }
    // Exogenous inputs cycle through zero, small and full size so that the
    // undisturbed decay term is exercised on its own.
    const double ex[] = {0.0, 0.01, 1.0};
    const double ex_scale = ex[(index / 4) % 3];
    s.theta.resize(theta_dim);
    for (double& t : s.theta) t = ex_scale * box.theta * unit(rng);
    s.d.resize(d_dim);
    for (double& d : s.d) d = ex_scale * box.d * unit(rng);
    return s;
  };
}

SmoothMap WingRockLyapunovMap(const WingRockDadsController& ctrl) {
  return SmoothMap(
      8, 1, 16,
      [ctrl](const JetVec& in) {
        const auto w = wingrock_intermediates(in[0], in[1], in[2], in[3],
                                              ctrl.c(), ctrl.K());
        return JetVec{w.V};
      },
      "V_wingrock");
}

SmoothMap SigmaModLyapunovMap(const SigmaModController& ctrl) {
  return SmoothMap(
      11, 1, 16,
      [ctrl](const JetVec& in) {
        const std::array<Jet, 4> th{in[3], in[4], in[5], in[6]};
        const auto o = sigma_mod_control(in[0], in[1], in[2], th, ctrl);
        Jet W = 0.5 * (in[0] * in[0]) + 0.5 * (o.zeta * o.zeta) +
                0.5 * (o.chi * o.chi);
        for (int i = 0; i < 4; ++i) {
          const Jet e = th[i] - in[7 + i];
          W = W + (e * e) / (2.0 * ctrl.gamma());
        }
        return JetVec{W};
      },
      "W_sigma_mod");
}

CheckReport check_wingrock_dissipation(const WingRockDadsController& ctrl,
                                       int n, double tol, std::uint64_t seed,
                                       const SampleBox& box) {
  auto loop = std::make_shared<WingRockDadsLoop>(ctrl);
  const double c = ctrl.c();
  DissipationOptions opts;
  opts.name = "wingrock dissipation";
  opts.seed = seed;
  opts.kink_level = ctrl.eps();
  return check_dissipation(
      WingRockLyapunovMap(ctrl),
      [loop](auto s, auto th, auto d) { return loop->Rhs(s, th, d); },
      [c](std::span<const double> s, std::span<const double> th,
          std::span<const double> d, double V) {
        const double ez = std::exp(s[3]);
        const double excess = relu_plus(Norm(th) - 1.0 - ez);
        const double dn = Norm(d);
        return -c * V + 2.0 * (dn * dn + excess * excess) / (1.0 + ez);
      },
      BoxSampler(4, 4, 2, box, {3}), n, tol, opts);
}

CheckReport check_sigma_mod_dissipation(const SigmaModController& ctrl, int n,
                                        double tol, std::uint64_t seed,
                                        const SampleBox& box) {
  auto loop = std::make_shared<SigmaModLoop>(ctrl);
  DissipationOptions opts;
  opts.name = "sigma-mod dissipation";
  opts.seed = seed;
  return check_dissipation(
      SigmaModLyapunovMap(ctrl),
      [loop](auto s, auto th, auto d) { return loop->Rhs(s, th, d); },
      [ctrl](std::span<const double> s, std::span<const double> th,
             std::span<const double> d, double) {
        const std::array<double, 4> hat{s[3], s[4], s[5], s[6]};
        const auto o = sigma_mod_control(s[0], s[1], s[2], hat, ctrl);
        const double k = ctrl.sigma() / (2.0 * ctrl.gamma());
        double err = 0.0;
        for (int i = 0; i < 4; ++i) err += (hat[i] - th[i]) * (hat[i] - th[i]);
        const double tn = Norm(th), dn = Norm(d);
        return -ctrl.c() * (s[0] * s[0] + o.zeta * o.zeta + o.chi * o.chi) -
               k * err + 0.5 * dn * dn + k * tn * tn;
      },
      BoxSampler(7, 4, 2, box, {}, {3, 4, 5, 6}), n, tol, opts);
}

double AttractivityRadius(double c, double eps) {
  return (std::sqrt(c * c + 1.0) + c) * std::sqrt(2.0 * eps);
}

std::vector<CheckReport> check_trajectory_estimates(const TrajectoryLog& log,
                                                    const DadsGains& gains,
                                                    double V0,
                                                    const SignalBounds& bounds,
                                                    double envelope_tol) {
  RequireLog(log, "check_trajectory_estimates");
  if (log.ctrl_states.front().size() != 1) {
    throw std::invalid_argument(
        "check_trajectory_estimates: log has no scalar controller state z");
  }
  const double c = gains.c, a = gains.a;
  const double z0 = log.ctrl_states.front()[0];
  const std::vector<double> ez0{std::exp(z0)};
  const double excess =
      relu_plus(bounds.theta_sup - gains.b - gains.lambda.EvaluateScalar(ez0));
  const double constant = a * (bounds.d_sup * bounds.d_sup + excess * excess) /
                          (c * (1.0 + gains.kappa.EvaluateScalar(ez0)));
  std::vector<CheckReport> out;

  CheckReport env = NewReport("envelope", 0.0);
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double t = log.times[i] - log.times.front();
    const double m =
        std::exp(-c * t) * V0 + constant + envelope_tol - log.V[i];
    ++env.n_samples;
    if (!(m >= env.worst_margin)) {
      env.worst_margin = std::isfinite(m) ? m : -std::numeric_limits<double>::infinity();
      env.witness = {log.times[i], log.V[i]};
    }
  }
  std::ostringstream ed;
  ed << std::setprecision(10) << "V0 " << V0 << ", constant term " << constant
     << ", |d|_inf " << bounds.d_sup << ", |theta|_inf " << bounds.theta_sup
     << ", e^z0 " << ez0[0] << ", added tolerance " << envelope_tol;
  env.detail = ed.str();
  env.Finalize();
  out.push_back(env);

  CheckReport mono = NewReport("z-monotone", 1e-12);
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double z = log.ctrl_states[i][0];
    const double m = i == 0 ? 0.0 : z - log.ctrl_states[i - 1][0];
    ++mono.n_samples;
    if (!std::isfinite(z) || !(m >= mono.worst_margin)) {
      mono.worst_margin =
          std::isfinite(z) ? m : -std::numeric_limits<double>::infinity();
      mono.witness = {log.times[i], z};
    }
  }
  std::ostringstream md;
  md << std::setprecision(10) << "z0 " << z0 << ", z(t_end) "
     << log.ctrl_states.back()[0];
  mono.detail = md.str();
  mono.Finalize();
  out.push_back(mono);

  const std::size_t tail = TailBegin(log, kTailFraction);
  const double v_bound = gains.eps_dz * (1.0 + kTailSlack);
  CheckReport tv = NewReport("tail-V", 0.0);
  tv.n_samples = static_cast<int>(log.size() - tail);
  const double v_sup = Sup(log.V, tail, log.size());
  tv.worst_margin = v_bound - v_sup;
  tv.witness = {v_sup};
  std::ostringstream vd;
  vd << std::setprecision(10) << "sup V over final " << kTailFraction * 100
     << "% = " << v_sup << ", bound eps_dz (1 + " << kTailSlack
     << ") = " << v_bound;
  tv.detail = vd.str();
  tv.Finalize();
  out.push_back(tv);

  const double radius = AttractivityRadius(c, gains.eps_dz);
  const double y_bound = radius * (1.0 + kTailSlack);
  CheckReport ty = NewReport("tail-Y", 0.0);
  ty.n_samples = static_cast<int>(log.size() - tail);
  const double y_sup = Sup(log.output_norm, tail, log.size());
  ty.worst_margin = y_bound - y_sup;
  ty.witness = {y_sup};
  std::ostringstream yd;
  yd << std::setprecision(10) << "sup |Y| over final " << kTailFraction * 100
     << "% = " << y_sup << ", radius " << radius << ", bound " << y_bound;
  ty.detail = yd.str();
  ty.Finalize();
  out.push_back(ty);
  return out;
}

std::vector<CheckReport> check_trajectory_estimates(const TrajectoryLog& log,
                                                    const DadsGains& gains,
                                                    double V0) {
  return check_trajectory_estimates(log, gains, V0,
                                    SignalBounds{log.d_sup, log.theta_sup});
}

double GainTailGrowth(const TrajectoryLog& log, double tail_fraction) {
  RequireLog(log, "GainTailGrowth");
  const std::size_t tail = std::max<std::size_t>(TailBegin(log, tail_fraction), 1);
  const double before = Sup(log.gain, 0, tail);
  const double whole = std::max(before, Sup(log.gain, tail, log.size()));
  if (before <= 0.0) return whole > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return whole / before - 1.0;
}

double GainHalfHorizonRatio(const TrajectoryLog& log) {
  RequireLog(log, "GainHalfHorizonRatio");
  const double half = 0.5 * (log.times.front() + log.times.back());
  const auto it = std::lower_bound(log.times.begin(), log.times.end(),
                                   half - 1e-12 * (1.0 + half));
  const double mid = log.gain[it - log.times.begin()];
  return log.gain.back() / mid;
}

CheckReport check_drift_contrast(const TrajectoryLog& dads_log,
                                 const TrajectoryLog& sigma0_log,
                                 const TrajectoryLog& sigma_log,
                                 bool expect_drift) {
  for (const TrajectoryLog* l : {&dads_log, &sigma0_log, &sigma_log}) {
    RequireLog(*l, "check_drift_contrast");
  }
  if (dads_log.times != sigma0_log.times || dads_log.times != sigma_log.times) {
    throw std::invalid_argument(
        "check_drift_contrast: logs differ in horizon or time grid");
  }
  const double plateau = 0.01, drift = 1.1;
  const double g_dads = GainTailGrowth(dads_log);
  const double g_sigma = GainTailGrowth(sigma_log);
  const double g_sigma0 = GainTailGrowth(sigma0_log);
  const double ratio0 = GainHalfHorizonRatio(sigma0_log);
  CheckReport r = NewReport(expect_drift ? "drift-contrast" : "drift-contrast (no drift expected)", 0.0);
  r.n_samples = static_cast<int>(dads_log.size());
  const double m_dads = plateau - g_dads;
  const double m_sigma = plateau - g_sigma;
  const double m_sigma0 = expect_drift ? ratio0 - drift : plateau - g_sigma0;
  r.worst_margin = std::min({m_dads, m_sigma, m_sigma0});
  r.witness = {g_dads, ratio0, g_sigma};
  std::ostringstream d;
  d << std::setprecision(6) << "dads tail growth " << g_dads
    << ", sigma>0 tail growth " << g_sigma << ", sigma=0 tail growth "
    << g_sigma0 << ", sigma=0 |thetahat(T)|/|thetahat(T/2)| " << ratio0
    << (expect_drift ? " (drift > 1.1 required)" : " (plateau required)")
    << "; plateau limit 1% over final " << kTailFraction * 100 << "%";
  r.detail = d.str();
  r.Finalize();
  return r;
}

double SigmaTradeoffBound(const SigmaModController& ctrl,
                          std::span<const double> theta, double d_sup) {
  const double tn = Norm(theta);
  return (0.5 * d_sup * d_sup + ctrl.sigma() / (2.0 * ctrl.gamma()) * tn * tn) /
         ctrl.c();
}

CheckReport check_sigma_tradeoff(const TrajectoryLog& sigma_log,
                                 std::span<const double> theta,
                                 const SigmaModController& ctrl) {
  RequireLog(sigma_log, "check_sigma_tradeoff");
  if (sigma_log.ctrl_states.front().size() != 4) {
    throw std::invalid_argument("check_sigma_tradeoff: expected 4 estimates");
  }
  const double bound =
      SigmaTradeoffBound(ctrl, theta, sigma_log.d_sup) * (1.0 + kTailSlack);
  CheckReport r = NewReport("sigma-tradeoff", 1e-9);
  const std::size_t tail = TailBegin(sigma_log, kTailFraction);
  double sup = 0.0, t_sup = sigma_log.times[tail];
  for (std::size_t i = tail; i < sigma_log.size(); ++i) {
    const auto& x = sigma_log.plant_states[i];
    const auto& h = sigma_log.ctrl_states[i];
    const auto o = sigma_mod_control(x[0], x[1], x[2],
                                     std::array<double, 4>{h[0], h[1], h[2], h[3]},
                                     ctrl);
    const double q = x[0] * x[0] + o.zeta * o.zeta + o.chi * o.chi;
    if (!(q <= sup)) {
      sup = q;
      t_sup = sigma_log.times[i];
    }
  }
  r.n_samples = static_cast<int>(sigma_log.size() - tail);
  r.worst_margin = std::isfinite(sup) ? bound - sup : -std::numeric_limits<double>::infinity();
  r.witness = {t_sup, sup};
  std::ostringstream d;
  d << std::setprecision(10) << "tail sup x1^2 + zeta^2 + chi^2 = " << sup
    << ", bound (1 + " << kTailSlack << ") * " << bound / (1.0 + kTailSlack);
  r.detail = d.str();
  r.Finalize();
  return r;
}

CheckReport check_vanishing(const TrajectoryLog& log, double threshold) {
  RequireLog(log, "check_vanishing");
  CheckReport r = NewReport("vanishing", 0.0);
  const double xn = Norm(log.plant_states.back());
  r.n_samples = 1;
  r.worst_margin = std::isfinite(xn) ? threshold - xn : -std::numeric_limits<double>::infinity();
  r.witness = log.plant_states.back();
  std::ostringstream d;
  d << std::setprecision(10) << "|x(" << log.times.back() << ")| = " << xn
    << ", threshold " << threshold;
  r.detail = d.str();
  r.Finalize();
  return r;
}

void WriteReportsCsv(const std::vector<CheckReport>& reports, std::ostream& os) {
  os << "name,passed,worst_margin,tolerance,n_samples,witness\n";
  os << std::setprecision(17);
  for (const CheckReport& r : reports) {
    os << r.name << ',' << (r.passed ? "true" : "false") << ','
       << r.worst_margin << ',' << r.tolerance << ',' << r.n_samples << ',';
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      if (i) os << ';';
      os << r.witness[i];
    }
    os << '\n';
  }
}

std::string FormatReports(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const CheckReport& r : reports) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": margin "
       << r.worst_margin << " (tol " << r.tolerance << ", " << r.n_samples
       << " samples)";
    if (!r.detail.empty()) os << "; " << r.detail;
    os << '\n';
  }
  return os.str();
}

}  // namespace dads
