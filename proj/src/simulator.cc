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

#include "dads/simulator.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>

#include "dads/wingrock.h"

namespace dads {
namespace {

constexpr int kMaxSplitDepth = 12;
constexpr int kMaxNewtonIterations = 12;
constexpr double kNewtonAtol = 1e-11;
constexpr double kNewtonRtol = 1e-11;

// Evaluates signals and the vector field, tracking signal suprema.
class Evaluator {
 public:
  Evaluator(const ClosedLoop& loop, const SimConfig& cfg)
      : loop_(loop), cfg_(cfg) {}

  std::vector<double> Theta(double t) {
    std::vector<double> th = cfg_.parameter.Value(t);
    theta_sup_ = std::max(theta_sup_, Norm(th));
    return th;
  }
  std::vector<double> Dist(double t) {
    std::vector<double> d = cfg_.disturbance.Sample(t);
    d_sup_ = std::max(d_sup_, Norm(d));
    return d;
  }
  Eigen::VectorXd F(double t, const Eigen::VectorXd& y) {
    const std::vector<double> th = Theta(t), d = Dist(t);
    const std::vector<double> f =
        loop_.Rhs(std::span<const double>(y.data(), y.size()), th, d);
    return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
  }
  Eigen::MatrixXd J(double t, const Eigen::VectorXd& y) {
    const std::vector<double> th = Theta(t), d = Dist(t);
    return loop_.Jacobian(std::span<const double>(y.data(), y.size()), th, d);
  }

  double theta_sup() const { return theta_sup_; }
  double d_sup() const { return d_sup_; }

 private:
  const ClosedLoop& loop_;
  const SimConfig& cfg_;
  double theta_sup_ = 0.0;
  double d_sup_ = 0.0;
};

Eigen::VectorXd Rk4Step(Evaluator& ev, double t, const Eigen::VectorXd& y,
                        double h) {
  const Eigen::VectorXd k1 = ev.F(t, y);
  const Eigen::VectorXd k2 = ev.F(t + 0.5 * h, y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = ev.F(t + 0.5 * h, y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = ev.F(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct RadauTableau {
  Eigen::Matrix3d A;
  Eigen::Vector3d c;
  RadauTableau() {
    const double s6 = std::sqrt(6.0);
    A << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0,
        (-2.0 + 3.0 * s6) / 225.0, (296.0 + 169.0 * s6) / 1800.0,
        (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0,
        (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
    c << (4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0;
  }
};

const RadauTableau& Tableau() {
  static const RadauTableau tableau;
  return tableau;
}

// One collocation step; returns nullopt when Newton does not converge.
std::optional<Eigen::VectorXd> RadauStep(Evaluator& ev, double t,
                                         const Eigen::VectorXd& y, double h) {
  const RadauTableau& tab = Tableau();
  const int n = static_cast<int>(y.size());
  const Eigen::MatrixXd J = ev.J(t, y);
  if (!J.allFinite()) return std::nullopt;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3 * n, 3 * n);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      M.block(i * n, j * n, n, n) -= h * tab.A(i, j) * J;
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  Eigen::VectorXd Z = Eigen::VectorXd::Zero(3 * n);
  Eigen::VectorXd F(3 * n);
  double prev_norm = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    for (int i = 0; i < 3; ++i) {
      F.segment(i * n, n) = ev.F(t + tab.c(i) * h, y + Z.segment(i * n, n));
    }
    if (!F.allFinite()) return std::nullopt;
    Eigen::VectorXd R = Z;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        R.segment(i * n, n) -= h * tab.A(i, j) * F.segment(j * n, n);
      }
    }
    const Eigen::VectorXd dZ = -lu.solve(R);
    Z += dZ;
    double norm = 0.0;
    for (int k = 0; k < 3 * n; ++k) {
      const double scale = kNewtonAtol + kNewtonRtol * std::abs(y(k % n));
      norm = std::max(norm, std::abs(dZ(k)) / scale);
    }
    if (!std::isfinite(norm)) return std::nullopt;
    if (norm < 1.0) return Eigen::VectorXd(y + Z.segment(2 * n, n));
    if (it >= 2 && norm > prev_norm) return std::nullopt;
    prev_norm = norm;
  }
  return std::nullopt;
}

Eigen::VectorXd RadauAdvance(Evaluator& ev, double t, const Eigen::VectorXd& y,
                             double h, int depth) {
  if (auto next = RadauStep(ev, t, y, h)) return *next;
  if (depth >= kMaxSplitDepth) {
    throw DivergenceError(t, "Radau Newton iteration failed at t = " +
                                 std::to_string(t));
  }
  const Eigen::VectorXd mid = RadauAdvance(ev, t, y, 0.5 * h, depth + 1);
  return RadauAdvance(ev, t + 0.5 * h, mid, 0.5 * h, depth + 1);
}

void Record(const ClosedLoop& loop, Evaluator& ev, double t,
            const Eigen::VectorXd& y, TrajectoryLog& log) {
  const int np = loop.plant_dim();
  const std::span<const double> s(y.data(), y.size());
  const std::vector<double> th = ev.Theta(t);
  const Observation o = loop.Observe(s, th);
  log.times.push_back(t);
  log.plant_states.emplace_back(y.data(), y.data() + np);
  log.ctrl_states.emplace_back(y.data() + np, y.data() + y.size());
  log.u.push_back(o.u);
  log.V.push_back(o.V);
  log.output_norm.push_back(o.output_norm);
  log.gain.push_back(o.gain);
}

}  // namespace

std::vector<std::string> ClosedLoop::plant_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < plant_dim(); ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

void SimConfig::Validate() const {
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("simulation needs dt > 0 and t_end > 0");
  }
  if (log_stride < 1) throw std::invalid_argument("log_stride must be >= 1");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("t_end must be a whole number of dt steps");
  }
}

long SimConfig::Steps() const { return std::lround(t_end / dt); }

template <typename T>
std::vector<T> WingRockDadsLoop::Field(const std::vector<T>& s,
                                       std::span<const double> theta,
                                       std::span<const double> d) const {
  const T u = wingrock_control(s[0], s[1], s[2], s[3], ctrl_);
  const auto f = WingRockField(s[0], s[1], s[2], u, theta, d);
  return {f[0], f[1], f[2], wingrock_z_rate(s[0], s[1], s[2], s[3], ctrl_)};
}

Observation WingRockDadsLoop::Observe(std::span<const double> s,
                                      std::span<const double>) const {
  const auto w = wingrock_intermediates(s[0], s[1], s[2], s[3], ctrl_.c(), ctrl_.K());
  Observation o;
  o.u = wingrock_control(s[0], s[1], s[2], s[3], ctrl_);
  o.V = w.V;
  o.output_norm = std::hypot(s[0], s[1]);
  o.gain = w.rho;
  return o;
}

std::vector<std::string> SigmaModLoop::ctrl_names() const {
  return {"thetahat1", "thetahat2", "thetahat3", "thetahat4"};
}

template <typename T>
std::vector<T> SigmaModLoop::Field(const std::vector<T>& s,
                                   std::span<const double> theta,
                                   std::span<const double> d) const {
  const std::array<T, 4> th{s[3], s[4], s[5], s[6]};
  const auto o = sigma_mod_control(s[0], s[1], s[2], th, ctrl_);
  const auto f = WingRockField(s[0], s[1], s[2], o.u, theta, d);
  return {f[0], f[1], f[2], o.w[0], o.w[1], o.w[2], o.w[3]};
}

Observation SigmaModLoop::Observe(std::span<const double> s,
                                  std::span<const double> theta) const {
  const std::array<double, 4> th{s[3], s[4], s[5], s[6]};
  Observation o;
  o.u = sigma_mod_control(s[0], s[1], s[2], th, ctrl_).u;
  o.V = sigma_mod_lyapunov(s[0], s[1], s[2], th, theta, ctrl_);
  o.output_norm = std::hypot(s[0], s[1]);
  o.gain = Norm(th);
  return o;
}

template std::vector<double> WingRockDadsLoop::Field<double>(
    const std::vector<double>&, std::span<const double>,
    std::span<const double>) const;
template std::vector<Jet> WingRockDadsLoop::Field<Jet>(
    const std::vector<Jet>&, std::span<const double>,
    std::span<const double>) const;
template std::vector<double> SigmaModLoop::Field<double>(
    const std::vector<double>&, std::span<const double>,
    std::span<const double>) const;
template std::vector<Jet> SigmaModLoop::Field<Jet>(
    const std::vector<Jet>&, std::span<const double>,
    std::span<const double>) const;

SynthesizedLoop::SynthesizedLoop(StrictFeedbackSystem sys,
                                 SynthesizedDadsController ctrl)
    : sys_(std::move(sys)), ctrl_(std::move(ctrl)) {
  if (ctrl_.state_dim() != sys_.state_dim()) {
    throw std::invalid_argument("synthesized controller does not match the plant");
  }
}

std::vector<std::string> SynthesizedLoop::plant_names() const {
  return sys_.StateNames();
}

JetVec SynthesizedLoop::Field(const JetVec& s, std::span<const double> theta,
                              std::span<const double> d) const {
  const int n = sys_.state_dim();
  const JetVec plant(s.begin(), s.begin() + n);
  const Jet u = ctrl_.k()(s)[0];
  JetVec out = eval_dynamics(sys_, plant, u, theta, d);
  const Jet& z = s[n];
  out.push_back(ctrl_.gamma() * exp(-z) * relu_plus(ctrl_.V()(s)[0] - ctrl_.eps()));
  return out;
}

std::vector<double> SynthesizedLoop::Rhs(std::span<const double> s,
                                         std::span<const double> theta,
                                         std::span<const double> d) const {
  const JetVec f = Field(LiftPoint(s, 0), theta, d);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].value();
  return out;
}

Eigen::MatrixXd SynthesizedLoop::Jacobian(std::span<const double> s,
                                          std::span<const double> theta,
                                          std::span<const double> d) const {
  const JetVec f = Field(LiftPoint(s, 1), theta, d);
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd J(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) J(i, j) = f[i].partial(j);
  }
  return J;
}

Observation SynthesizedLoop::Observe(std::span<const double> s,
                                     std::span<const double>) const {
  const int n = sys_.state_dim();
  const SynthesizedOutput out = synthesized_control(s.subspan(0, n), s[n], ctrl_);
  Observation o;
  o.u = out.u;
  o.V = ctrl_.V().EvaluateScalar(s);
  double y2 = 0.0;
  for (int idx : sys_.output_indices) y2 += s[idx] * s[idx];
  o.output_norm = std::sqrt(y2);
  o.gain = 1.0 + std::exp(s[n]);
  return o;
}

DivergenceError::DivergenceError(double last_finite_time,
                                 const std::string& what)
    : std::runtime_error(what), last_finite_time_(last_finite_time) {}

TrajectoryLog simulate(const ClosedLoop& loop, const SimConfig& config) {
  config.Validate();
  if (static_cast<int>(config.plant_init.size()) != loop.plant_dim() ||
      static_cast<int>(config.ctrl_init.size()) != loop.ctrl_dim()) {
    throw std::invalid_argument(loop.name() + ": initial state has wrong dimension");
  }
  if (config.parameter.dim() != loop.theta_dim()) {
    throw std::invalid_argument(loop.name() + ": parameter signal has dimension " +
                                std::to_string(config.parameter.dim()) +
                                ", expected " + std::to_string(loop.theta_dim()));
  }
  if (config.disturbance.channels() != loop.disturbance_dim()) {
    throw std::invalid_argument(loop.name() + ": disturbance has " +
                                std::to_string(config.disturbance.channels()) +
                                " channels, expected " +
                                std::to_string(loop.disturbance_dim()));
  }

  TrajectoryLog log;
  log.loop_name = loop.name();
  log.plant_names = loop.plant_names();
  log.ctrl_names = loop.ctrl_names();
  Evaluator ev(loop, config);

  Eigen::VectorXd y(loop.dim());
  for (int i = 0; i < loop.plant_dim(); ++i) y(i) = config.plant_init[i];
  for (int i = 0; i < loop.ctrl_dim(); ++i) {
    y(loop.plant_dim() + i) = config.ctrl_init[i];
  }
  if (!y.allFinite()) {
    throw std::invalid_argument("initial state must be finite");
  }
  const long steps = config.Steps();
  Record(loop, ev, 0.0, y, log);
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * config.dt;
    Eigen::VectorXd next = config.integrator == Integrator::kRk4
                               ? Rk4Step(ev, t, y, config.dt)
                               : RadauAdvance(ev, t, y, config.dt, 0);
    if (!next.allFinite()) {
      throw DivergenceError(t, loop.name() + ": non-finite state after t = " +
                                   std::to_string(t));
    }
    y = std::move(next);
    if ((i + 1) % config.log_stride == 0 || i + 1 == steps) {
      Record(loop, ev, static_cast<double>(i + 1) * config.dt, y, log);
    }
  }
  log.theta_sup = ev.theta_sup();
  log.d_sup = ev.d_sup();
  return log;
}

std::vector<BatchResult> batch_simulate(const std::vector<BatchJob>& jobs) {
  std::vector<std::future<BatchResult>> futures;
  futures.reserve(jobs.size());
  for (const BatchJob& job : jobs) {
    futures.push_back(std::async(std::launch::async, [&job] {
      BatchResult r;
      try {
        if (!job.loop) throw std::invalid_argument("batch job without a loop");
        r.log = simulate(*job.loop, job.config);
      } catch (const DivergenceError& e) {
        r.error = e.what();
        r.diverged_at = e.last_finite_time();
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      return r;
    }));
  }
  std::vector<BatchResult> results;
  results.reserve(jobs.size());
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

double control_energy(const TrajectoryLog& log, double t_from) {
  double e = 0.0;
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (log.times[i - 1] < t_from) continue;
    const double h = log.times[i] - log.times[i - 1];
    e += 0.5 * h * (log.u[i] * log.u[i] + log.u[i - 1] * log.u[i - 1]);
  }
  return e;
}

TrajectoryStats trajectory_stats(const TrajectoryLog& log,
                                 double tail_fraction) {
  if (log.size() == 0) throw std::invalid_argument("empty trajectory log");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  }
  TrajectoryStats st;
  const double t0 = log.times.front(), t1 = log.times.back();
  const double start = t1 - tail_fraction * (t1 - t0);
  const double slack = 1e-12 * std::max(1.0, std::abs(t1));
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log.times[i] >= start - slack) {
      st.sup_output_tail = std::max(st.sup_output_tail, log.output_norm[i]);
    }
    st.sup_gain = std::max(st.sup_gain, std::abs(log.gain[i]));
  }
  st.control_energy = control_energy(log, t0);
  const std::vector<double>& last = log.ctrl_states.back();
  st.final_ctrl = last.size() == 1 ? last[0] : Norm(last);
  return st;
}

void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& os) {
  os << "t";
  for (const auto& n : log.plant_names) os << "," << n;
  for (const auto& n : log.ctrl_names) os << "," << n;
  os << ",u,V,Ynorm\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < log.size(); ++i) {
    os << log.times[i];
    for (double v : log.plant_states[i]) os << "," << v;
    for (double v : log.ctrl_states[i]) os << "," << v;
    os << "," << log.u[i] << "," << log.V[i] << "," << log.output_norm[i] << "\n";
  }
}

SimConfig WingRockDadsConfig() {
  SimConfig cfg;
  cfg.plant_init = {1.0, -0.5, -18.0};
  cfg.ctrl_init = {-std::log(10.0)};
  cfg.disturbance = DisturbanceProfile::Zero(2);
  cfg.parameter = ParameterSignal::Constant({20.0, 20.0, 2.0, 1.0});
  cfg.integrator = Integrator::kRadauIIA;
  return cfg;
}

SimConfig WingRockSigmaModConfig() {
  SimConfig cfg = WingRockDadsConfig();
  cfg.ctrl_init = {0.0, 0.0, 0.0, 0.0};
  cfg.integrator = Integrator::kRk4;
  return cfg;
}

}  // namespace dads
