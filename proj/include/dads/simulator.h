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
 * @file simulator.h
 * @brief Fixed-step integration of plant + controller closed loops.
 *
 * Two integrators are available.  Classical RK4 is cheap but the
 * deadzone-adapted wing-rock loop is stiff (its xi feedback gain reaches
 * 1e7 and more), so the default is the 3-stage Radau IIA collocation
 * method with a simplified Newton iteration on exact jet Jacobians.  A
 * Radau step whose Newton iteration fails is split in two, recursively.
 *
 * Example:
 * @code
 *   dads::WingRockDadsLoop loop(dads::WingRockDadsController{});
 *   dads::SimConfig cfg = dads::WingRockDadsConfig();
 *   dads::TrajectoryLog log = dads::simulate(loop, cfg);
 * @endcode
 */

#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dads/controllers.h"
#include "dads/system_model.h"

namespace dads {

enum class Integrator { kRk4, kRadauIIA };

struct SimConfig {
  double t_end = 10.0;
  double dt = 1e-4;
  std::vector<double> plant_init;
  std::vector<double> ctrl_init;
  DisturbanceProfile disturbance;
  ParameterSignal parameter;
  int log_stride = 1;
  Integrator integrator = Integrator::kRk4;

  /// Throws std::invalid_argument on dt <= 0, t_end <= 0, stride < 1 or a
  /// horizon that is not a whole number of steps.
  void Validate() const;
  /// Number of steps t_end / dt.
  long Steps() const;

  bool operator==(const SimConfig&) const = default;
};

struct Observation {
  double u = 0.0;
  double V = 0.0;
  double output_norm = 0.0;
  double gain = 0.0;  // rho = 1 + e^z, or |thetahat|
};

/// Augmented closed-loop vector field (plant states first, then controller
/// states).  Disturbance and parameter values are supplied by the caller.
class ClosedLoop {
 public:
  virtual ~ClosedLoop() = default;

  virtual std::string name() const = 0;
  virtual int plant_dim() const = 0;
  virtual int ctrl_dim() const = 0;
  int dim() const { return plant_dim() + ctrl_dim(); }
  virtual int theta_dim() const = 0;
  virtual int disturbance_dim() const = 0;
  virtual std::vector<std::string> plant_names() const;
  virtual std::vector<std::string> ctrl_names() const = 0;

  virtual std::vector<double> Rhs(std::span<const double> s,
                                  std::span<const double> theta,
                                  std::span<const double> d) const = 0;
  virtual Eigen::MatrixXd Jacobian(std::span<const double> s,
                                   std::span<const double> theta,
                                   std::span<const double> d) const = 0;
  virtual Observation Observe(std::span<const double> s,
                              std::span<const double> theta) const = 0;
};

/// Implements Rhs and Jacobian from one templated Field<T>() of Derived,
/// evaluated on doubles and on first-order jets respectively.
template <typename Derived>
class TemplatedClosedLoop : public ClosedLoop {
 public:
  std::vector<double> Rhs(std::span<const double> s,
                          std::span<const double> theta,
                          std::span<const double> d) const override {
    const std::vector<double> v(s.begin(), s.end());
    return static_cast<const Derived&>(*this).template Field<double>(v, theta, d);
  }

  Eigen::MatrixXd Jacobian(std::span<const double> s,
                           std::span<const double> theta,
                           std::span<const double> d) const override {
    const JetVec js = LiftPoint(s, 1);
    const JetVec f =
        static_cast<const Derived&>(*this).template Field<Jet>(js, theta, d);
    const int n = static_cast<int>(s.size());
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) J(i, j) = f[i].partial(j);
    }
    return J;
  }
};

/// Wing-rock plant with the closed-form deadzone-adapted law; state
/// (x1, x2, x3, z).
class WingRockDadsLoop : public TemplatedClosedLoop<WingRockDadsLoop> {
 public:
  explicit WingRockDadsLoop(WingRockDadsController ctrl) : ctrl_(ctrl) {}

  std::string name() const override { return "dads-wingrock"; }
  int plant_dim() const override { return 3; }
  int ctrl_dim() const override { return 1; }
  int theta_dim() const override { return 4; }
  int disturbance_dim() const override { return 2; }
  std::vector<std::string> ctrl_names() const override { return {"z"}; }
  Observation Observe(std::span<const double> s,
                      std::span<const double> theta) const override;
  const WingRockDadsController& controller() const { return ctrl_; }

  template <typename T>
  std::vector<T> Field(const std::vector<T>& s, std::span<const double> theta,
                       std::span<const double> d) const;

 private:
  WingRockDadsController ctrl_;
};

/// Wing-rock plant with the sigma-modification law; state
/// (x1, x2, x3, thetahat1..4).  V reports W with the true theta.
class SigmaModLoop : public TemplatedClosedLoop<SigmaModLoop> {
 public:
  explicit SigmaModLoop(SigmaModController ctrl) : ctrl_(ctrl) {}

  std::string name() const override { return "sigma-mod"; }
  int plant_dim() const override { return 3; }
  int ctrl_dim() const override { return 4; }
  int theta_dim() const override { return 4; }
  int disturbance_dim() const override { return 2; }
  std::vector<std::string> ctrl_names() const override;
  Observation Observe(std::span<const double> s,
                      std::span<const double> theta) const override;
  const SigmaModController& controller() const { return ctrl_; }

  template <typename T>
  std::vector<T> Field(const std::vector<T>& s, std::span<const double> theta,
                       std::span<const double> d) const;

 private:
  SigmaModController ctrl_;
};

/// Any strict-feedback plant with a synthesized law; state (plant, z).
class SynthesizedLoop : public ClosedLoop {
 public:
  SynthesizedLoop(StrictFeedbackSystem sys, SynthesizedDadsController ctrl);

  std::string name() const override { return "dads-synthesized"; }
  int plant_dim() const override { return sys_.state_dim(); }
  int ctrl_dim() const override { return 1; }
  int theta_dim() const override { return sys_.p; }
  int disturbance_dim() const override { return sys_.l; }
  std::vector<std::string> plant_names() const override;
  std::vector<std::string> ctrl_names() const override { return {"z"}; }
  std::vector<double> Rhs(std::span<const double> s,
                          std::span<const double> theta,
                          std::span<const double> d) const override;
  Eigen::MatrixXd Jacobian(std::span<const double> s,
                           std::span<const double> theta,
                           std::span<const double> d) const override;
  Observation Observe(std::span<const double> s,
                      std::span<const double> theta) const override;

 private:
  JetVec Field(const JetVec& s, std::span<const double> theta,
               std::span<const double> d) const;

  StrictFeedbackSystem sys_;
  SynthesizedDadsController ctrl_;
};

struct TrajectoryLog {
  std::string loop_name;
  std::vector<std::string> plant_names;
  std::vector<std::string> ctrl_names;
  std::vector<double> times;
  std::vector<std::vector<double>> plant_states;
  std::vector<std::vector<double>> ctrl_states;
  std::vector<double> u;
  std::vector<double> V;
  std::vector<double> output_norm;
  std::vector<double> gain;
  /// Largest |theta(t)| and |d(t)| seen at the logged times and at every
  /// integration stage.
  double theta_sup = 0.0;
  double d_sup = 0.0;

  std::size_t size() const { return times.size(); }
  bool operator==(const TrajectoryLog&) const = default;
};

/// Raised when the state stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double last_finite_time, const std::string& what);
  double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

TrajectoryLog simulate(const ClosedLoop& loop, const SimConfig& config);

struct BatchJob {
  std::shared_ptr<const ClosedLoop> loop;
  SimConfig config;
};

struct BatchResult {
  std::optional<TrajectoryLog> log;
  std::string error;  // empty on success
  std::optional<double> diverged_at;
};

/// Runs the jobs concurrently; results are in input order and identical to
/// sequential simulate() calls.  Errors are collected per job.
std::vector<BatchResult> batch_simulate(const std::vector<BatchJob>& jobs);

struct TrajectoryStats {
  double sup_output_tail = 0.0;
  double sup_gain = 0.0;
  /// Final z for a scalar controller state, final |thetahat| otherwise.
  double final_ctrl = 0.0;
  double control_energy = 0.0;
};

TrajectoryStats trajectory_stats(const TrajectoryLog& log,
                                 double tail_fraction);

/// Trapezoidal integral of u^2 over the logged intervals starting at or
/// after t_from.
double control_energy(const TrajectoryLog& log, double t_from);

/// CSV with header t, <plant names>, <controller names>, u, V, Ynorm and 17
/// significant digits.
void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& os);

/// Configuration of the wing-rock runs: x(0) = (1, -0.5, -18),
/// z(0) = -ln 10 (or thetahat(0) = 0), theta = (20, 20, 2, 1), d = 0.
SimConfig WingRockDadsConfig();
SimConfig WingRockSigmaModConfig();

}  // namespace dads
