#include "dads/simulator.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "dads/wingrock.h"

namespace dads {
namespace {

// x' = x^2 blows up at t = 1 from x(0) = 1.
class BlowUpLoop : public TemplatedClosedLoop<BlowUpLoop> {
 public:
  std::string name() const override { return "blowup"; }
  int plant_dim() const override { return 1; }
  int ctrl_dim() const override { return 0; }
  int theta_dim() const override { return 0; }
  int disturbance_dim() const override { return 0; }
  std::vector<std::string> ctrl_names() const override { return {}; }
  Observation Observe(std::span<const double> s,
                      std::span<const double>) const override {
    return {0.0, 0.0, std::abs(s[0]), 0.0};
  }
  template <typename T>
  std::vector<T> Field(const std::vector<T>& s, std::span<const double>,
                       std::span<const double>) const {
    return {s[0] * s[0]};
  }
};

SimConfig BlowUpConfig() {
  SimConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt = 0.01;
  cfg.plant_init = {1.0};
  cfg.disturbance = DisturbanceProfile::Zero(0);
  cfg.parameter = ParameterSignal::Constant({});
  return cfg;
}

TrajectoryLog Slice(const TrajectoryLog& log, std::size_t begin, std::size_t end) {
  TrajectoryLog out = log;
  auto cut = [&](auto& v) {
    v = std::vector<typename std::decay_t<decltype(v)>::value_type>(
        v.begin() + begin, v.begin() + end);
  };
  cut(out.times);
  cut(out.plant_states);
  cut(out.ctrl_states);
  cut(out.u);
  cut(out.V);
  cut(out.output_norm);
  cut(out.gain);
  return out;
}

TEST(SimulatorTest, EquilibriumStaysPut) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.5;
  cfg.plant_init = {0.0, 0.0, 0.0};
  cfg.ctrl_init = {0.3};
  cfg.log_stride = 100;
  const TrajectoryLog log = simulate(loop, cfg);
  ASSERT_EQ(log.size(), 51u);
  for (std::size_t i = 0; i < log.size(); ++i) {
    for (double v : log.plant_states[i]) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(log.ctrl_states[i][0], 0.3);
    EXPECT_EQ(log.u[i], 0.0);
  }
}

TEST(SimulatorTest, WingRockDadsDisturbanceFree) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.log_stride = 10;
  const TrajectoryLog log = simulate(loop, cfg);
  EXPECT_NEAR(log.output_norm[0], std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(log.V[0], 0.6254689453125, 1e-12);
  EXPECT_DOUBLE_EQ(log.times.back(), 10.0);
  for (std::size_t i = 1; i < log.size(); ++i) {
    EXPECT_GE(log.ctrl_states[i][0], log.ctrl_states[i - 1][0] - 1e-12);
    EXPECT_NEAR(log.times[i] - log.times[i - 1], 1e-3, 1e-12);
  }
  // Reference from an adaptive Radau solver at rtol 1e-10.
  EXPECT_NEAR(log.ctrl_states.back()[0], 1.55497531, 1e-6);
  const TrajectoryStats st = trajectory_stats(log, 0.2);
  EXPECT_LT(st.sup_output_tail, 1e-3);
  EXPECT_NEAR(st.sup_gain, 1.0 + std::exp(1.55497531), 1e-5);
}

TEST(SimulatorTest, StepHalvingRadau) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 2.0;
  cfg.log_stride = 1000000;
  const TrajectoryLog a = simulate(loop, cfg);
  cfg.dt /= 2;
  const TrajectoryLog b = simulate(loop, cfg);
  std::vector<double> ya = a.plant_states.back(), yb = b.plant_states.back();
  ya.push_back(a.ctrl_states.back()[0]);
  yb.push_back(b.ctrl_states.back()[0]);
  double diff = 0.0;
  for (std::size_t i = 0; i < ya.size(); ++i) diff += std::pow(ya[i] - yb[i], 2);
  EXPECT_LT(std::sqrt(diff) / Norm(yb), 1e-6);
}

TEST(SimulatorTest, Rk4ConvergenceOrder) {
  SigmaModLoop loop{SigmaModController{}};
  std::vector<std::vector<double>> finals;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    SimConfig cfg = WingRockSigmaModConfig();
    cfg.t_end = 1.0;
    cfg.dt = dt;
    cfg.log_stride = 1000000;
    const TrajectoryLog log = simulate(loop, cfg);
    std::vector<double> y = log.plant_states.back();
    y.insert(y.end(), log.ctrl_states.back().begin(), log.ctrl_states.back().end());
    finals.push_back(y);
  }
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < finals[0].size(); ++i) {
    e1 += std::pow(finals[0][i] - finals[1][i], 2);
    e2 += std::pow(finals[1][i] - finals[2][i], 2);
  }
  const double ratio = std::sqrt(e1 / e2);
  EXPECT_GE(ratio, 8.0);
  EXPECT_LE(ratio, 32.0);
}

TEST(SimulatorTest, Rk4AndRadauAgreeOnSmoothLoop) {
  SigmaModLoop loop{SigmaModController{}};
  SimConfig cfg = WingRockSigmaModConfig();
  cfg.t_end = 1.0;
  cfg.log_stride = 1000000;
  const TrajectoryLog rk = simulate(loop, cfg);
  cfg.integrator = Integrator::kRadauIIA;
  const TrajectoryLog ra = simulate(loop, cfg);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rk.plant_states.back()[i], ra.plant_states.back()[i], 1e-8);
  }
}

TEST(SimulatorTest, Deterministic) {
  SigmaModLoop loop{SigmaModController{}};
  SimConfig cfg = WingRockSigmaModConfig();
  cfg.t_end = 0.5;
  cfg.disturbance = DisturbanceProfile::SinusoidBank({20.0, 10.0}, {10.0, 20.0});
  EXPECT_EQ(simulate(loop, cfg), simulate(loop, cfg));
}

TEST(SimulatorTest, JacobianMatchesFiniteDifferences) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  const std::vector<double> s{0.3, -0.2, 0.5, 0.1};
  const std::vector<double> theta{20.0, 20.0, 2.0, 1.0}, d{1.0, -2.0};
  const Eigen::MatrixXd J = loop.Jacobian(s, theta, d);
  for (int j = 0; j < 4; ++j) {
    std::vector<double> hi = s, lo = s;
    const double h = 1e-6;
    hi[j] += h;
    lo[j] -= h;
    const auto fh = loop.Rhs(hi, theta, d), fl = loop.Rhs(lo, theta, d);
    for (int i = 0; i < 4; ++i) {
      const double fd = (fh[i] - fl[i]) / (2 * h);
      EXPECT_NEAR(J(i, j), fd, 1e-5 * (1.0 + std::abs(fd))) << i << "," << j;
    }
  }
}

TEST(SimulatorTest, DivergenceIsReported) {
  BlowUpLoop loop;
  try {
    simulate(loop, BlowUpConfig());
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.last_finite_time(), 0.5);
    EXPECT_LT(e.last_finite_time(), 1.1);
  }
}

TEST(SimulatorTest, ConfigValidation) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.00015;
  EXPECT_THROW(simulate(loop, cfg), std::invalid_argument);
  cfg = WingRockDadsConfig();
  cfg.dt = 0.0;
  EXPECT_THROW(simulate(loop, cfg), std::invalid_argument);
  cfg = WingRockDadsConfig();
  cfg.log_stride = 0;
  EXPECT_THROW(simulate(loop, cfg), std::invalid_argument);
  cfg = WingRockDadsConfig();
  cfg.plant_init = {1.0};
  EXPECT_THROW(simulate(loop, cfg), std::invalid_argument);
  cfg = WingRockDadsConfig();
  cfg.disturbance = DisturbanceProfile::Zero(3);
  EXPECT_THROW(simulate(loop, cfg), std::invalid_argument);
}

TEST(BatchTest, MatchesSequentialAndPreservesOrder) {
  auto dads = std::make_shared<WingRockDadsLoop>(WingRockDadsController{});
  auto s04 = std::make_shared<SigmaModLoop>(SigmaModController{});
  auto s0 = std::make_shared<SigmaModLoop>(SigmaModController(0.5, 20.0, 14.0, 0.0));
  SimConfig cd = WingRockDadsConfig(), cs = WingRockSigmaModConfig();
  cd.t_end = cs.t_end = 0.2;
  cd.log_stride = cs.log_stride = 10;
  std::vector<BatchJob> jobs{{dads, cd}, {s04, cs}, {s0, cs},
                             {std::make_shared<BlowUpLoop>(), BlowUpConfig()}};
  const auto results = batch_simulate(jobs);
  ASSERT_EQ(results.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    ASSERT_TRUE(results[i].log.has_value()) << results[i].error;
    EXPECT_EQ(*results[i].log, simulate(*jobs[i].loop, jobs[i].config));
    EXPECT_EQ(results[i].log->times, results[0].log->times);
  }
  EXPECT_FALSE(results[3].log.has_value());
  EXPECT_TRUE(results[3].diverged_at.has_value());

  std::vector<BatchJob> reversed(jobs.rbegin() + 1, jobs.rend());
  const auto back = batch_simulate(reversed);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(*back[i].log, *results[2 - i].log);
  EXPECT_EQ(*batch_simulate({jobs[0]})[0].log, *results[0].log);
}

TEST(StatsTest, TailAndEnergy) {
  TrajectoryLog log;
  log.times = {0.0, 1.0, 2.0, 3.0};
  log.output_norm = {1.0, 0.5, 0.1, 0.1};
  log.gain = {2.0, 3.0, 3.0, 2.5};
  log.u = {0.0, 1.0, 1.0, 0.0};
  log.ctrl_states = {{0.1}, {0.2}, {0.3}, {0.4}};
  const TrajectoryStats st = trajectory_stats(log, 0.5);
  EXPECT_DOUBLE_EQ(st.sup_output_tail, 0.1);
  EXPECT_DOUBLE_EQ(st.sup_gain, 3.0);
  EXPECT_DOUBLE_EQ(st.final_ctrl, 0.4);
  EXPECT_DOUBLE_EQ(st.control_energy, 2.0);
  EXPECT_THROW(trajectory_stats(log, 0.0), std::invalid_argument);
  EXPECT_THROW(trajectory_stats(TrajectoryLog{}, 0.5), std::invalid_argument);
}

TEST(StatsTest, ZeroLogAndEnergyAdditivity) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.1;
  cfg.plant_init = {0.0, 0.0, 0.0};
  const TrajectoryStats zero = trajectory_stats(simulate(loop, cfg), 0.5);
  EXPECT_EQ(zero.sup_output_tail, 0.0);
  EXPECT_EQ(zero.control_energy, 0.0);
  EXPECT_DOUBLE_EQ(zero.final_ctrl, -std::log(10.0));

  cfg = WingRockDadsConfig();
  cfg.t_end = 0.2;
  const TrajectoryLog log = simulate(loop, cfg);
  const std::size_t mid = log.size() / 2;
  const double whole = trajectory_stats(log, 1.0).control_energy;
  const double parts = trajectory_stats(Slice(log, 0, mid + 1), 1.0).control_energy +
                       trajectory_stats(Slice(log, mid, log.size()), 1.0).control_energy;
  EXPECT_GE(whole, 0.0);
  EXPECT_NEAR(whole, parts, 1e-9 * whole);
}

TEST(CsvTest, HeaderAndPrecision) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.001;
  cfg.log_stride = 10;
  std::ostringstream os;
  WriteTrajectoryCsv(simulate(loop, cfg), os);
  std::istringstream is(os.str());
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  EXPECT_EQ(header, "t,x1,x2,x3,z,u,V,Ynorm");
  EXPECT_NE(first.find("1.1180339887498949"), std::string::npos) << first;

  SigmaModLoop sm{SigmaModController{}};
  std::ostringstream os2;
  WriteTrajectoryCsv(simulate(sm, [] {
    SimConfig c = WingRockSigmaModConfig();
    c.t_end = 0.001;
    return c;
  }()), os2);
  EXPECT_EQ(os2.str().substr(0, os2.str().find('\n')),
            "t,x1,x2,x3,thetahat1,thetahat2,thetahat3,thetahat4,u,V,Ynorm");
}

TEST(SynthesizedLoopTest, OriginIsEquilibrium) {
  const DadsGains gains;
  const StrictFeedbackSystem sys = WingRockSystem();
  const SynthesisResult res = synthesize(sys, gains, WingRockMajorants());
  SynthesizedLoop loop(sys, SynthesizedDadsController(res, gains));
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.01;
  cfg.plant_init = {0.0, 0.0, 0.0};
  const TrajectoryLog log = simulate(loop, cfg);
  for (const auto& x : log.plant_states) {
    for (double v : x) EXPECT_EQ(v, 0.0);
  }
  EXPECT_EQ(log.ctrl_states.back()[0], cfg.ctrl_init[0]);
}

}  // namespace
}  // namespace dads
