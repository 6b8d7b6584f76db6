#include "dads/verifier.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

namespace dads {
namespace {

// Log on the grid t = 0, 0.1, ..., 1 with the given gain and z columns.
TrajectoryLog SyntheticLog(const std::function<double(double)>& gain,
                           const std::function<double(double)>& ctrl,
                           int ctrl_dim = 1) {
  TrajectoryLog log;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    log.times.push_back(t);
    log.plant_states.push_back({0.0, 0.0, 0.0});
    log.ctrl_states.push_back(std::vector<double>(ctrl_dim, ctrl(t)));
    log.u.push_back(0.0);
    log.V.push_back(0.0);
    log.output_norm.push_back(0.0);
    log.gain.push_back(gain(t));
  }
  return log;
}

TEST(DissipationTest, OriginSampleHasZeroMargin) {
  const WingRockDadsController ctrl;
  auto loop = std::make_shared<WingRockDadsLoop>(ctrl);
  const CheckReport r = check_dissipation(
      WingRockLyapunovMap(ctrl),
      [loop](auto s, auto th, auto d) { return loop->Rhs(s, th, d); },
      [](std::span<const double> s, std::span<const double> th,
         std::span<const double> d, double V) {
        const double ez = std::exp(s[3]);
        const double ex = relu_plus(Norm(th) - 1.0 - ez);
        return -0.5 * V + 2.0 * (Norm(d) * Norm(d) + ex * ex) / (1.0 + ez);
      },
      [](std::mt19937_64&, int) {
        return DissipationSample{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0}};
      },
      3, 0.0);
  EXPECT_EQ(r.worst_margin, 0.0);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.n_samples, 3);
}

TEST(DissipationTest, WingRockInequalityHolds) {
  const CheckReport r =
      check_wingrock_dissipation(WingRockDadsController{}, 1000, 1e-6);
  EXPECT_TRUE(r.passed) << FormatReports({r});
  EXPECT_EQ(r.n_samples, 1000);
  EXPECT_EQ(r.witness.size(), 10u);
}

TEST(DissipationTest, FlippedControllerTermFails) {
  const CheckReport r = check_wingrock_dissipation(
      WingRockDadsController(0.5, 14.0, 20.0, 0.01, true), 1000, 1e-6);
  EXPECT_FALSE(r.passed);
  ASSERT_EQ(r.witness.size(), 10u);
  for (double w : r.witness) EXPECT_TRUE(std::isfinite(w));
  // The witness reproduces the violation.
  const CheckReport again = check_wingrock_dissipation(
      WingRockDadsController(0.5, 14.0, 20.0, 0.01, true), 1000, 1e-6);
  EXPECT_EQ(again.witness, r.witness);
}

TEST(DissipationTest, SigmaModInequalityHolds) {
  for (double sigma : {0.4, 0.0}) {
    const CheckReport r = check_sigma_mod_dissipation(
        SigmaModController(0.5, 20.0, 14.0, sigma), 1000, 1e-6);
    EXPECT_TRUE(r.passed) << FormatReports({r});
  }
}

TEST(DissipationTest, ReproducibleAndToleranceMonotone) {
  const WingRockDadsController ctrl;
  const CheckReport a = check_wingrock_dissipation(ctrl, 200, 0.0, 7);
  const CheckReport b = check_wingrock_dissipation(ctrl, 200, 0.0, 7);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.witness, b.witness);
  for (double tol : {1e-9, 1e-3, 1.0}) {
    const CheckReport c = check_wingrock_dissipation(ctrl, 200, tol, 7);
    EXPECT_EQ(c.worst_margin, a.worst_margin);
    if (a.passed) {
      EXPECT_TRUE(c.passed);
    }
  }
  CheckReport fail = a;
  fail.worst_margin = -0.5;
  fail.tolerance = 0.4;
  fail.Finalize();
  EXPECT_FALSE(fail.passed);
  fail.tolerance = 0.6;
  fail.Finalize();
  EXPECT_TRUE(fail.passed);
}

TEST(DissipationTest, ArityMismatchThrows) {
  const WingRockDadsController ctrl;
  EXPECT_THROW(
      check_dissipation(
          WingRockLyapunovMap(ctrl),
          [](auto s, auto, auto) { return std::vector<double>(s.size()); },
          [](auto, auto, auto, double) { return 0.0; },
          BoxSampler(3, 4, 2, SampleBox{}), 1, 0.0),
      std::invalid_argument);
}

TEST(DissipationTest, BoxSamplerRespectsBox) {
  const SampleBox box;
  const DissipationSampler s = BoxSampler(4, 4, 2, box, {3});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 400; ++i) {
    const DissipationSample d = s(rng, i);
    for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(d.state[k]), box.x);
    EXPECT_LE(std::abs(d.state[3]), box.z);
    for (double t : d.theta) EXPECT_LE(std::abs(t), box.theta);
    for (double v : d.d) EXPECT_LE(std::abs(v), box.d);
    if ((i / 4) % 3 == 0) {
      EXPECT_EQ(Norm(d.d), 0.0);
    }
  }
}

TEST(EstimatesTest, AttractivityRadius) {
  EXPECT_NEAR(AttractivityRadius(0.5, 0.01), 0.22882456, 1e-8);
}

TEST(EstimatesTest, ZeroInitialStateRun) {
  WingRockDadsLoop loop{WingRockDadsController{}};
  SimConfig cfg = WingRockDadsConfig();
  cfg.t_end = 0.5;
  cfg.plant_init = {0.0, 0.0, 0.0};
  const TrajectoryLog log = simulate(loop, cfg);
  const auto reports = check_trajectory_estimates(log, DadsGains{}, 0.0);
  ASSERT_EQ(reports.size(), 4u);
  for (const CheckReport& r : reports) EXPECT_TRUE(r.passed) << r.name;
  // Envelope reduces to its constant term: 2 ((|theta| - 1.1)^+)^2 / (0.5 * 1.1).
  const double ex = std::sqrt(805.0) - 1.1;
  EXPECT_NEAR(reports[0].worst_margin, 2.0 * ex * ex / 0.55 + 1e-6, 1e-9);
}

TEST(EstimatesTest, SyntheticViolations) {
  DadsGains gains;
  TrajectoryLog log = SyntheticLog([](double) { return 1.0; },
                                   [](double t) { return t < 0.5 ? 0.0 : -0.1; });
  auto r = check_trajectory_estimates(log, gains, 0.0, SignalBounds{});
  EXPECT_TRUE(r[0].passed);
  EXPECT_FALSE(r[1].passed);
  EXPECT_NEAR(r[1].worst_margin, -0.1, 1e-15);

  log = SyntheticLog([](double) { return 1.0; }, [](double) { return 0.0; });
  log.V.back() = 0.012;
  log.output_norm.back() = 0.26;
  r = check_trajectory_estimates(log, gains, 0.0, SignalBounds{});
  EXPECT_FALSE(r[0].passed);  // V0 = 0 and no forcing: V must stay 0
  EXPECT_TRUE(r[1].passed);
  EXPECT_FALSE(r[2].passed);
  EXPECT_FALSE(r[3].passed);
  log.V.back() = 0.0109;
  log.output_norm.back() = 0.25;
  r = check_trajectory_estimates(log, gains, 0.0, SignalBounds{0.1, 0.0});
  for (const CheckReport& c : r) EXPECT_TRUE(c.passed) << c.name;
}

TEST(EstimatesTest, EnvelopeUsesSuppliedBounds) {
  DadsGains gains;
  const TrajectoryLog log =
      SyntheticLog([](double) { return 1.0; }, [](double) { return 0.0; });
  // theta_sup 4, e^z0 = 1: excess 2; d_sup 1 -> constant 2 (1 + 4) / (0.5 * 2).
  const auto r = check_trajectory_estimates(log, gains, 0.0, SignalBounds{1.0, 4.0}, 0.0);
  EXPECT_NEAR(r[0].worst_margin, 10.0, 1e-12);
}

TEST(DriftTest, ContrastOnSyntheticLogs) {
  const auto flat = SyntheticLog([](double) { return 5.0; }, [](double) { return 0.0; });
  const auto drifting = SyntheticLog([](double t) { return 1.0 + 10.0 * t; },
                                     [](double) { return 0.0; }, 4);
  const auto bounded = SyntheticLog([](double t) { return 3.0 - t; },
                                    [](double) { return 0.0; }, 4);
  const CheckReport ok = check_drift_contrast(flat, drifting, bounded);
  EXPECT_TRUE(ok.passed) << ok.detail;
  EXPECT_NEAR(ok.witness[1], 11.0 / 6.0, 1e-12);

  auto injected = flat;
  injected.gain.back() = 5.2;
  EXPECT_FALSE(check_drift_contrast(injected, drifting, bounded).passed);

  EXPECT_FALSE(check_drift_contrast(flat, bounded, bounded).passed);
  EXPECT_TRUE(check_drift_contrast(flat, bounded, bounded, false).passed);
  EXPECT_FALSE(check_drift_contrast(flat, drifting, bounded, false).passed);

  auto shorter = flat;
  shorter.times.back() = 1.5;
  EXPECT_THROW(check_drift_contrast(shorter, drifting, bounded),
               std::invalid_argument);
}

TEST(TradeoffTest, BoundArithmetic) {
  const std::vector<double> theta{20.0, 20.0, 2.0, 1.0};
  const SigmaModController ctrl;
  EXPECT_NEAR(SigmaTradeoffBound(ctrl, theta, 0.0), 16.1, 1e-12);
  const SigmaModController doubled(0.5, 20.0, 14.0, 0.8);
  EXPECT_NEAR(SigmaTradeoffBound(doubled, theta, 3.0) - 9.0,
              2.0 * (SigmaTradeoffBound(ctrl, theta, 3.0) - 9.0), 1e-12);
}

TEST(TradeoffTest, UnforcedRunFromRest) {
  SigmaModLoop loop{SigmaModController{}};
  SimConfig cfg = WingRockSigmaModConfig();
  cfg.t_end = 1.0;
  cfg.plant_init = {0.0, 0.0, 0.0};
  cfg.parameter = ParameterSignal::Constant({0.0, 0.0, 0.0, 0.0});
  const std::vector<double> theta(4, 0.0);
  const CheckReport r = check_sigma_tradeoff(simulate(loop, cfg), theta,
                                             SigmaModController{});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.witness[1], 0.0);
}

TEST(VanishingTest, Threshold) {
  auto log = SyntheticLog([](double) { return 1.0; }, [](double) { return 0.0; });
  log.plant_states.back() = {3e-4, 4e-4, 0.0};
  EXPECT_TRUE(check_vanishing(log).passed);
  EXPECT_FALSE(check_vanishing(log, 4e-4).passed);
}

TEST(ReportTest, CsvAndText) {
  CheckReport r{"a", 3, -0.25, {1.0, 2.5}, 0.1, false, "x"};
  CheckReport s{"b", 1, 0.5, {}, 0.0, true, ""};
  std::ostringstream os;
  WriteReportsCsv({r, s}, os);
  EXPECT_EQ(os.str(),
            "name,passed,worst_margin,tolerance,n_samples,witness\n"
            "a,false,-0.25,0.10000000000000001,3,1;2.5\n"
            "b,true,0.5,0,1,\n");
  const std::string text = FormatReports({r, s});
  EXPECT_NE(text.find("FAIL a: margin -0.25"), std::string::npos);
  EXPECT_NE(text.find("PASS b: margin 0.5"), std::string::npos);
}

}  // namespace
}  // namespace dads
