#include "dads/controllers.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dads/wingrock.h"

namespace dads {
namespace {

const double kZ0 = -std::log(10.0);

TEST(WingRockDadsTest, IntermediatesAtInitialPoint) {
  const auto w = wingrock_intermediates(1.0, -0.5, -18.0, kZ0, 0.5, 14.0);
  EXPECT_NEAR(w.zeta, 0.5, 1e-15);
  EXPECT_NEAR(w.rho, 1.1, 1e-15);
  EXPECT_NEAR(w.L, 2.0625, 1e-15);
  EXPECT_NEAR(w.xi, -0.030625, 1e-12);
  EXPECT_NEAR(w.V, 0.6254689453125, 1e-12);
}

TEST(WingRockDadsTest, IntermediatesAtOrigin) {
  for (double z : {-2.0, 0.0, 3.0}) {
    const auto w = wingrock_intermediates(0.0, 0.0, 0.0, z, 0.5, 14.0);
    EXPECT_EQ(w.zeta, 0.0);
    EXPECT_EQ(w.L, 1.0);
    EXPECT_EQ(w.xi, 0.0);
    EXPECT_EQ(w.V, 0.0);
  }
  EXPECT_EQ(wingrock_intermediates(0.0, 0.0, 0.0, 0.0, 0.5, 14.0).rho, 2.0);
}

TEST(WingRockDadsTest, ControlAtInitialPoint) {
  const WingRockDadsController ctrl;
  // Exact rational evaluation with rho = 11/10.
  EXPECT_NEAR(wingrock_control(1.0, -0.5, -18.0, kZ0, ctrl) / 319634.2705495827,
              1.0, 1e-9);
  EXPECT_EQ(wingrock_control(0.0, 0.0, 0.0, 1.3, ctrl), 0.0);
}

TEST(WingRockDadsTest, GammaEntersOneTerm) {
  const WingRockDadsController g20(0.5, 14.0, 20.0, 0.01);
  const WingRockDadsController g40(0.5, 14.0, 40.0, 0.01);
  const double x1 = 1.0, x2 = -0.5, x3 = -18.0;
  const auto w = wingrock_intermediates(x1, x2, x3, kZ0, 0.5, 14.0);
  const double expected =
      -2.0 * 20.0 * 14.0 * w.rho * w.L * relu_plus(w.V - 0.01) * w.zeta;
  const double diff = wingrock_control(x1, x2, x3, kZ0, g40) -
                      wingrock_control(x1, x2, x3, kZ0, g20);
  EXPECT_NEAR(diff, expected, 1e-9 * std::abs(expected));
  EXPECT_NEAR(diff, -390.9766475097656, 1e-8);
}

TEST(WingRockDadsTest, ZRate) {
  const WingRockDadsController ctrl;
  EXPECT_NEAR(wingrock_z_rate(1.0, -0.5, -18.0, kZ0, ctrl), 123.0937890625,
              1e-9);
  // c = 1/2 makes zeta = x1 + x2 and xi = x3 on {x2 = -x1}, so V = (x1^2 +
  // x3^2) / 2.
  EXPECT_EQ(wingrock_z_rate(0.1, -0.1, 0.0, 0.0, ctrl), 0.0);  // V = 0.005
  const double V = wingrock_intermediates(0.1, -0.1, 0.1, 0.0, 0.5, 14.0).V;
  const WingRockDadsController at_boundary(0.5, 14.0, 20.0, V);
  EXPECT_EQ(wingrock_z_rate(0.1, -0.1, 0.1, 0.0, at_boundary), 0.0);
}

TEST(WingRockDadsTest, ZRateNonNegativeAndLowerBound) {
  const WingRockDadsController ctrl;
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  const double c = 0.5;
  const double k = (std::sqrt(c * c + 1) - c) / (2 * (std::sqrt(c * c + 1) + c));
  EXPECT_NEAR(k, 0.190983, 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = box(rng), x2 = box(rng), x3 = box(rng), z = box(rng);
    const double zr = wingrock_z_rate(x1, x2, x3, z, ctrl);
    const auto w = wingrock_intermediates(x1, x2, x3, z, c, 14.0);
    EXPECT_GE(zr, 0.0);
    if (w.V <= ctrl.eps()) {
      EXPECT_EQ(zr, 0.0);
    }
    EXPECT_GE(w.V, k * (x1 * x1 + x2 * x2) * (1 - 1e-12));
  }
}

TEST(WingRockDadsTest, JetEvaluationMatchesScalar) {
  const WingRockDadsController ctrl;
  const std::vector<double> p{0.3, -0.7, 1.1, 0.4};
  const JetVec j = LiftPoint(p, 1);
  const Jet u = wingrock_control(j[0], j[1], j[2], j[3], ctrl);
  EXPECT_EQ(u.value(), wingrock_control(p[0], p[1], p[2], p[3], ctrl));
  for (int i = 0; i < 4; ++i) {
    std::vector<double> hi = p, lo = p;
    hi[i] += 1e-6;
    lo[i] -= 1e-6;
    const double fd = (wingrock_control(hi[0], hi[1], hi[2], hi[3], ctrl) -
                       wingrock_control(lo[0], lo[1], lo[2], lo[3], ctrl)) / 2e-6;
    EXPECT_NEAR(u.partial(i), fd, 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST(WingRockDadsTest, MutationFlipsOnlyXiTerm) {
  const WingRockDadsController ok;
  const WingRockDadsController bad(0.5, 14.0, 20.0, 0.01, true);
  const double x1 = 0.2, x2 = 0.1, x3 = 0.3, z = 0.0;
  const auto w = wingrock_intermediates(x1, x2, x3, z, 0.5, 14.0);
  const double rho2 = w.rho * w.rho;
  const double inner = 1.0 + 9.0 * 14.0 * rho2 * w.L;
  const double term = 42.0 * 0.5 * 2.0 * rho2 * w.L * inner * inner * w.xi;
  EXPECT_NEAR(wingrock_control(x1, x2, x3, z, bad) -
                  wingrock_control(x1, x2, x3, z, ok),
              2.0 * term, 1e-9 * std::abs(term));
}

TEST(WingRockDadsTest, ConstructorRejectsBadParameters) {
  EXPECT_THROW(WingRockDadsController(0.4, 14.0, 20.0, 0.01),
               std::invalid_argument);
  EXPECT_THROW(WingRockDadsController(0.5, 13.9, 20.0, 0.01),
               std::invalid_argument);
  EXPECT_THROW(WingRockDadsController(0.5, 14.0, 0.0, 0.01),
               std::invalid_argument);
  EXPECT_THROW(WingRockDadsController(0.5, 14.0, 20.0, 0.0),
               std::invalid_argument);
  EXPECT_NO_THROW(WingRockDadsController(1.0, 28.0, 1.0, 1.0));
}

TEST(SigmaModTest, OriginAndLeakage) {
  const SigmaModController ctrl;
  const auto o = sigma_mod_control(0.0, 0.0, 0.0, {0.0, 0.0, 0.0, 0.0}, ctrl);
  EXPECT_EQ(o.u, 0.0);
  EXPECT_EQ(o.chi, 0.0);
  EXPECT_EQ(o.zeta, 0.0);
  for (double w : o.w) EXPECT_EQ(w, 0.0);

  const auto leak = sigma_mod_control(0.0, 0.0, 0.0, {1.0, 0.0, 0.0, 0.0}, ctrl);
  EXPECT_DOUBLE_EQ(leak.w[0], -0.4);
  EXPECT_EQ(leak.w[1], 0.0);
  EXPECT_EQ(leak.w[2], 0.0);
  EXPECT_EQ(leak.w[3], 0.0);

  const SigmaModController no_leak(0.5, 20.0, 14.0, 0.0);
  const auto still = sigma_mod_control(0.0, 0.0, 0.0, {3.0, -1.0, 2.0, 5.0}, no_leak);
  for (double w : still.w) EXPECT_EQ(w, 0.0);
}

TEST(SigmaModTest, HandEvaluated) {
  // x = (1, 0, 0), thetahat = 0, c = 0.5, K = 14, Gamma = 20, sigma = 0.4:
  // zeta = 1, chi = 14 + 1 = 15, phi = 15, drive = 20 (1 + 225) = 4520.
  const SigmaModController ctrl;
  const auto o = sigma_mod_control(1.0, 0.0, 0.0, {0.0, 0.0, 0.0, 0.0}, ctrl);
  EXPECT_DOUBLE_EQ(o.zeta, 1.0);
  EXPECT_DOUBLE_EQ(o.chi, 15.0);
  EXPECT_DOUBLE_EQ(o.phi, 15.0);
  EXPECT_DOUBLE_EQ(o.w[0], 4520.0);
  EXPECT_DOUBLE_EQ(o.w[1], 0.0);
  // u = -(4520 + 1) - 0 - 0 - 15 * 0 - (14 + 225) * 15
  EXPECT_DOUBLE_EQ(o.u, -4521.0 - 3585.0);
  const std::vector<double> theta{1.0, 0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(
      sigma_mod_lyapunov(1.0, 0.0, 0.0, {0.0, 0.0, 0.0, 0.0}, theta, ctrl),
      0.5 + 0.5 + 112.5 + 1.0 / 40.0);
}

TEST(SigmaModTest, ConstructorRejectsBadParameters) {
  EXPECT_THROW(SigmaModController(0.5, 20.0, 1.9, 0.4), std::invalid_argument);
  EXPECT_THROW(SigmaModController(0.5, 20.0, 14.0, -0.1), std::invalid_argument);
  EXPECT_THROW(SigmaModController(0.0, 20.0, 14.0, 0.4), std::invalid_argument);
  EXPECT_THROW(SigmaModController(0.5, 0.0, 14.0, 0.4), std::invalid_argument);
}

TEST(SynthesizedControllerTest, OriginAndMonotoneGain) {
  const DadsGains gains;
  const SynthesisResult res =
      synthesize(WingRockSystem(), gains, WingRockMajorants());
  const SynthesizedDadsController ctrl(res, gains);
  EXPECT_EQ(ctrl.state_dim(), 3);
  const std::vector<double> zero(3, 0.0);
  for (double z : {-3.0, 0.0, 2.0}) {
    const auto out = synthesized_control(zero, z, ctrl);
    EXPECT_EQ(out.u, 0.0);
    EXPECT_EQ(out.z_rate, 0.0);
  }
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> s{box(rng), box(rng), box(rng)};
    EXPECT_GE(synthesized_control(s, box(rng), ctrl).z_rate, 0.0);
  }
  const std::vector<double> bad(2, 0.0);
  EXPECT_THROW(synthesized_control(bad, 0.0, ctrl), std::invalid_argument);
}

}  // namespace
}  // namespace dads
