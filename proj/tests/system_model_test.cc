#include "dads/system_model.h"

#include <cmath>

#include <gtest/gtest.h>

#include "dads/expression.h"
#include "dads/wingrock.h"

namespace dads {
namespace {

TEST(SystemModelTest, WingRockShape) {
  const StrictFeedbackSystem sys = WingRockSystem();
  EXPECT_NO_THROW(sys.Validate());
  EXPECT_TRUE(sys.pure());
  EXPECT_EQ(sys.state_dim(), 3);
  EXPECT_EQ(sys.p, 4);
  EXPECT_EQ(sys.l, 2);
  EXPECT_EQ(sys.StateNames(), (std::vector<std::string>{"x1", "x2", "x3"}));
}

TEST(SystemModelTest, WingRockDynamics) {
  const StrictFeedbackSystem sys = WingRockSystem();
  const std::vector<double> x{0.5, -2.0, 1.5};
  const std::vector<double> theta{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> d{0.25, -0.5};
  const std::vector<double> f = eval_dynamics(sys, x, 7.0, theta, d);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f[0], -2.0);
  // 0.5 - 4 - 3 + 16 + 1.5 + 0.25
  EXPECT_DOUBLE_EQ(f[1], 11.25);
  EXPECT_DOUBLE_EQ(f[2], 6.5);
}

TEST(SystemModelTest, SubsystemReplacesTopCoordinate) {
  const StrictFeedbackSystem sys = WingRockSystem();
  const std::vector<double> x{0.5, -2.0};
  const JetVec xj = LiftPoint(x, 1);
  const std::vector<double> theta{1.0, 0.0, 0.0, 0.0};
  const std::vector<double> d{0.0, 0.0};
  const JetVec f =
      SubsystemDynamics(sys, 2, xj, ConstantLike(xj[0], 10.0), theta, d);
  EXPECT_DOUBLE_EQ(f[0].value(), -2.0);
  EXPECT_DOUBLE_EQ(f[1].value(), 10.5);
  EXPECT_DOUBLE_EQ(f[1].partial(0), 1.0);
  EXPECT_DOUBLE_EQ(f[0].partial(1), 1.0);
}

TEST(SystemModelTest, DimensionMismatchThrows) {
  const StrictFeedbackSystem sys = WingRockSystem();
  const std::vector<double> x{0.5, -2.0};
  const std::vector<double> theta(4, 0.0), d(2, 0.0);
  EXPECT_THROW(eval_dynamics(sys, x, 0.0, theta, d), std::invalid_argument);
  const std::vector<double> x3{0.0, 0.0, 0.0}, bad_theta(3, 0.0);
  EXPECT_THROW(eval_dynamics(sys, x3, 0.0, bad_theta, d),
               std::invalid_argument);
}

TEST(SystemModelTest, ValidateRejectsNonzeroDriftAtOrigin) {
  StrictFeedbackSystem sys = WingRockSystem();
  sys.levels[1].h = ExpressionMap("1 + x1", {"x1", "x2"});
  EXPECT_THROW(sys.Validate(), std::invalid_argument);
  sys = WingRockSystem();
  sys.levels[1].phi = ExpressionMap("x1, x2", {"x1", "x2"});
  EXPECT_THROW(sys.Validate(), std::invalid_argument);
}

TEST(SystemModelTest, MajorantValidation) {
  StrictFeedbackSystem sys = WingRockSystem();
  MajorantReport ok = validate_majorants(sys, 200);
  EXPECT_TRUE(ok.violations.empty());
  EXPECT_DOUBLE_EQ(ok.worst_margin_low, 0.0);

  sys.levels[1].eta = ExpressionMap("1 + x1^2", {"x1", "x2"});
  MajorantReport bad = validate_majorants(sys, 200);
  ASSERT_FALSE(bad.violations.empty());
  EXPECT_EQ(bad.violations[0].level, 2);
  EXPECT_EQ(bad.violations[0].which, "eta");
  EXPECT_LT(bad.worst_margin_low, 0.0);
}

TEST(SystemModelTest, MuViolationIsReported) {
  StrictFeedbackSystem sys = WingRockSystem();
  sys.levels[0].g = ExpressionMap("1 + t1^2", {"x1", "t1", "t2", "t3", "t4"});
  MajorantReport bad = validate_majorants(sys, 100);
  bool saw_mu = false;
  for (const auto& v : bad.violations) saw_mu |= v.which == "mu";
  EXPECT_TRUE(saw_mu);
}

TEST(DisturbanceTest, Kinds) {
  const auto zero = DisturbanceProfile::Zero(2);
  EXPECT_EQ(zero.Sample(3.0), (std::vector<double>{0.0, 0.0}));

  const auto bank = DisturbanceProfile::SinusoidBank({30.0, 2.0}, {1.0, 3.0});
  const auto d = sample_disturbance(bank, 0.5);
  EXPECT_DOUBLE_EQ(d[0], 30.0 * std::cos(0.5));
  EXPECT_DOUBLE_EQ(d[1], 2.0 * std::cos(1.5));

  const auto van = DisturbanceProfile::Vanishing({1.0}, {0.0}, 2.0);
  EXPECT_DOUBLE_EQ(van.Sample(1.0)[0], std::exp(-2.0));

  const auto table =
      DisturbanceProfile::CustomTable({0.0, 1.0, 3.0}, {{0.0}, {2.0}, {-2.0}});
  EXPECT_DOUBLE_EQ(table.Sample(0.5)[0], 1.0);
  EXPECT_DOUBLE_EQ(table.Sample(2.0)[0], 0.0);
  EXPECT_DOUBLE_EQ(table.Sample(10.0)[0], -2.0);
}

TEST(DisturbanceTest, DeterministicAndValidated) {
  const auto bank = DisturbanceProfile::SinusoidBank({1.0}, {2.0});
  EXPECT_EQ(bank.Sample(1.234), bank.Sample(1.234));
  EXPECT_THROW(bank.Sample(-1e-9), std::invalid_argument);
  EXPECT_THROW(DisturbanceProfile::SinusoidBank({1.0}, {}),
               std::invalid_argument);
  EXPECT_THROW(DisturbanceProfile::Vanishing({1.0}, {1.0}, 0.0),
               std::invalid_argument);
  EXPECT_THROW(DisturbanceProfile::CustomTable({0.0, 0.0}, {{1.0}, {2.0}}),
               std::invalid_argument);
}

TEST(ParameterSignalTest, ConstantAndTable) {
  const auto c = ParameterSignal::Constant({1.0, 2.0});
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.Value(100.0), (std::vector<double>{1.0, 2.0}));
  const auto t = ParameterSignal::Table({0.0, 2.0}, {{0.0}, {4.0}});
  EXPECT_DOUBLE_EQ(t.Value(0.5)[0], 1.0);
  EXPECT_THROW(t.CheckAdmissible(ThetaSet::Ball(1, 3.0)),
               std::invalid_argument);
  EXPECT_NO_THROW(t.CheckAdmissible(ThetaSet::Ball(1, 5.0)));
}

TEST(ThetaSetTest, BallSamplesAreMembers) {
  const ThetaSet ball = ThetaSet::Ball(3, 2.0);
  std::mt19937_64 rng(kDefaultSeed);
  for (int i = 0; i < 200; ++i) {
    const auto th = ball.Sample(rng);
    EXPECT_TRUE(ball.Contains(th));
  }
  const std::vector<double> far{3.0, 0.0, 0.0};
  EXPECT_FALSE(ball.Contains(far));
  const std::vector<double> wrong_dim{0.0};
  EXPECT_FALSE(ball.Contains(wrong_dim));
}

}  // namespace
}  // namespace dads
