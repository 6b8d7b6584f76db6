#include "dads/scenario.h"

#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "dads/wingrock.h"

namespace dads {
namespace {

const std::string kDir = DADS_SCENARIO_DIR;

constexpr const char* kInline = R"(
[scenario]
name = cascade

[system]
builtin =
integrators = 1
p = 1
l = 1
theta_set = ball 1
outputs = 0
levels = 1

[level.1]
h = 0
g = 1
phi = 0
alpha = 1
eta = 1

[controller]
kind = dads-synthesized

[sim]
t_end = 0.01
dt = 1e-3
plant_init = 0.5, 0

[majorants.1]
r = 1
)";

int ErrorLine(const std::string& text) {
  try {
    ParseScenario(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  return -1;
}

TEST(ScenarioTest, ShippedScenariosRoundTrip) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
    if (entry.path().extension() != ".scenario") continue;
    ++count;
    const Scenario sc = LoadScenario(entry.path().string());
    const std::string text = SerializeScenario(sc);
    const Scenario again = ParseScenario(text);
    EXPECT_EQ(again, sc) << entry.path();
    EXPECT_EQ(SerializeScenario(again), text);
  }
  EXPECT_EQ(count, 12);
}

TEST(ScenarioTest, DadsFigureScenario) {
  const Scenario sc = LoadScenario(kDir + "/fig1_dads.scenario");
  EXPECT_EQ(sc.name, "fig1_dads");
  EXPECT_EQ(sc.controller.kind, ControllerKind::kDadsWingRock);
  EXPECT_EQ(sc.controller.K, 14.0);
  EXPECT_EQ(sc.sim.integrator, Integrator::kRadauIIA);
  EXPECT_EQ(sc.sim.ctrl_init, std::vector<double>{-std::log(10.0)});
  EXPECT_EQ(sc.sim.plant_init, (std::vector<double>{1.0, -0.5, -18.0}));
  EXPECT_EQ(sc.sim.disturbance, DisturbanceProfile::Zero(2));
  EXPECT_EQ(sc.sim.parameter.Value(3.0), (std::vector<double>{20, 20, 2, 1}));
  ASSERT_EQ(sc.checks.size(), 1u);
  EXPECT_EQ(sc.checks[0].name, "estimates");
  EXPECT_EQ(sc.checks[0].tolerance, 1e-6);
  SimConfig expected = WingRockDadsConfig();
  expected.log_stride = 10;
  EXPECT_EQ(sc.sim, expected);
}

TEST(ScenarioTest, PersistentAndVanishingDisturbances) {
  const Scenario fig4 = LoadScenario(kDir + "/fig4_sigma0.scenario");
  EXPECT_EQ(fig4.controller.sigma, 0.0);
  EXPECT_EQ(fig4.sim.disturbance,
            DisturbanceProfile::SinusoidBank({20.0, 10.0}, {10.0, 20.0}));
  EXPECT_EQ(fig4.sim.ctrl_init, std::vector<double>(4, 0.0));
  const Scenario van = LoadScenario(kDir + "/vanishing.scenario");
  EXPECT_EQ(van.sim.disturbance.kind(), DisturbanceProfile::Kind::kVanishing);
  EXPECT_NEAR(van.sim.disturbance.Sample(1.0)[0], 20.0 * std::cos(10.0) / std::exp(1.0),
              1e-12);
  EXPECT_EQ(van.checks[0].name, "vanishing");
  EXPECT_EQ(van.checks[0].tolerance, 1e-3);
}

TEST(ScenarioTest, MinimalScenarioTakesDefaults) {
  const Scenario sc = ParseScenario("[scenario]\nname = m\n");
  EXPECT_EQ(sc.controller, ControllerConfig{});
  EXPECT_EQ(sc.sim, WingRockDadsConfig());
  EXPECT_EQ(sc.seed, kDefaultSeed);
  const Scenario sm = ParseScenario("[scenario]\nname = s\n[controller]\nkind = sigma-mod\n");
  EXPECT_EQ(sm.sim, WingRockSigmaModConfig());
}

TEST(ScenarioTest, ExpressionsAndComments) {
  const Scenario sc = ParseScenario(
      "# header\n[scenario]\nname = e  # trailing\nseed = 7\n"
      "[sim]\nt_end = 2*0.5\ndt = 1/1000\nctrl_init = -log(10)\n"
      "[disturbance]\nkind = table\ntimes = 0, 1\nvalues = 0, 0; 1, 2*pi\n");
  EXPECT_EQ(sc.seed, 7u);
  EXPECT_EQ(sc.sim.t_end, 1.0);
  EXPECT_EQ(sc.sim.dt, 0.001);
  EXPECT_NEAR(sc.sim.disturbance.Sample(0.5)[1], M_PI, 1e-15);
  EXPECT_EQ(ParseScenario(SerializeScenario(sc)), sc);
}

TEST(ScenarioTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[bogus]\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\njunk\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\nname = b\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[sim]\n\ndt = 1e-4 +\n"), 5);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[sim]\nstep = 1\n"), 4);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[controller]\nkind = pid\n"), 4);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[controller]\nK = 13\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[controller]\nc = 0.4\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[controller]\nkind = sigma-mod\nK = 1\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[sim]\nt_end = 1.00005\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[sim]\nplant_init = 1, 2\n"), 4);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[checks]\nfoo = 1\n"), 4);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[checks]\ndissipation = 1, 0\n"), 4);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[parameter]\nvalue = 1, 2\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[majorants.4]\nr = 1\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nname = a\n[majorants.2]\nr = x9\n"), 3);
  EXPECT_EQ(ErrorLine("[scenario]\nseed = 1\n"), 1);
  EXPECT_EQ(ErrorLine("name = a\n"), 1);
  EXPECT_THROW(LoadScenario(kDir + "/missing.scenario"), ScenarioError);
}

TEST(ScenarioTest, MajorantOverride) {
  const Scenario sc = LoadScenario(kDir + "/bad_majorant.scenario");
  ASSERT_EQ(sc.majorants.size(), 1u);
  const StrictFeedbackSystem sys = BuildSystem(sc);
  const MajorantPack pack = BuildMajorants(sc, sys);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_EQ(pack[2].r->EvaluateScalar(x), 0.001);
  EXPECT_EQ(pack[1].rho->EvaluateScalar(x), WingRockMajorants()[1].rho->EvaluateScalar(x));
  EXPECT_THROW(BuildLoop(sc), MajorantViolation);
}

TEST(ScenarioTest, InlineSystem) {
  const Scenario sc = ParseScenario(kInline);
  EXPECT_TRUE(sc.system.builtin.empty());
  EXPECT_EQ(ParseScenario(SerializeScenario(sc)), sc);
  const StrictFeedbackSystem sys = BuildSystem(sc);
  EXPECT_EQ(sys.state_dim(), 2);
  EXPECT_EQ(sys.StateNames(), (std::vector<std::string>{"x1", "y1"}));
  EXPECT_TRUE(sys.theta_set.Contains(std::vector<double>{0.5}));
  EXPECT_FALSE(sys.theta_set.Contains(std::vector<double>{1.5}));
  const auto loop = BuildLoop(sc);
  EXPECT_EQ(loop->plant_dim(), 2);
  EXPECT_EQ(sc.sim.parameter.Value(0.0), std::vector<double>{0.0});

  std::string broken = kInline;
  broken.replace(broken.find("h = 0"), 5, "h = y2");
  EXPECT_THROW(ParseScenario(broken), ScenarioError);
  std::string incomplete = kInline;
  incomplete.erase(incomplete.find("[majorants.1]"));
  EXPECT_THROW(ParseScenario(incomplete), ScenarioError);
}

}  // namespace
}  // namespace dads
