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

#include "dads/commands.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "dads/verifier.h"

namespace dads {
namespace {

namespace fs = std::filesystem;

constexpr double kStatsTail = 0.2;

std::string OutputDir(const Scenario& sc, const CommandOptions& opts) {
  return opts.out ? *opts.out : sc.output_dir;
}

std::ofstream OpenOutput(const std::string& dir, const std::string& file) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / file;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  return os;
}

DadsGains EstimateGains(const Scenario& sc) {
  if (sc.controller.kind == ControllerKind::kDadsSynthesized) return BuildGains(sc);
  // Closed-form wing-rock law: a = 2, b = 1, kappa = lambda = identity.
  DadsGains g;
  g.c = sc.controller.c;
  g.gamma = sc.controller.gamma;
  g.eps_dz = sc.controller.eps;
  return g;
}

// Maps exceptions of a command body to exit codes.
template <typename F>
int Guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const MajorantViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitMajorant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

std::string StatsLine(const std::string& name, const TrajectoryStats& st) {
  std::ostringstream os;
  os << std::setprecision(8) << name << ": sup_output_tail "
     << st.sup_output_tail << ", sup_gain " << st.sup_gain << ", final_ctrl "
     << st.final_ctrl << ", control_energy " << st.control_energy;
  return os.str();
}

}  // namespace

Scenario LoadWithOverrides(const std::string& path, const CommandOptions& opts) {
  Scenario sc = LoadScenario(path);
  if (opts.seed) sc.seed = *opts.seed;
  if (opts.dt) sc.sim.dt = *opts.dt;
  if (opts.t_end) sc.sim.t_end = *opts.t_end;
  try {
    sc.sim.Validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what(), 0);
  }
  return sc;
}

std::vector<CheckReport> RunChecks(const Scenario& sc) {
  std::vector<CheckReport> reports;
  std::optional<TrajectoryLog> log;
  std::shared_ptr<const ClosedLoop> loop;
  auto trajectory = [&]() -> const TrajectoryLog& {
    if (!log) {
      if (!loop) loop = BuildLoop(sc);
      log = simulate(*loop, sc.sim);
    }
    return *log;
  };
  const ControllerConfig& c = sc.controller;
  for (const CheckConfig& ch : sc.checks) {
    if (ch.name == "dissipation") {
      switch (c.kind) {
        case ControllerKind::kDadsWingRock:
          reports.push_back(check_wingrock_dissipation(
              WingRockDadsController(c.c, c.K, c.gamma, c.eps, c.flip_xi_term),
              ch.samples, ch.tolerance, sc.seed));
          break;
        case ControllerKind::kSigmaMod:
          reports.push_back(check_sigma_mod_dissipation(
              SigmaModController(c.c, c.gamma, c.K, c.sigma), ch.samples,
              ch.tolerance, sc.seed));
          break;
        case ControllerKind::kDadsSynthesized: {
          const StrictFeedbackSystem sys = BuildSystem(sc);
          const DadsGains gains = BuildGains(sc);
          const SynthesisResult res = synthesize(
              sys, gains, BuildMajorants(sc, sys), BuildSynthesisOptions(sc));
          reports.push_back(StageCertificate(sys, res.stage_trace.back(), gains,
                                             ch.samples, ch.tolerance, sc.seed));
          break;
        }
      }
    } else if (ch.name == "estimates") {
      if (c.kind == ControllerKind::kSigmaMod) {
        throw ScenarioError("estimates need a deadzone-adapted controller", 0);
      }
      const TrajectoryLog& l = trajectory();
      for (CheckReport& r : check_trajectory_estimates(
               l, EstimateGains(sc), l.V.front(),
               SignalBounds{l.d_sup, l.theta_sup}, ch.tolerance)) {
        reports.push_back(std::move(r));
      }
    } else if (ch.name == "tradeoff") {
      if (c.kind != ControllerKind::kSigmaMod ||
          sc.sim.parameter.kind() != ParameterSignal::Kind::kConstant) {
        throw ScenarioError(
            "tradeoff needs the sigma-mod controller and a constant parameter", 0);
      }
      CheckReport r = check_sigma_tradeoff(
          trajectory(), sc.sim.parameter.Value(0.0),
          SigmaModController(c.c, c.gamma, c.K, c.sigma));
      r.tolerance = std::max(r.tolerance, ch.tolerance);
      r.Finalize();
      reports.push_back(r);
    } else if (ch.name == "vanishing") {
      reports.push_back(check_vanishing(trajectory(), ch.tolerance));
    }
  }
  return reports;
}

int cmd_simulate(const std::string& scenario_file, const CommandOptions& opts,
                 std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const Scenario sc = LoadWithOverrides(scenario_file, opts);
    const TrajectoryLog log = simulate(*BuildLoop(sc), sc.sim);
    const std::string dir = OutputDir(sc, opts);
    std::ofstream csv = OpenOutput(dir, sc.name + ".csv");
    WriteTrajectoryCsv(log, csv);
    out << StatsLine(sc.name, trajectory_stats(log, kStatsTail)) << "\n";
    out << "wrote " << (fs::path(dir) / (sc.name + ".csv")).string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_synthesize(const std::string& scenario_file, const CommandOptions& opts,
                   std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const Scenario sc = LoadWithOverrides(scenario_file, opts);
    const StrictFeedbackSystem sys = BuildSystem(sc);
    const DadsGains gains = BuildGains(sc);
    SynthesisResult res;
    try {
      res = synthesize(sys, gains, BuildMajorants(sc, sys), BuildSynthesisOptions(sc));
    } catch (const MajorantViolation& e) {
      std::ostringstream w;
      w << std::setprecision(10) << "majorant " << e.check().name << " (level "
        << e.check().level << ") violated, margin " << e.check().worst_margin
        << " at";
      for (double v : e.check().witness) w << ' ' << v;
      err << "error: " << w.str() << "\n";
      return static_cast<int>(kExitMajorant);
    }
    std::vector<CheckReport> certs;
    for (const DadsStage& st : res.stage_trace) {
      const bool last = st.level == res.stage_trace.back().level;
      certs.push_back(StageCertificate(sys, st, gains, last ? 500 : 200,
                                       last ? 1e-7 : 1e-6, sc.seed));
      certs.push_back(ComparisonCertificate(st, 200, 1e-9, sc.seed));
    }
    const std::string report = SynthesisReport(res, certs);
    const std::string dir = OutputDir(sc, opts);
    std::ofstream file = OpenOutput(dir, sc.name + "_synthesis.txt");
    file << report;
    out << report;
    for (const CheckReport& c : certs) {
      if (!c.passed) return static_cast<int>(kExitCheckFailed);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const std::string& scenario_file, const CommandOptions& opts,
               std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const Scenario sc = LoadWithOverrides(scenario_file, opts);
    if (sc.checks.empty()) throw ScenarioError("scenario lists no [checks]", 0);
    const std::vector<CheckReport> reports = RunChecks(sc);
    const std::string dir = OutputDir(sc, opts);
    std::ofstream csv = OpenOutput(dir, sc.name + "_checks.csv");
    WriteReportsCsv(reports, csv);
    out << FormatReports(reports);
    for (const CheckReport& r : reports) {
      if (!r.passed) return static_cast<int>(kExitCheckFailed);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_compare(const std::vector<std::string>& scenario_files,
                const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  return Guarded(err, [&] {
    if (scenario_files.size() < 2) {
      throw ScenarioError("compare needs at least two scenarios", 0);
    }
    std::vector<Scenario> scs;
    for (const std::string& f : scenario_files) {
      scs.push_back(LoadWithOverrides(f, opts));
    }
    for (const Scenario& sc : scs) {
      if (!(sc.system == scs[0].system)) {
        throw ScenarioError(sc.name + ": different system", 0);
      }
      if (sc.sim.t_end != scs[0].sim.t_end || sc.sim.dt != scs[0].sim.dt) {
        throw ScenarioError(sc.name + ": horizon or step differs", 0);
      }
    }
    std::vector<BatchJob> jobs;
    for (const Scenario& sc : scs) jobs.push_back({BuildLoop(sc), sc.sim});
    const std::vector<BatchResult> results = batch_simulate(jobs);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].log) {
        err << "error: " << scs[i].name << ": " << results[i].error << "\n";
        return static_cast<int>(results[i].diverged_at ? kExitDivergence : kExitError);
      }
    }

    std::ostringstream table;
    table << "scenario,controller,sup_output_tail,sup_gain,final_ctrl,"
             "control_energy,control_energy_from_1s,gain\n"
          << std::setprecision(10);
    for (std::size_t i = 0; i < scs.size(); ++i) {
      const TrajectoryLog& log = *results[i].log;
      const TrajectoryStats st = trajectory_stats(log, kStatsTail);
      const bool drift = GainTailGrowth(log) >= 0.01;
      table << scs[i].name << ',' << ControllerKindName(scs[i].controller.kind)
            << ',' << st.sup_output_tail << ',' << st.sup_gain << ','
            << st.final_ctrl << ',' << st.control_energy << ','
            << control_energy(log, 1.0) << ',' << (drift ? "drift" : "bounded") << '\n';
    }
    out << table.str();
    const std::string dir = OutputDir(scs[0], opts);
    std::ofstream csv = OpenOutput(dir, "compare.csv");
    csv << table.str();

    int dads = -1, leak = -1, plain = -1;
    for (std::size_t i = 0; i < scs.size(); ++i) {
      const ControllerConfig& c = scs[i].controller;
      const int idx = static_cast<int>(i);
      if (c.kind == ControllerKind::kDadsWingRock && dads < 0) dads = idx;
      if (c.kind == ControllerKind::kSigmaMod && c.sigma > 0 && leak < 0) leak = idx;
      if (c.kind == ControllerKind::kSigmaMod && c.sigma == 0 && plain < 0) plain = idx;
    }
    if (dads >= 0 && leak >= 0 && plain >= 0) {
      const bool expect_drift = scs[dads].sim.disturbance.kind() !=
                                DisturbanceProfile::Kind::kZero;
      const CheckReport r = check_drift_contrast(
          *results[dads].log, *results[plain].log, *results[leak].log, expect_drift);
      out << FormatReports({r});
      if (!r.passed) return static_cast<int>(kExitCheckFailed);
    }
    return static_cast<int>(kExitOk);
  });
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Deadzone-adapted disturbance suppression toolkit"};
  app.require_subcommand(1);
  CommandOptions opts;
  std::uint64_t seed = 0;
  double dt = 0.0, t_end = 0.0;
  std::string out_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Sampling seed");
    sub->add_option("--dt", dt, "Integration step");
    sub->add_option("--t-end", t_end, "Horizon");
    sub->add_option("--out", out_dir, "Output directory");
  };
  std::string file;
  std::vector<std::string> files;
  CLI::App* sim = app.add_subcommand("simulate", "Simulate a scenario, write CSV");
  CLI::App* syn = app.add_subcommand("synthesize", "Run the recursive synthesis");
  CLI::App* ver = app.add_subcommand("verify", "Run the scenario's checks");
  CLI::App* cmp = app.add_subcommand("compare", "Compare scenarios side by side");
  for (CLI::App* sub : {sim, syn, ver}) {
    sub->add_option("scenario", file, "Scenario file")->required();
    add_common(sub);
  }
  cmp->add_option("scenarios", files, "Scenario files")->required();
  add_common(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, err);
    (void)code;
    return kExitUsage;
  }
  for (CLI::App* sub : {sim, syn, ver, cmp}) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--dt")) opts.dt = dt;
    if (sub->count("--t-end")) opts.t_end = t_end;
    if (sub->count("--out")) opts.out = out_dir;
  }
  if (*sim) return cmd_simulate(file, opts, out, err);
  if (*syn) return cmd_synthesize(file, opts, out, err);
  if (*ver) return cmd_verify(file, opts, out, err);
  return cmd_compare(files, opts, out, err);
}

}  // namespace dads
