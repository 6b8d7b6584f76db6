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

#include "dads/scenario.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "dads/expression.h"
#include "dads/wingrock.h"

namespace dads {
namespace {

struct Entry {
  std::string value;
  int line = 0;
};

// section -> key -> entry, plus the line of each section header.
struct RawScenario {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> header_lines;
  std::vector<std::string> check_order;
};

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool IsIndexedSection(const std::string& name, const std::string& prefix,
                      int* index) {
  if (name.rfind(prefix + ".", 0) != 0) return false;
  const std::string rest = name.substr(prefix.size() + 1);
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit)) {
    return false;
  }
  *index = std::stoi(rest);
  return *index >= 1;
}

bool KnownSection(const std::string& name) {
  static const std::set<std::string> plain{
      "scenario", "system",    "controller", "sim",
      "disturbance", "parameter", "checks"};
  int idx = 0;
  return plain.count(name) || IsIndexedSection(name, "level", &idx) ||
         IsIndexedSection(name, "majorants", &idx);
}

RawScenario Tokenize(const std::string& text) {
  RawScenario raw;
  std::istringstream is(text);
  std::string line_text, section;
  int line = 0;
  while (std::getline(is, line_text)) {
    ++line;
    const std::size_t hash = line_text.find('#');
    const std::string s = Trim(std::string_view(line_text).substr(
        0, hash == std::string::npos ? line_text.size() : hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ScenarioError("unterminated section header", line);
      section = Trim(std::string_view(s).substr(1, s.size() - 2));
      if (!KnownSection(section)) {
        throw ScenarioError("unknown section [" + section + "]", line);
      }
      if (raw.header_lines.count(section)) {
        throw ScenarioError("duplicate section [" + section + "]", line);
      }
      raw.header_lines[section] = line;
      raw.sections[section];
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError("expected 'key = value'", line);
    }
    if (section.empty()) {
      throw ScenarioError("key outside of any section", line);
    }
    const std::string key = Trim(std::string_view(s).substr(0, eq));
    const std::string value = Trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ScenarioError("empty key", line);
    auto& keys = raw.sections[section];
    if (keys.count(key)) throw ScenarioError("duplicate key '" + key + "'", line);
    keys[key] = Entry{value, line};
    if (section == "checks") raw.check_order.push_back(key);
  }
  return raw;
}

// Reads the keys of one section and rejects the ones nobody asked for.
class SectionReader {
 public:
  SectionReader(const RawScenario& raw, const std::string& section)
      : section_(section) {
    const auto it = raw.sections.find(section);
    if (it != raw.sections.end()) entries_ = &it->second;
    const auto h = raw.header_lines.find(section);
    header_line_ = h == raw.header_lines.end() ? 0 : h->second;
  }

  bool present() const { return entries_ != nullptr; }
  int header_line() const { return header_line_; }

  const Entry* Find(const std::string& key) {
    used_.insert(key);
    if (!entries_) return nullptr;
    const auto it = entries_->find(key);
    return it == entries_->end() ? nullptr : &it->second;
  }
  int Line(const std::string& key) {
    const Entry* e = Find(key);
    return e ? e->line : header_line_;
  }

  void String(const std::string& key, std::string* out) {
    if (const Entry* e = Find(key)) *out = e->value;
  }
  void Number(const std::string& key, double* out) {
    if (const Entry* e = Find(key)) *out = Eval(*e, [](auto v) { return EvaluateNumber(v); });
  }
  void Integer(const std::string& key, int* out) {
    if (const Entry* e = Find(key)) {
      const double v = Eval(*e, [](auto t) { return EvaluateNumber(t); });
      if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ScenarioError("'" + key + "' must be an integer", e->line);
      }
      *out = static_cast<int>(v);
    }
  }
  void List(const std::string& key, std::vector<double>* out) {
    if (const Entry* e = Find(key)) {
      *out = e->value.empty()
                 ? std::vector<double>{}
                 : Eval(*e, [](auto v) { return EvaluateNumberList(v); });
    }
  }
  void Bool(const std::string& key, bool* out) {
    if (const Entry* e = Find(key)) {
      if (e->value == "true") {
        *out = true;
      } else if (e->value == "false") {
        *out = false;
      } else {
        throw ScenarioError("'" + key + "' must be true or false", e->line);
      }
    }
  }
  /// Rows separated by ';', entries by ','.
  void Table(const std::string& key, std::vector<std::vector<double>>* out) {
    if (const Entry* e = Find(key)) {
      out->clear();
      for (const std::string& row : SplitTopLevel(e->value, ';')) {
        out->push_back(Eval(Entry{row, e->line},
                            [](auto v) { return EvaluateNumberList(v); }));
      }
    }
  }

  void RejectUnknown() const {
    if (!entries_) return;
    for (const auto& [key, e] : *entries_) {
      if (!used_.count(key)) {
        throw ScenarioError("unknown key '" + key + "' in [" + section_ + "]",
                            e.line);
      }
    }
  }

 private:
  template <typename F>
  auto Eval(const Entry& e, F f) -> decltype(f(std::string_view())) {
    try {
      return f(e.value);
    } catch (const std::exception& ex) {
      throw ScenarioError("bad value '" + e.value + "': " + ex.what(), e.line);
    }
  }

  std::string section_;
  const std::map<std::string, Entry>* entries_ = nullptr;
  int header_line_ = 0;
  std::set<std::string> used_;
};

ControllerKind ParseKind(const std::string& s, int line) {
  if (s == "dads-wingrock") return ControllerKind::kDadsWingRock;
  if (s == "sigma-mod") return ControllerKind::kSigmaMod;
  if (s == "dads-synthesized") return ControllerKind::kDadsSynthesized;
  throw ScenarioError("unknown controller kind '" + s + "'", line);
}

void ValidateController(const ControllerConfig& c) {
  switch (c.kind) {
    case ControllerKind::kDadsWingRock:
      WingRockDadsController(c.c, c.K, c.gamma, c.eps, c.flip_xi_term);
      break;
    case ControllerKind::kSigmaMod:
      SigmaModController(c.c, c.gamma, c.K, c.sigma);
      break;
    case ControllerKind::kDadsSynthesized: {
      DadsGains g;
      g.b = c.b;
      g.gamma = c.gamma;
      g.eps_dz = c.eps;
      g.c = c.c;
      g.a = c.a;
      g.Validate();
      break;
    }
  }
}

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string NumList(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += Num(v[i]);
  }
  return s;
}

std::string TableText(const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) s += "; ";
    s += NumList(rows[i]);
  }
  return s;
}

std::vector<std::string> Names(const std::vector<std::string>& all, int n) {
  return std::vector<std::string>(all.begin(), all.begin() + n);
}

SmoothMap ParseMap(const std::string& text, const std::vector<std::string>& vars,
                   const std::string& name) {
  try {
    return ExpressionMap(text, vars, 64, name);
  } catch (const ExpressionError& e) {
    throw ScenarioError(name + ": " + e.what() + " at column " +
                            std::to_string(e.column()),
                        0);
  }
}

std::string Zeros(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += i ? ", 0" : "0";
  return s;
}

ThetaSet ParseThetaSet(const std::string& text, int p) {
  std::istringstream is(text);
  std::string kind;
  double value = 0.0;
  if (!(is >> kind >> value) || value <= 0.0) {
    throw ScenarioError("theta_set must be 'whole <box>' or 'ball <radius>'", 0);
  }
  if (kind == "whole") return ThetaSet::Whole(p, value);
  if (kind == "ball") return ThetaSet::Ball(p, value);
  throw ScenarioError("unknown theta_set kind '" + kind + "'", 0);
}

// Re-throws a ScenarioError without a line at `line`.
template <typename F>
auto AtLine(int line, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScenarioError& e) {
    if (e.line() != 0) throw;
    throw ScenarioError(e.what(), line);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what(), line);
  }
}

}  // namespace

ScenarioError::ScenarioError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

std::string ControllerKindName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kDadsWingRock:
      return "dads-wingrock";
    case ControllerKind::kSigmaMod:
      return "sigma-mod";
    case ControllerKind::kDadsSynthesized:
      return "dads-synthesized";
  }
  return "";
}

Scenario ParseScenario(const std::string& text) {
  const RawScenario raw = Tokenize(text);
  Scenario sc;

  SectionReader head(raw, "scenario");
  head.String("name", &sc.name);
  head.String("output_dir", &sc.output_dir);
  if (const Entry* e = head.Find("seed")) {
    try {
      std::size_t used = 0;
      sc.seed = std::stoull(e->value, &used);
      if (used != e->value.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ScenarioError("seed must be a non-negative integer", e->line);
    }
  }
  head.RejectUnknown();
  if (sc.name.empty()) throw ScenarioError("[scenario] name is required", head.header_line());

  SectionReader sys(raw, "system");
  sys.String("builtin", &sc.system.builtin);
  sys.String("name", &sc.system.name);
  sys.Integer("integrators", &sc.system.integrators);
  sys.Integer("p", &sc.system.p);
  sys.Integer("l", &sc.system.l);
  sys.String("theta_set", &sc.system.theta_set);
  std::vector<double> outputs;
  sys.List("outputs", &outputs);
  for (double o : outputs) sc.system.outputs.push_back(static_cast<int>(o));
  int n_levels = 0;
  sys.Integer("levels", &n_levels);
  const int sys_line = sys.header_line();
  sys.RejectUnknown();
  if (sc.system.builtin == "wingrock") {
    sc.system = SystemConfig{};
    for (const auto& [name, _] : raw.sections) {
      int idx = 0;
      if (IsIndexedSection(name, "level", &idx)) {
        throw ScenarioError("[" + name + "] needs an inline system",
                            raw.header_lines.at(name));
      }
    }
  } else if (sc.system.builtin.empty()) {
    if (n_levels < 1) throw ScenarioError("inline system needs levels >= 1", sys_line);
    for (int j = 1; j <= n_levels; ++j) {
      SectionReader lv(raw, "level." + std::to_string(j));
      if (!lv.present()) {
        throw ScenarioError("missing [level." + std::to_string(j) + "]", sys_line);
      }
      LevelConfig item;
      lv.String("h", &item.h);
      lv.String("g", &item.g);
      lv.String("phi", &item.phi);
      lv.String("alpha", &item.alpha);
      lv.String("eta", &item.eta);
      lv.String("mu", &item.mu);
      lv.RejectUnknown();
      sc.system.levels.push_back(item);
    }
    for (const auto& [name, line] : raw.header_lines) {
      int idx = 0;
      if (IsIndexedSection(name, "level", &idx) && idx > n_levels) {
        throw ScenarioError("[" + name + "] beyond levels", line);
      }
    }
  } else {
    throw ScenarioError("unknown built-in system '" + sc.system.builtin + "'",
                        sys_line);
  }

  SectionReader ctl(raw, "controller");
  std::string kind = ControllerKindName(sc.controller.kind);
  ctl.String("kind", &kind);
  sc.controller.kind = ParseKind(kind, ctl.Line("kind"));
  ctl.Number("c", &sc.controller.c);
  ctl.Number("K", &sc.controller.K);
  ctl.Number("gamma", &sc.controller.gamma);
  ctl.Number("eps", &sc.controller.eps);
  ctl.Number("sigma", &sc.controller.sigma);
  ctl.Number("a", &sc.controller.a);
  ctl.Number("b", &sc.controller.b);
  ctl.Bool("flip_xi_term", &sc.controller.flip_xi_term);
  ctl.RejectUnknown();
  AtLine(ctl.header_line(), [&] { ValidateController(sc.controller); });
  if (sc.controller.kind != ControllerKind::kDadsSynthesized &&
      sc.system.builtin.empty()) {
    throw ScenarioError("closed-form controllers need the wingrock system",
                        ctl.header_line());
  }

  const StrictFeedbackSystem plant =
      AtLine(sys_line, [&] { return BuildSystem(sc); });

  sc.sim = sc.controller.kind == ControllerKind::kSigmaMod
               ? WingRockSigmaModConfig()
               : WingRockDadsConfig();
  if (sc.system.builtin.empty()) {
    sc.sim.plant_init.assign(plant.state_dim(), 0.0);
    sc.sim.disturbance = DisturbanceProfile::Zero(plant.l);
    sc.sim.parameter = ParameterSignal::Constant(std::vector<double>(plant.p, 0.0));
  }
  SectionReader sim(raw, "sim");
  sim.Number("t_end", &sc.sim.t_end);
  sim.Number("dt", &sc.sim.dt);
  sim.Integer("log_stride", &sc.sim.log_stride);
  std::string integrator =
      sc.sim.integrator == Integrator::kRk4 ? "rk4" : "radau";
  sim.String("integrator", &integrator);
  if (integrator == "rk4") {
    sc.sim.integrator = Integrator::kRk4;
  } else if (integrator == "radau") {
    sc.sim.integrator = Integrator::kRadauIIA;
  } else {
    throw ScenarioError("integrator must be rk4 or radau", sim.Line("integrator"));
  }
  sim.List("plant_init", &sc.sim.plant_init);
  sim.List("ctrl_init", &sc.sim.ctrl_init);
  sim.RejectUnknown();
  AtLine(sim.header_line(), [&] { sc.sim.Validate(); });
  const int ctrl_dim = sc.controller.kind == ControllerKind::kSigmaMod ? 4 : 1;
  if (static_cast<int>(sc.sim.plant_init.size()) != plant.state_dim()) {
    throw ScenarioError("plant_init has the wrong dimension", sim.Line("plant_init"));
  }
  if (static_cast<int>(sc.sim.ctrl_init.size()) != ctrl_dim) {
    throw ScenarioError("ctrl_init has the wrong dimension", sim.Line("ctrl_init"));
  }

  SectionReader dist(raw, "disturbance");
  if (dist.present()) {
    std::string dk = "zero";
    dist.String("kind", &dk);
    const int line = dist.header_line();
    std::vector<double> amp, freq, times;
    std::vector<std::vector<double>> rows;
    double decay = 0.0;
    int channels = plant.l;
    dist.List("amplitude", &amp);
    dist.List("frequency", &freq);
    dist.Number("decay", &decay);
    dist.List("times", &times);
    dist.Table("values", &rows);
    dist.Integer("channels", &channels);
    dist.RejectUnknown();
    AtLine(line, [&] {
      if (dk == "zero") {
        sc.sim.disturbance = DisturbanceProfile::Zero(channels);
      } else if (dk == "sinusoid") {
        sc.sim.disturbance = DisturbanceProfile::SinusoidBank(amp, freq);
      } else if (dk == "vanishing") {
        sc.sim.disturbance = DisturbanceProfile::Vanishing(amp, freq, decay);
      } else if (dk == "table") {
        sc.sim.disturbance = DisturbanceProfile::CustomTable(times, rows);
      } else {
        throw ScenarioError("unknown disturbance kind '" + dk + "'", 0);
      }
    });
  }
  if (sc.sim.disturbance.channels() != plant.l) {
    throw ScenarioError("disturbance has the wrong number of channels",
                        dist.header_line());
  }

  SectionReader par(raw, "parameter");
  if (par.present()) {
    std::string pk = "constant";
    par.String("kind", &pk);
    std::vector<double> value, times;
    std::vector<std::vector<double>> rows;
    par.List("value", &value);
    par.List("times", &times);
    par.Table("values", &rows);
    par.RejectUnknown();
    AtLine(par.header_line(), [&] {
      if (pk == "constant") {
        sc.sim.parameter = ParameterSignal::Constant(value);
      } else if (pk == "table") {
        sc.sim.parameter = ParameterSignal::Table(times, rows);
      } else {
        throw ScenarioError("unknown parameter kind '" + pk + "'", 0);
      }
    });
  }
  if (sc.sim.parameter.dim() != plant.p) {
    throw ScenarioError("parameter has the wrong dimension", par.header_line());
  }
  AtLine(par.header_line(), [&] { sc.sim.parameter.CheckAdmissible(plant.theta_set); });

  SectionReader chk(raw, "checks");
  for (const std::string& name : raw.check_order) {
    const int line = chk.Line(name);
    static const std::set<std::string> known{"dissipation", "estimates",
                                             "tradeoff", "vanishing"};
    if (!known.count(name)) throw ScenarioError("unknown check '" + name + "'", line);
    const std::string value = raw.sections.at("checks").at(name).value;
    const std::vector<std::string> parts = SplitTopLevel(value);
    CheckConfig item;
    item.name = name;
    try {
      if (parts.empty() || parts.size() > 2) throw std::invalid_argument("arity");
      item.tolerance = EvaluateNumber(parts[0]);
      if (parts.size() == 2) {
        const double n = EvaluateNumber(parts[1]);
        if (n < 1 || n != std::floor(n)) throw std::invalid_argument("samples");
        item.samples = static_cast<int>(n);
      }
    } catch (const std::exception&) {
      throw ScenarioError("check value must be '<tolerance>[, <samples>]'", line);
    }
    if (item.tolerance < 0) throw ScenarioError("negative tolerance", line);
    sc.checks.push_back(item);
  }

  for (const auto& [name, line] : raw.header_lines) {
    int idx = 0;
    if (!IsIndexedSection(name, "majorants", &idx)) continue;
    if (idx > plant.num_levels()) {
      throw ScenarioError("[" + name + "] beyond the system's levels", line);
    }
    SectionReader mj(raw, name);
    MajorantConfig item;
    item.level = idx;
    mj.String("R", &item.R);
    mj.String("r", &item.r);
    mj.String("rho", &item.rho);
    mj.RejectUnknown();
    sc.majorants.push_back(item);
  }
  std::sort(sc.majorants.begin(), sc.majorants.end(),
            [](const auto& a, const auto& b) { return a.level < b.level; });
  if (!sc.majorants.empty() || sc.controller.kind == ControllerKind::kDadsSynthesized) {
    const int line = sc.majorants.empty()
                         ? ctl.header_line()
                         : raw.header_lines.at("majorants." +
                                               std::to_string(sc.majorants[0].level));
    AtLine(line, [&] { BuildMajorants(sc, plant); });
  }
  return sc;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseScenario(ss.str());
}

std::string SerializeScenario(const Scenario& sc) {
  std::ostringstream os;
  os << "[scenario]\nname = " << sc.name << "\noutput_dir = " << sc.output_dir
     << "\nseed = " << sc.seed << "\n\n[system]\n";
  if (!sc.system.builtin.empty()) {
    os << "builtin = " << sc.system.builtin << "\n";
  } else {
    const SystemConfig& s = sc.system;
    os << "builtin =\nname = " << s.name << "\nintegrators = " << s.integrators
       << "\np = " << s.p << "\nl = " << s.l << "\ntheta_set = " << s.theta_set
       << "\noutputs = ";
    for (std::size_t i = 0; i < s.outputs.size(); ++i) {
      os << (i ? ", " : "") << s.outputs[i];
    }
    os << "\nlevels = " << s.levels.size() << "\n";
    for (std::size_t j = 0; j < s.levels.size(); ++j) {
      const LevelConfig& l = s.levels[j];
      os << "\n[level." << j + 1 << "]\nh = " << l.h << "\ng = " << l.g
         << "\nphi = " << l.phi << "\nalpha = " << l.alpha << "\neta = " << l.eta
         << "\nmu = " << l.mu << "\n";
    }
  }
  const ControllerConfig& c = sc.controller;
  os << "\n[controller]\nkind = " << ControllerKindName(c.kind)
     << "\nc = " << Num(c.c) << "\nK = " << Num(c.K) << "\ngamma = " << Num(c.gamma)
     << "\neps = " << Num(c.eps) << "\nsigma = " << Num(c.sigma)
     << "\na = " << Num(c.a) << "\nb = " << Num(c.b)
     << "\nflip_xi_term = " << (c.flip_xi_term ? "true" : "false") << "\n";
  const SimConfig& m = sc.sim;
  os << "\n[sim]\nt_end = " << Num(m.t_end) << "\ndt = " << Num(m.dt)
     << "\nlog_stride = " << m.log_stride << "\nintegrator = "
     << (m.integrator == Integrator::kRk4 ? "rk4" : "radau")
     << "\nplant_init = " << NumList(m.plant_init)
     << "\nctrl_init = " << NumList(m.ctrl_init) << "\n";
  const DisturbanceProfile& d = m.disturbance;
  os << "\n[disturbance]\n";
  switch (d.kind()) {
    case DisturbanceProfile::Kind::kZero:
      os << "kind = zero\nchannels = " << d.channels() << "\n";
      break;
    case DisturbanceProfile::Kind::kSinusoidBank:
      os << "kind = sinusoid\namplitude = " << NumList(d.amplitude())
         << "\nfrequency = " << NumList(d.frequency()) << "\n";
      break;
    case DisturbanceProfile::Kind::kVanishing:
      os << "kind = vanishing\namplitude = " << NumList(d.amplitude())
         << "\nfrequency = " << NumList(d.frequency())
         << "\ndecay = " << Num(d.decay()) << "\n";
      break;
    case DisturbanceProfile::Kind::kCustomTable:
      os << "kind = table\ntimes = " << NumList(d.times())
         << "\nvalues = " << TableText(d.rows()) << "\n";
      break;
  }
  const ParameterSignal& p = m.parameter;
  os << "\n[parameter]\n";
  if (p.kind() == ParameterSignal::Kind::kConstant) {
    os << "kind = constant\nvalue = " << NumList(p.Value(0.0)) << "\n";
  } else {
    os << "kind = table\ntimes = " << NumList(p.times())
       << "\nvalues = " << TableText(p.rows()) << "\n";
  }
  if (!sc.checks.empty()) {
    os << "\n[checks]\n";
    for (const CheckConfig& ch : sc.checks) {
      os << ch.name << " = " << Num(ch.tolerance) << ", " << ch.samples << "\n";
    }
  }
  for (const MajorantConfig& mj : sc.majorants) {
    os << "\n[majorants." << mj.level << "]\n";
    if (!mj.R.empty()) os << "R = " << mj.R << "\n";
    if (!mj.r.empty()) os << "r = " << mj.r << "\n";
    if (!mj.rho.empty()) os << "rho = " << mj.rho << "\n";
  }
  return os.str();
}

StrictFeedbackSystem BuildSystem(const Scenario& scenario) {
  const SystemConfig& s = scenario.system;
  if (s.builtin == "wingrock") return WingRockSystem();
  if (s.integrators < 0 || s.p < 0 || s.l < 0) {
    throw ScenarioError("integrators, p and l must be non-negative", 0);
  }
  StrictFeedbackSystem sys;
  sys.name = s.name.empty() ? scenario.name : s.name;
  sys.integrators = s.integrators;
  sys.p = s.p;
  sys.l = s.l;
  sys.theta_set = ParseThetaSet(s.theta_set, s.p);
  sys.output_indices = s.outputs;
  sys.levels.resize(s.levels.size());
  const std::vector<std::string> names = sys.StateNames();
  std::vector<std::string> theta_names;
  for (int i = 0; i < s.p; ++i) theta_names.push_back("t" + std::to_string(i + 1));
  for (int idx : s.outputs) {
    if (idx < 0 || idx >= sys.state_dim()) {
      throw ScenarioError("output index out of range", 0);
    }
  }
  for (std::size_t j = 0; j < s.levels.size(); ++j) {
    const LevelConfig& l = s.levels[j];
    const std::string tag = std::to_string(j + 1);
    const std::vector<std::string> vars =
        Names(names, sys.prefix_dim(static_cast<int>(j) + 1));
    std::vector<std::string> gvars = vars;
    gvars.insert(gvars.end(), theta_names.begin(), theta_names.end());
    CascadeLevel& c = sys.levels[j];
    c.h = ParseMap(l.h, vars, "h" + tag);
    c.g = ParseMap(l.g, gvars, "g" + tag);
    c.phi = s.p == 0 ? SmoothMap(static_cast<int>(vars.size()), 0, 64,
                                 [](const JetVec&) { return JetVec{}; }, "phi" + tag)
                     : ParseMap(l.phi.empty() ? Zeros(s.p) : l.phi, vars, "phi" + tag);
    c.alpha = s.l == 0 ? SmoothMap(static_cast<int>(vars.size()), 0, 64,
                                   [](const JetVec&) { return JetVec{}; },
                                   "alpha" + tag)
                       : ParseMap(l.alpha.empty() ? Zeros(s.l) : l.alpha, vars,
                                  "alpha" + tag);
    c.eta = ParseMap(l.eta, vars, "eta" + tag);
    if (!l.mu.empty()) c.mu = ParseMap(l.mu, vars, "mu" + tag);
    if (c.phi.codim() != s.p) throw ScenarioError("phi" + tag + " needs p entries", 0);
    if (c.alpha.codim() != s.l) throw ScenarioError("alpha" + tag + " needs l entries", 0);
  }
  try {
    sys.Validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what(), 0);
  }
  return sys;
}

MajorantPack BuildMajorants(const Scenario& scenario,
                            const StrictFeedbackSystem& sys) {
  MajorantPack pack = scenario.system.builtin == "wingrock"
                          ? WingRockMajorants()
                          : MajorantPack(sys.num_levels());
  const std::vector<std::string> names = sys.StateNames();
  for (const MajorantConfig& m : scenario.majorants) {
    const int j = m.level;
    const std::string tag = std::to_string(j);
    if (j < 1 || j > sys.num_levels()) {
      throw ScenarioError("majorants for a missing level " + tag, 0);
    }
    StageMajorants& st = pack[j - 1];
    if (j == 1) {
      if (!m.R.empty() || !m.rho.empty()) {
        throw ScenarioError("level 1 takes only r", 0);
      }
      if (!m.r.empty()) st.r = ParseMap(m.r, Names(names, sys.prefix_dim(1)), "r1");
      continue;
    }
    const int D = sys.prefix_dim(j - 1);
    std::vector<std::string> xz = Names(names, D);
    xz.push_back("z");
    if (!m.R.empty()) st.R = ParseMap(m.R, xz, "R" + tag);
    if (!m.r.empty()) st.r = ParseMap(m.r, Names(names, D), "r" + tag);
    if (!m.rho.empty()) st.rho = ParseMap(m.rho, Names(names, D + 1), "rho" + tag);
  }
  for (int j = 1; j <= sys.num_levels(); ++j) {
    const StageMajorants& st = pack[j - 1];
    const bool complete = j == 1 ? st.r.has_value()
                                 : st.R.has_value() && st.r.has_value() &&
                                       st.rho.has_value();
    if (!complete) {
      throw ScenarioError("majorants for level " + std::to_string(j) +
                              " are incomplete",
                          0);
    }
  }
  return pack;
}

DadsGains BuildGains(const Scenario& scenario) {
  DadsGains g;
  g.b = scenario.controller.b;
  g.gamma = scenario.controller.gamma;
  g.eps_dz = scenario.controller.eps;
  g.c = scenario.controller.c;
  g.a = scenario.controller.a;
  return g;
}

SynthesisOptions BuildSynthesisOptions(const Scenario& scenario) {
  SynthesisOptions o;
  o.seed = scenario.seed;
  return o;
}

std::shared_ptr<const ClosedLoop> BuildLoop(const Scenario& scenario) {
  const ControllerConfig& c = scenario.controller;
  switch (c.kind) {
    case ControllerKind::kDadsWingRock:
      return std::make_shared<WingRockDadsLoop>(
          WingRockDadsController(c.c, c.K, c.gamma, c.eps, c.flip_xi_term));
    case ControllerKind::kSigmaMod:
      return std::make_shared<SigmaModLoop>(
          SigmaModController(c.c, c.gamma, c.K, c.sigma));
    case ControllerKind::kDadsSynthesized: {
      const StrictFeedbackSystem sys = BuildSystem(scenario);
      const DadsGains gains = BuildGains(scenario);
      const SynthesisResult res = synthesize(
          sys, gains, BuildMajorants(scenario, sys), BuildSynthesisOptions(scenario));
      return std::make_shared<SynthesizedLoop>(sys,
                                               SynthesizedDadsController(res, gains));
    }
  }
  throw std::logic_error("unreachable controller kind");
}

}  // namespace dads
