#include "csf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "csf/errors.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMmHg = 133.322387415;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

using UnitTable = std::map<std::string, double>;

const UnitTable kLength = {{"", 1.0}, {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}};
const UnitTable kArea = {{"", 1.0}, {"m2", 1.0}, {"cm2", 1e-4}, {"mm2", 1e-6}};
const UnitTable kFlow = {{"", 1.0},           {"m3/s", 1.0},          {"cm3/s", 1e-6},
                         {"ml/s", 1e-6},      {"cm3/min", 1e-6 / 60}, {"ml/min", 1e-6 / 60},
                         {"m3/min", 1.0 / 60}};
const UnitTable kPressure = {{"", 1.0}, {"pa", 1.0}, {"kpa", 1e3}, {"mmhg", kMmHg}};
const UnitTable kDensity = {{"", 1.0}, {"kg/m3", 1.0}, {"g/cm3", 1e3}};
const UnitTable kViscosity = {{"", 1.0}, {"pa*s", 1.0}, {"pa.s", 1.0}, {"mpa*s", 1e-3}, {"mpa.s", 1e-3}, {"cp", 1e-3}};
const UnitTable kStiffness = {{"", 1.0}, {"n/m", 1.0}};
const UnitTable kDamping = {{"", 1.0}, {"n*s/m", 1.0}, {"n.s/m", 1.0}};
const UnitTable kFrequency = {{"", 1.0}, {"rad/s", 1.0}, {"hz", 2.0 * kPi}, {"bpm", 2.0 * kPi / 60.0}};
const UnitTable kTime = {{"", 1.0}, {"s", 1.0}, {"ms", 1e-3}};
const UnitTable kRate = {{"", 1.0}, {"1/s", 1.0}};
const UnitTable kPlain = {{"", 1.0}};

const UnitTable& units_for(const std::string& field) {
  static const std::map<std::string, const UnitTable*> table = {
      {"rho", &kDensity},         {"mu", &kViscosity},      {"r_lumen", &kLength},
      {"delta_tissue", &kLength}, {"area", &kArea},         {"k_e", &kStiffness},
      {"k_d", &kDamping},         {"q_p", &kFlow},          {"p_tissue", &kPressure},
      {"alpha_bar", &kLength},    {"omega", &kFrequency},   {"length", &kLength},
      {"beta_over_rho", &kRate},  {"dt", &kTime},           {"t_end", &kTime},
  };
  auto it = table.find(field);
  return it == table.end() ? kPlain : *it->second;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  std::string section, key, value;
  int line;
};

double number(const Entry& e) {
  try {
    return parse_quantity(e.key, e.value);
  } catch (const UnitError&) {
    throw;
  } catch (const ConfigError& ex) {
    throw ParseError(e.line, ex.what());
  }
}

std::size_t count(const Entry& e) {
  const double v = number(e);
  if (v < 0 || v != std::floor(v)) throw ParseError(e.line, "'" + e.key + "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool boolean(const Entry& e) {
  const std::string v = lower(e.value);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ParseError(e.line, "'" + e.key + "' must be a boolean");
}

template <class T>
T choice(const Entry& e, const std::map<std::string, T>& options) {
  auto it = options.find(lower(e.value));
  if (it == options.end()) throw ParseError(e.line, "invalid value '" + e.value + "' for '" + e.key + "'");
  return it->second;
}

PressureMode pressure_mode(const Entry& e) {
  return choice<PressureMode>(e, {{"auto", PressureMode::Auto}, {"ode", PressureMode::Ode}, {"closure", PressureMode::Closure}});
}

std::string pressure_name(PressureMode m) {
  switch (m) {
    case PressureMode::Auto: return "auto";
    case PressureMode::Ode: return "ode";
    case PressureMode::Closure: return "closure";
  }
  return "auto";
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Simulate: return "simulate";
    case Mode::Blowup: return "blowup";
    case Mode::Periodic: return "periodic";
    case Mode::Check: return "check";
    case Mode::Compare: return "compare";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  static const std::map<std::string, Mode> modes = {{"simulate", Mode::Simulate}, {"blowup", Mode::Blowup},
                                                    {"periodic", Mode::Periodic}, {"check", Mode::Check},
                                                    {"compare", Mode::Compare}};
  auto it = modes.find(lower(trim(s)));
  if (it == modes.end()) throw ConfigError("unknown mode '" + s + "'");
  return it->second;
}

double parse_quantity(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw ConfigError("'" + field + "' expects a number, got '" + text + "'");
  std::string unit = lower(trim(std::string(end)));
  unit.erase(std::remove(unit.begin(), unit.end(), ' '), unit.end());
  const UnitTable& table = units_for(field);
  auto it = table.find(unit);
  if (it == table.end()) throw UnitError(field, "unsupported unit '" + unit + "'");
  const double out = v * it->second;
  if (!std::isfinite(out)) throw ConfigError("'" + field + "' is not finite");
  return out;
}

RunConfig parse_config(const std::string& text) {
  std::vector<Entry> entries;
  {
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find_first_of("#;");
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError(line, "malformed section header");
        section = lower(trim(s.substr(1, s.size() - 2)));
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, "expected key = value");
      if (section.empty()) throw ParseError(line, "key outside of any section");
      const std::string key = lower(trim(s.substr(0, eq)));
      if (key.empty()) throw ParseError(line, "empty key");
      entries.push_back({section, key, trim(s.substr(eq + 1)), line});
    }
  }

  RunConfig c;
  const Entry* mode = nullptr;
  const Entry* beta_over_rho = nullptr;
  // The parameter preset is applied before any explicit value.
  for (const Entry& e : entries) {
    if (e.section == "run" && e.key == "preset") {
      c.preset = lower(e.value);
      if (c.preset != "desk" && c.preset != "table1" && c.preset != "custom")
        throw ParseError(e.line, "unknown parameter preset '" + e.value + "'");
    }
  }
  if (c.preset == "table1") c.params = PhysicalParams::table1();
  if (c.preset == "custom") c.params = PhysicalParams{};

  using Setter = std::function<void(const Entry&)>;
  auto num = [](double& target) { return Setter([&target](const Entry& e) { target = number(e); }); };
  std::map<std::string, Setter> setters = {
      {"run.mode", [&](const Entry& e) { mode = &e; }},
      {"run.preset", [](const Entry&) {}},
      {"run.solver", [&](const Entry& e) { c.solver = choice<SolverKind>(e, {{"fd", SolverKind::Fd}, {"picard", SolverKind::Picard}}); }},
      {"run.coupling", [&](const Entry& e) { c.coupling = choice<Coupling>(e, {{"full", Coupling::Full}, {"decoupled", Coupling::Decoupled}}); }},
      {"params.rho", num(c.params.rho)},
      {"params.mu", num(c.params.mu)},
      {"params.r_lumen", num(c.params.r_lumen)},
      {"params.delta_tissue", num(c.params.delta_tissue)},
      {"params.area", num(c.params.area)},
      {"params.k_e", num(c.params.k_e)},
      {"params.k_d", num(c.params.k_d)},
      {"params.q_p", num(c.params.q_p)},
      {"params.p_tissue", num(c.params.p_tissue)},
      {"params.alpha_bar", num(c.params.alpha_bar)},
      {"params.omega", num(c.params.omega)},
      {"params.length", num(c.params.length)},
      {"params.beta_over_rho", [&](const Entry& e) { beta_over_rho = &e; }},
      {"params.production", [&](const Entry& e) { c.production.kind = choice<ProductionKind>(e, {{"constant", ProductionKind::Constant}, {"periodic", ProductionKind::Periodic}}); }},
      {"params.production_amplitude", num(c.production.amplitude)},
      {"params.production_harmonic", [&](const Entry& e) { c.production.harmonic = static_cast<int>(count(e)); }},
      {"grid.n_z", [&](const Entry& e) { c.n_z = count(e); }},
      {"grid.dt", num(c.dt)},
      {"grid.t_end", num(c.t_end)},
      {"grid.snapshot_stride", [&](const Entry& e) { c.snapshot_stride = count(e); }},
      {"ic.preset", [&](const Entry& e) { c.ic.preset = choice<std::string>(e, {{"zero", "zero"}, {"sine4", "sine4"}, {"negexp", "negexp"}, {"custom", "custom"}}); }},
      {"ic.amplitude", num(c.ic.amplitude)},
      {"ic.expression", [&](const Entry& e) { c.ic.expression = e.value; }},
      {"ic.displacement", [&](const Entry& e) { c.ic.displacement = choice<std::string>(e, {{"balanced", "balanced"}, {"zero", "zero"}, {"expression", "expression"}}); }},
      {"ic.g_expression", [&](const Entry& e) { c.ic.g_expression = e.value; }},
      {"ic.g0", num(c.ic.g0)},
      {"ic.pressure", [&](const Entry& e) { c.ic.pressure = pressure_mode(e); }},
      {"solver.picard_tol", num(c.picard.tol)},
      {"solver.picard_max_iter", [&](const Entry& e) { c.picard.n_max = count(e); }},
      {"blowup.grad_threshold", num(c.blowup.grad_threshold)},
      {"blowup.u_threshold", num(c.blowup.u_threshold)},
      {"blowup.k_max", [&](const Entry& e) { c.k_max = static_cast<int>(count(e)); }},
      {"blowup.fan_points", [&](const Entry& e) { c.fan_points = count(e); }},
      {"blowup.cross_check", [&](const Entry& e) { c.cross_check = boolean(e); }},
      {"periodic.deltas", [&](const Entry& e) {
         c.deltas.clear();
         std::stringstream ss(e.value);
         std::string item;
         while (std::getline(ss, item, ',')) c.deltas.push_back(number({e.section, e.key, item, e.line}));
       }},
      {"periodic.t_end", num(c.periodic_t_end)},
      {"periodic.k_bound", num(c.k_bound)},
      {"periodic.samples", [&](const Entry& e) { c.residual_samples = count(e); }},
      {"output.dir", [&](const Entry& e) { c.out_dir = e.value; }},
      {"output.formats", [&](const Entry& e) {
         c.write_csv = c.write_dat = false;
         std::stringstream ss(lower(e.value));
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (item == "csv") c.write_csv = true;
           else if (item == "dat") c.write_dat = true;
           else if (!item.empty()) throw ParseError(e.line, "unknown output format '" + item + "'");
         }
       }},
  };

  for (const Entry& e : entries) {
    auto it = setters.find(e.section + "." + e.key);
    if (it == setters.end()) throw UnknownKey(e.section + "." + e.key);
    it->second(e);
  }
  if (!mode) throw ParseError(entries.empty() ? 0 : entries.back().line, "missing required key 'run.mode'");
  try {
    c.mode = parse_mode(mode->value);
  } catch (const ConfigError& ex) {
    throw ParseError(mode->line, ex.what());
  }
  if (beta_over_rho) c.params.set_beta_over_rho(number(*beta_over_rho));
  try {
    c.params.validate();
  } catch (const Error& ex) {
    throw ConfigError(ex.what());
  }
  if (c.n_z < 3) throw ConfigError("grid.n_z must be at least 3");
  if (!(c.dt > 0.0)) throw ConfigError("grid.dt must be positive");
  if (!(c.t_end >= 0.0)) throw ConfigError("grid.t_end must be non-negative");
  if (c.ic.preset == "custom" && c.ic.expression.empty()) throw ConfigError("ic.preset = custom needs ic.expression");
  if (c.ic.displacement == "expression" && c.ic.g_expression.empty())
    throw ConfigError("ic.displacement = expression needs ic.g_expression");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const RunConfig& c) {
  std::ostringstream o;
  const auto& p = c.params;
  o << "[run]\n";
  o << "mode = " << to_string(c.mode) << "\n";
  o << "solver = " << (c.solver == SolverKind::Fd ? "fd" : "picard") << "\n";
  o << "coupling = " << (c.coupling == Coupling::Full ? "full" : "decoupled") << "\n";
  o << "preset = " << c.preset << "\n\n";
  o << "[params]\n";
  o << "rho = " << fmt(p.rho) << "\n";
  o << "mu = " << fmt(p.mu) << "\n";
  o << "r_lumen = " << fmt(p.r_lumen) << "\n";
  o << "delta_tissue = " << fmt(p.delta_tissue) << "\n";
  o << "area = " << fmt(p.area) << "\n";
  o << "k_e = " << fmt(p.k_e) << "\n";
  o << "k_d = " << fmt(p.k_d) << "\n";
  o << "q_p = " << fmt(p.q_p) << "\n";
  o << "p_tissue = " << fmt(p.p_tissue) << "\n";
  o << "alpha_bar = " << fmt(p.alpha_bar) << "\n";
  o << "omega = " << fmt(p.omega) << "\n";
  o << "length = " << fmt(p.length) << "\n";
  o << "production = " << (c.production.kind == ProductionKind::Constant ? "constant" : "periodic") << "\n";
  if (!std::isnan(c.production.amplitude)) o << "production_amplitude = " << fmt(c.production.amplitude) << "\n";
  o << "production_harmonic = " << c.production.harmonic << "\n\n";
  o << "[grid]\n";
  o << "n_z = " << c.n_z << "\n";
  o << "dt = " << fmt(c.dt) << "\n";
  o << "t_end = " << fmt(c.t_end) << "\n";
  o << "snapshot_stride = " << c.snapshot_stride << "\n\n";
  o << "[ic]\n";
  o << "preset = " << c.ic.preset << "\n";
  if (!std::isnan(c.ic.amplitude)) o << "amplitude = " << fmt(c.ic.amplitude) << "\n";
  if (!c.ic.expression.empty()) o << "expression = " << c.ic.expression << "\n";
  o << "displacement = " << c.ic.displacement << "\n";
  if (!c.ic.g_expression.empty()) o << "g_expression = " << c.ic.g_expression << "\n";
  o << "g0 = " << fmt(c.ic.g0) << "\n";
  o << "pressure = " << pressure_name(c.ic.pressure) << "\n\n";
  o << "[solver]\n";
  o << "picard_tol = " << fmt(c.picard.tol) << "\n";
  o << "picard_max_iter = " << c.picard.n_max << "\n\n";
  o << "[blowup]\n";
  o << "grad_threshold = " << fmt(c.blowup.grad_threshold) << "\n";
  o << "u_threshold = " << fmt(c.blowup.u_threshold) << "\n";
  o << "k_max = " << c.k_max << "\n";
  o << "fan_points = " << c.fan_points << "\n";
  o << "cross_check = " << (c.cross_check ? "true" : "false") << "\n\n";
  o << "[periodic]\n";
  o << "deltas = ";
  for (std::size_t k = 0; k < c.deltas.size(); ++k) o << (k ? ", " : "") << fmt(c.deltas[k]);
  o << "\n";
  if (!std::isnan(c.periodic_t_end)) o << "t_end = " << fmt(c.periodic_t_end) << "\n";
  o << "k_bound = " << fmt(c.k_bound) << "\n";
  o << "samples = " << c.residual_samples << "\n\n";
  o << "[output]\n";
  o << "dir = " << c.out_dir << "\n";
  std::string formats;
  if (c.write_csv) formats += "csv";
  if (c.write_dat) formats += formats.empty() ? "dat" : ",dat";
  o << "formats = " << formats << "\n";
  return o.str();
}

}  // namespace csf
