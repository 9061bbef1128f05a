#include "csf/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "csf/characteristics.hpp"
#include "csf/closure.hpp"
#include "csf/errors.hpp"
#include "csf/expression.hpp"
#include "csf/periodic.hpp"
#include "csf/picard.hpp"

namespace csf {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_out(const CommandContext& ctx, const std::string& name) {
  fs::create_directories(ctx.out_dir);
  std::ofstream f(fs::path(ctx.out_dir) / name, std::ios::binary);
  if (!f) throw Error("cannot write " + (fs::path(ctx.out_dir) / name).string());
  return f;
}

void write_rows(std::ostream& o, const State& s, const Vec& z, char sep) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    o << format_number(s.t) << sep << format_number(z[i]) << sep << format_number(s.u[i]) << sep
      << format_number(s.eta[i]) << sep << format_number(s.p[i]) << '\n';
  }
}

void write_trajectory(const RunConfig& cfg, const CommandContext& ctx, const std::vector<State>& snaps,
                      const State& final_state, const Vec& z) {
  if (cfg.write_csv) {
    auto traj = open_out(ctx, "trajectory.csv");
    traj << "t,z,u,eta,p\n";
    for (const State& s : snaps) write_rows(traj, s, z, ',');
    auto fin = open_out(ctx, "final.csv");
    fin << "t,z,u,eta,p\n";
    write_rows(fin, final_state, z, ',');
  }
  if (cfg.write_dat) {
    auto dat = open_out(ctx, "trajectory.dat");
    dat << "# t z u eta p\n";
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      if (k) dat << "\n\n";
      write_rows(dat, snaps[k], z, ' ');
    }
  }
}

void finish(const CommandContext& ctx, const Diagnostics& d) {
  auto f = open_out(ctx, "diagnostics.txt");
  f << d.str();
  if (!ctx.quiet && ctx.out) *ctx.out << d.str();
}

void put_admissibility(Diagnostics& d, const AdmissibilityVerdict& v) {
  d.set("admissibility_verdict", to_string(v.verdict));
  d.set("admissibility_min_slope", v.min_slope);
  d.set("admissibility_hk_norm", v.h_k_norm);
  d.set("admissibility_threshold", v.threshold);
}

BlowupReport predict(const RunConfig& cfg, const Model& model) {
  const Profile prof = make_profile(cfg);
  return scan_fan(CharacteristicFan::from_profile(prof.f, prof.fprime, cfg.params.length,
                                                  std::max<std::size_t>(2, cfg.fan_points),
                                                  model.beta_over_rho()));
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s;
}

RunMonitors monitors_for(const RunConfig& cfg) {
  RunMonitors m;
  m.snapshot_stride = cfg.snapshot_stride;
  m.options.coupling = cfg.coupling;
  m.options.blowup = cfg.blowup;
  return m;
}

void put_pressure_mismatch(Diagnostics& d, const RunConfig& cfg, const Model& model, const InitialData& ic) {
  d.set("initial_pressure_source", std::string(ic.pressure_source == PressureMode::Ode ? "ode" : "closure"));
  try {
    const Vec ode = build_initial_pressure(model, ic.f, ic.g, ic.grid.dz);
    const Vec cl = closure(model, 0.0, ic.f, ic.g, ic.grid.dz, cfg.coupling).p;
    d.set("initial_pressure_mismatch", max_abs_diff(ode, cl));
  } catch (const NumericError&) {
    d.set("initial_pressure_mismatch", std::string("overflow"));
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Diagnostics::set(const std::string& key, const std::string& value) {
  for (auto& kv : items_)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  items_.emplace_back(key, value);
}

void Diagnostics::set(const std::string& key, double value) { set(key, format_number(value)); }

void Diagnostics::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

const std::string& Diagnostics::get(const std::string& key) const {
  for (const auto& kv : items_)
    if (kv.first == key) return kv.second;
  throw Error("no diagnostic named '" + key + "'");
}

bool Diagnostics::has(const std::string& key) const {
  return std::any_of(items_.begin(), items_.end(), [&](const auto& kv) { return kv.first == key; });
}

std::string Diagnostics::str() const {
  std::string s;
  for (const auto& [k, v] : items_) s += k + ": " + v + "\n";
  return s;
}

std::map<std::string, std::string> read_diagnostics(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw Error("malformed diagnostics line '" + line + "'");
    out[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return out;
}

Model make_model(const RunConfig& cfg) { return Model(cfg.params, cfg.production); }

Grid make_grid(const RunConfig& cfg) { return Grid(cfg.n_z, cfg.params.length, cfg.dt, cfg.t_end); }

Profile make_profile(const RunConfig& cfg) {
  const double L = cfg.params.length;
  const std::string& preset = cfg.ic.preset;
  if (preset == "zero") return {[](double) { return 0.0; }, [](double) { return 0.0; }};
  if (preset == "sine4") {
    const double a = std::isnan(cfg.ic.amplitude) ? 4.0 : cfg.ic.amplitude;
    return {[a, L](double z) { return a * std::sin(kPi * z / L); },
            [a, L](double z) { return a * kPi / L * std::cos(kPi * z / L); }};
  }
  if (preset == "negexp") {
    const double a = std::isnan(cfg.ic.amplitude) ? 1.0 : cfg.ic.amplitude;
    return {[a](double z) { return -a * std::exp(z); }, [a](double z) { return -a * std::exp(z); }};
  }
  if (preset == "custom") {
    const Expression e(cfg.ic.expression);
    const double a = std::isnan(cfg.ic.amplitude) ? 1.0 : cfg.ic.amplitude;
    return {[e, a, L](double z) { return a * e.at(z, L); }, [e, a, L](double z) { return a * e.derivative_at(z, L); }};
  }
  throw ConfigError("unknown initial-velocity preset '" + preset + "'");
}

Vec make_displacement(const RunConfig& cfg, const Model& model, const Grid& grid, const Vec& f) {
  if (cfg.ic.displacement == "balanced") return balanced_displacement(model, f, grid.dz, cfg.ic.g0);
  if (cfg.ic.displacement == "zero") return Vec(grid.n_z, cfg.ic.g0);
  if (cfg.ic.displacement == "expression") {
    const Expression e(cfg.ic.g_expression);
    return sample([&](double z) { return e.at(z, grid.length); }, grid.nodes());
  }
  throw ConfigError("unknown displacement mode '" + cfg.ic.displacement + "'");
}

InitialData make_initial_data(const RunConfig& cfg, const Model& model, const Grid& grid) {
  const Profile prof = make_profile(cfg);
  const Vec f_raw = sample(prof.f, grid.nodes());
  Vec f = f_raw;
  f.front() = 0.0;
  f.back() = 0.0;
  const Vec g = make_displacement(cfg, model, grid, f);
  return make_initial_data(model, grid, f_raw, g, cfg.ic.pressure);
}

int cmd_simulate(const RunConfig& cfg, const CommandContext& ctx) {
  const auto t0 = Clock::now();
  const Model model = make_model(cfg);
  const Grid grid = make_grid(cfg);
  const InitialData ic = make_initial_data(cfg, model, grid);
  const BoundaryTraces bt = boundary_traces(model, ic.g);
  const Vec z = grid.nodes();

  Diagnostics d;
  d.set("mode", std::string("simulate"));
  d.set("solver", std::string(cfg.solver == SolverKind::Fd ? "fd" : "picard"));
  d.set("n_z", static_cast<double>(grid.n_z));
  d.set("dt", grid.dt);
  d.set("t_end", grid.t_end);
  put_admissibility(d, admissibility(ic, model, cfg.k_max));
  d.set("predicted_blowup_time", predict(cfg, model).min_blowup_time);
  put_pressure_mismatch(d, cfg, model, ic);

  int code = kExitOk;
  if (cfg.solver == SolverKind::Fd) {
    const RunResult rr = run(ic, bt, model, grid, monitors_for(cfg));
    write_trajectory(cfg, ctx, rr.snapshots, rr.final_state, z);
    const auto& diag = rr.diagnostics;
    d.set("status", std::string(diag.blowup ? "blowup" : "completed"));
    d.set("t_final", rr.final_state.t);
    d.set("steps", static_cast<double>(diag.steps));
    d.set("cfl_max", diag.cfl_max);
    d.set("max_gradient", diag.max_gradient);
    d.set("blowup_detected", diag.blowup.has_value());
    d.set("blowup_time", diag.blowup ? diag.blowup->t_blow : std::numeric_limits<double>::quiet_NaN());
    if (diag.blowup) d.set("blowup_reason", diag.blowup->reason);
    d.set("residual_displacement", diag.residual.displacement);
    d.set("residual_tissue", diag.residual.tissue);
    d.set("residual_momentum", diag.residual.momentum);
    if (diag.blowup) code = kExitBlowup;
  } else {
    const PicardResult pr = iterate(ic.f, ic.g, model, grid.t_end, grid, cfg.picard);
    const IterationState& st = pr.state;
    std::vector<State> snaps;
    const std::size_t stride = std::max<std::size_t>(1, cfg.snapshot_stride);
    for (std::size_t k = 0; k < pr.t.size(); ++k) {
      if (k % stride != 0 && k + 1 != pr.t.size()) continue;
      snaps.push_back({pr.t[k], st.u_n.row_copy(k), st.eta_n.row_copy(k), st.p_n.row_copy(k), {}});
    }
    write_trajectory(cfg, ctx, snaps, snaps.back(), z);
    d.set("status", std::string(pr.converged ? "completed" : "not_converged"));
    d.set("t_final", pr.t.back());
    d.set("blowup_detected", false);
    d.set("picard_iterations", static_cast<double>(st.n));
    d.set("picard_converged", pr.converged);
    d.set("picard_final_diff", st.diff_sup);
    d.set("picard_ratios", join(pr.ratios));
  }
  d.set("wall_clock_s", seconds_since(t0));
  finish(ctx, d);
  return code;
}

int cmd_blowup(const RunConfig& cfg, const CommandContext& ctx) {
  const auto t0 = Clock::now();
  const Model model = make_model(cfg);
  const Grid grid = make_grid(cfg);
  const Profile prof = make_profile(cfg);
  const CharacteristicFan fan = CharacteristicFan::from_profile(
      prof.f, prof.fprime, cfg.params.length, std::max<std::size_t>(2, cfg.fan_points), model.beta_over_rho());
  const BlowupReport rep = scan_fan(fan);
  const Vec f_raw = sample(prof.f, grid.nodes());
  const AdmissibilityVerdict adm = admissibility(f_raw, grid.dz, model.beta_over_rho(), cfg.k_max);

  if (cfg.write_csv) {
    auto out = open_out(ctx, "blowup.csv");
    out << "lambda,f,fprime,blowup_time\n";
    for (std::size_t k = 0; k < fan.lambdas.size(); ++k) {
      out << format_number(fan.lambdas[k]) << ',' << format_number(fan.f_vals[k]) << ','
          << format_number(fan.fprime_vals[k]) << ','
          << format_number(rep.per_lambda[k].value_or(std::numeric_limits<double>::infinity())) << '\n';
    }
  }
  Diagnostics d;
  d.set("mode", std::string("blowup"));
  d.set("beta_over_rho", model.beta_over_rho());
  put_admissibility(d, adm);
  d.set("characteristics", std::string(rep.any_finite() ? "FiniteTime" : "Global"));
  d.set("min_blowup_time", rep.min_blowup_time);
  d.set("min_blowup_lambda", rep.argmin_lambda);
  d.set("criterion_margin", rep.criterion_margin);
  std::size_t finite = 0;
  for (const auto& t : rep.per_lambda) finite += t.has_value();
  d.set("finite_time_characteristics", static_cast<double>(finite));
  if (cfg.cross_check) {
    const InitialData ic = make_initial_data(cfg, model, grid);
    RunMonitors mon = monitors_for(cfg);
    mon.snapshot_stride = std::max<std::size_t>(1, grid.n_steps());
    const RunResult rr = run(ic, boundary_traces(model, ic.g), model, grid, mon);
    d.set("fd_blowup_detected", rr.diagnostics.blowup.has_value());
    const double tb = rr.diagnostics.blowup ? rr.diagnostics.blowup->t_blow : std::numeric_limits<double>::quiet_NaN();
    d.set("fd_blowup_time", tb);
    d.set("fd_to_predicted_ratio", tb / rep.min_blowup_time);
  }
  d.set("wall_clock_s", seconds_since(t0));
  finish(ctx, d);
  return kExitOk;
}

int cmd_periodic(const RunConfig& cfg, const CommandContext& ctx) {
  const auto t0 = Clock::now();
  Model model = make_model(cfg);
  if (model.production().kind != ProductionKind::Periodic) {
    ProductionModel prod = cfg.production;
    prod.kind = ProductionKind::Periodic;
    model = Model(cfg.params, prod);
  }
  const PeriodicSolution sol = build_periodic(model);
  std::vector<double> ts;
  const std::size_t n = std::max<std::size_t>(1, cfg.residual_samples);
  for (std::size_t k = 0; k < n; ++k) ts.push_back(3.0 * sol.period * static_cast<double>(k) / static_cast<double>(n));
  const double res = residual(sol, model, ts);

  const double T = std::isnan(cfg.periodic_t_end) ? sol.period : cfg.periodic_t_end;
  Grid grid = make_grid(cfg);
  StabilityOptions opt;
  opt.k_bound = cfg.k_bound;
  opt.monitors = monitors_for(cfg);
  const std::vector<StabilityResult> sweep = stability_sweep(cfg.deltas, model, grid, T, opt);

  if (cfg.write_csv) {
    auto out = open_out(ctx, "periodic.csv");
    out << "delta,sup_deviation,deviation_over_delta,bound_satisfied,blowup\n";
    for (const auto& r : sweep)
      out << format_number(r.delta) << ',' << format_number(r.sup_deviation) << ','
          << format_number(r.deviation_over_delta) << ',' << (r.bound_satisfied ? "true" : "false") << ','
          << (r.blowup ? "true" : "false") << '\n';
  }
  Diagnostics d;
  d.set("mode", std::string("periodic"));
  d.set("period", sol.period);
  d.set("periodic_residual", res);
  d.set("periodic_residual_pass", res < 1e-10);
  d.set("p_bar0", sol.p_bar(0.0));
  d.set("p_bar0_reference", periodic_initial_pressure_reference(model));
  d.set("eta_bar0", sol.eta_bar(0.0));
  d.set("stability_t_end", T);
  bool monotone = true, all_bounded = true;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::vector<std::pair<double, double>> pairs;
  for (const auto& r : sweep) {
    pairs.emplace_back(r.delta, r.sup_deviation);
    all_bounded = all_bounded && r.bound_satisfied;
    if (r.delta > 0.0) {
      lo = std::min(lo, r.deviation_over_delta);
      hi = std::max(hi, r.deviation_over_delta);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t k = 1; k < pairs.size(); ++k) monotone = monotone && pairs[k].second > pairs[k - 1].second;
  d.set("stability_deltas", join(cfg.deltas));
  std::vector<double> devs;
  for (const auto& r : sweep) devs.push_back(r.sup_deviation);
  d.set("stability_sup_deviation", join(devs));
  d.set("stability_monotone", monotone);
  d.set("stability_ratio_spread", hi > 0.0 ? hi / lo : std::numeric_limits<double>::quiet_NaN());
  d.set("stability_bounded", all_bounded);
  d.set("wall_clock_s", seconds_since(t0));
  finish(ctx, d);
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, const CommandContext& ctx) {
  const Model model = make_model(cfg);
  const Grid grid = make_grid(cfg);
  const InitialData ic = make_initial_data(cfg, model, grid);
  const BoundaryTraces bt = boundary_traces(model, ic.g);
  const CompatibilityReport r = check_compatibility(ic, bt, model);
  Diagnostics d;
  d.set("mode", std::string("check"));
  auto gate = [&](const std::string& key, double value, double scale) {
    d.set(key, value);
    d.set(key + "_status", std::string(value <= r.tolerance * std::max(1.0, std::abs(scale)) ? "PASS" : "FAIL"));
  };
  gate("u_left", r.u_left, 0.0);
  gate("u_right", r.u_right, 0.0);
  gate("eta_left", r.eta_left, ic.g.front());
  gate("eta_right", r.eta_right, ic.g.back());
  gate("p_left", r.p_left, ic.s.front());
  d.set("s_integral_L", r.s_integral_L);
  d.set("s_closed_L", r.s_closed_L);
  d.set("s_mismatch", r.s_mismatch);
  d.set("s_mismatch_status", std::string("REPORTED"));
  d.set("tolerance", r.tolerance);
  d.set("initial_pressure_source", std::string(ic.pressure_source == PressureMode::Ode ? "ode" : "closure"));
  put_admissibility(d, admissibility(ic, model, cfg.k_max));
  d.set("compatibility", std::string(r.pass ? "PASS" : "FAIL"));
  finish(ctx, d);
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const CommandContext& ctx) {
  const auto t0 = Clock::now();
  const Model model = make_model(cfg);
  const Grid grid = make_grid(cfg);
  const InitialData ic = make_initial_data(cfg, model, grid);
  const PicardResult pr = iterate(ic.f, ic.g, model, grid.t_end, grid, cfg.picard);
  RunMonitors mon = monitors_for(cfg);
  mon.snapshot_stride = 1;
  const RunResult rr = run(ic, boundary_traces(model, ic.g), model, grid, mon);

  Diagnostics d;
  d.set("mode", std::string("compare"));
  std::ofstream out;
  if (cfg.write_csv) {
    out = open_out(ctx, "compare.csv");
    out << "t,linf_u,linf_eta,linf_p\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, cfg.snapshot_stride);
  const std::size_t levels = std::min(pr.t.size(), rr.snapshots.size());
  double mu = 0.0, me = 0.0, mp = 0.0;
  const IterationState& st = pr.state;
  for (std::size_t k = 0; k < levels; ++k) {
    const State& s = rr.snapshots[k];
    const double du = max_abs_diff(s.u, st.u_n.row_copy(k));
    const double de = max_abs_diff(s.eta, st.eta_n.row_copy(k));
    const double dp = max_abs_diff(s.p, st.p_n.row_copy(k));
    mu = std::max(mu, du);
    me = std::max(me, de);
    mp = std::max(mp, dp);
    if (out.is_open() && (k % stride == 0 || k + 1 == levels))
      out << format_number(pr.t[k]) << ',' << format_number(du) << ',' << format_number(de) << ','
          << format_number(dp) << '\n';
  }
  d.set("t_end", grid.t_end);
  d.set("linf_u", mu);
  d.set("linf_eta", me);
  d.set("linf_p", mp);
  d.set("tolerance_u", 10.0 * (grid.dt + grid.dz));
  d.set("linf_u_within_tolerance", mu <= 10.0 * (grid.dt + grid.dz));
  d.set("fd_blowup_detected", rr.diagnostics.blowup.has_value());
  d.set("picard_iterations", static_cast<double>(st.n));
  d.set("picard_converged", pr.converged);
  d.set("picard_ratios", join(pr.ratios));
  if (!pr.ratios.empty()) {
    double mean = 0.0, var = 0.0, mx = 0.0;
    for (double r : pr.ratios) mean += r, mx = std::max(mx, r);
    mean /= static_cast<double>(pr.ratios.size());
    for (double r : pr.ratios) var += (r - mean) * (r - mean);
    var /= static_cast<double>(pr.ratios.size());
    d.set("picard_ratio_max", mx);
    d.set("picard_ratio_cv", std::sqrt(var) / mean);
  }
  d.set("wall_clock_s", seconds_since(t0));
  finish(ctx, d);
  return rr.diagnostics.blowup ? kExitBlowup : kExitOk;
}

int run_command(const RunConfig& cfg, const CommandContext& ctx_in) {
  CommandContext ctx = ctx_in;
  if (ctx.out_dir.empty()) ctx.out_dir = cfg.out_dir;
  switch (cfg.mode) {
    case Mode::Simulate: return cmd_simulate(cfg, ctx);
    case Mode::Blowup: return cmd_blowup(cfg, ctx);
    case Mode::Periodic: return cmd_periodic(cfg, ctx);
    case Mode::Check: return cmd_check(cfg, ctx);
    case Mode::Compare: return cmd_compare(cfg, ctx);
  }
  return kExitError;
}

}  // namespace csf
