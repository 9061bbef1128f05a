#include "csf/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csf/conditions.hpp"
#include "csf/errors.hpp"
#include "csf/parallel.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

Model periodic_model(const Model& model) {
  if (model.production().kind == ProductionKind::Periodic) return model;
  ProductionModel prod;
  prod.kind = ProductionKind::Periodic;
  return Model(model.params(), model.coeffs(), prod);
}

}  // namespace

PeriodicProduction PeriodicProduction::from_model(const Model& model) {
  const Model m = periodic_model(model);
  return {[m](double t) { return m.Q(t); }, [m](double t) { return m.q(t); },
          [m](double t) { return m.q_dt(t); }};
}

PeriodicSolution build_periodic(const Model& model) {
  return build_periodic(model, PeriodicProduction::from_model(model));
}

PeriodicSolution build_periodic(const Model& model, const PeriodicProduction& prod) {
  if (std::abs(prod.F(0.0)) > 1e-12) throw Error("periodic production must vanish at t = 0");
  const PhysicalParams p = model.params();
  const DerivedCoefficients c = model.coeffs();
  const double w = p.omega, ab = p.alpha_bar, A = p.area;

  PeriodicSolution sol;
  sol.period = period(p);
  sol.eta_bar = [=](double t) { return -2.0 * kPi / w - forcing(t, p) + 0.3 * ab + prod.F(t); };
  sol.eta_bar_dt = [=](double t) { return -forcing_dt(t, p) + prod.F_dt(t); };
  sol.eta_bar_dtt = [=](double t) { return -forcing_dtt(t, p) + prod.F_dtt(t); };
  sol.u_bar = [](double) { return 0.0; };
  sol.F_dt = prod.F_dt;
  sol.p_bar = [=](double t) {
    const double th = phase(t, p);
    const double s1 = std::sin(th - kPi / 2), c1 = std::cos(th - kPi / 2);
    const double s2 = std::sin(2 * th - kPi / 2), c2 = std::cos(2 * th - kPi / 2);
    double v = (ab * c.alpha * w * w - c.kappa * ab) / A * s1;
    v -= (4.0 * ab * c.alpha * w * w - c.kappa * ab) / (2.0 * A) * c2;
    v -= c.k_tilde * ab * w / A * (c1 + s2);
    v += c.kappa * prod.F(t) / A + c.k_tilde * prod.F_dt(t) / A + c.alpha * prod.F_dtt(t) / A;
    v -= 2.0 * kPi * c.kappa / (A * w);
    v -= ab * c.kappa / A;
    v += p.p_tissue;
    return v;
  };
  return sol;
}

double periodic_initial_pressure_reference(const Model& model) {
  const auto& p = model.params();
  const auto& c = model.coeffs();
  const double w = p.omega, ab = p.alpha_bar, A = p.area;
  return (c.k_tilde * ab * w - ab * c.alpha * w * w) / A - 2.0 * kPi * c.kappa / (A * w) + p.p_tissue;
}

double residual(const PeriodicSolution& sol, const Model& model, const std::vector<double>& t_samples) {
  const auto& p = model.params();
  const auto& c = model.coeffs();
  double r = 0.0;
  for (double t : t_samples) {
    const double eta = sol.eta_bar(t), eta_t = sol.eta_bar_dt(t), eta_tt = sol.eta_bar_dtt(t);
    const double u = sol.u_bar(t);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    const double u_t = (sol.u_bar(t + h) - sol.u_bar(t - h)) / (2.0 * h);
    const double r1 = eta_t + model.a_dt(t) + u - sol.F_dt(t);
    const double r2 = (c.alpha * eta_tt + c.k_tilde * eta_t + c.kappa * eta) / p.area - sol.p_bar(t) + p.p_tissue;
    const double r3 = p.rho * u_t + c.beta * u;
    r = std::max({r, std::abs(r1), std::abs(r2), std::abs(r3)});
  }
  return r;
}

StabilityResult stability_experiment(double delta, const Model& model_in, const Grid& grid_in, double T,
                                     const StabilityOptions& options) {
  const Model model = periodic_model(model_in);
  const PeriodicSolution sol = build_periodic(model);
  Grid grid = grid_in;
  grid.t_end = T;

  const Vec z = grid.nodes();
  Vec bump(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) bump[i] = std::sin(kPi * z[i] / grid.length);
  bump.front() = 0.0;
  bump.back() = 0.0;
  const double norm = h2_proxy(bump, grid.dz);
  for (double& v : bump) v /= norm;

  Vec f(z.size()), g(z.size());
  const double eta0 = sol.eta_bar(0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    f[i] = delta * bump[i];
    g[i] = eta0 + delta * bump[i];
  }
  const InitialData ic = make_initial_data(model, grid, f, g, PressureMode::Closure);
  const BoundaryTraces bt = boundary_traces(model, ic.g);
  RunMonitors mon = options.monitors;
  mon.snapshot_stride = 1;
  const RunResult rr = run(ic, bt, model, grid, mon);

  StabilityResult res;
  res.delta = delta;
  Vec d(z.size());
  for (const State& s : rr.snapshots) {
    const double eb = sol.eta_bar(s.t), pb = sol.p_bar(s.t);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.eta[i] - eb;
    double dev = h2_proxy(d, grid.dz);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.p[i] - pb;
    dev += h2_proxy(d, grid.dz);
    dev += h2_proxy(s.u, grid.dz);
    if (!std::isfinite(dev)) dev = std::numeric_limits<double>::infinity();
    res.sup_deviation = std::max(res.sup_deviation, dev);
  }
  res.blowup = rr.diagnostics.blowup.has_value();
  res.deviation_over_delta = delta > 0.0 ? res.sup_deviation / delta : 0.0;
  res.bound_satisfied = !res.blowup && res.sup_deviation <= options.k_bound * delta;
  return res;
}

std::vector<StabilityResult> stability_sweep(const std::vector<double>& deltas, const Model& model,
                                             const Grid& grid, double T, const StabilityOptions& options) {
  std::vector<StabilityResult> out(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t k) { out[k] = stability_experiment(deltas[k], model, grid, T, options); });
  return out;
}

}  // namespace csf
