#include "csf/fd_solver.hpp"

#include <algorithm>
#include <cmath>

#include "csf/errors.hpp"

namespace csf {

namespace {

double interior_max_abs(const Vec& v) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

double max_upwind_gradient(const Vec& u, double dz) {
  return interior_max_abs(upwind_derivative(u, u, dz));
}

}  // namespace

State initial_state(const InitialData& ic, const Model& model, Coupling coupling) {
  State s;
  s.t = 0.0;
  s.u = ic.f;
  s.eta = ic.g;
  s.p = ic.s;
  s.u_t = closure(model, 0.0, s.u, s.eta, ic.grid.dz, coupling).u_t;
  return s;
}

std::optional<BlowupDetected> detect_blowup(const State& state, double dz, const BlowupThresholds& th) {
  BlowupDetected b;
  b.t_blow = state.t;
  if (!all_finite(state.u) || !all_finite(state.eta) || !all_finite(state.p)) {
    b.max_grad = std::numeric_limits<double>::infinity();
    b.max_u = std::numeric_limits<double>::infinity();
    b.reason = "non-finite field";
    return b;
  }
  const Vec du = upwind_derivative(state.u, state.u, dz);
  b.max_grad = interior_max_abs(du);
  b.max_u = max_abs(state.u);
  if (b.max_grad > th.grad_threshold) {
    b.reason = "gradient threshold";
    return b;
  }
  if (b.max_u > th.u_threshold) {
    b.reason = "velocity threshold";
    return b;
  }
  return std::nullopt;
}

StepOutcome step(const State& state, const Model& model, const Grid& grid, const BoundaryTraces& bt,
                 const SolverOptions& options) {
  const std::size_t n = state.u.size();
  if (state.eta.size() != n || n != grid.n_z) throw GridMismatch("step: state does not match grid");
  const double dt = grid.dt, dz = grid.dz;
  const double cfl = max_abs(state.u) * dt / dz;
  if (cfl >= 1.0) throw CflViolation(cfl, state.t);

  const Vec u_t = state.u_t.size() == n ? state.u_t
                                         : closure(model, state.t, state.u, state.eta, dz, options.coupling).u_t;
  const double t1 = state.t + dt;
  StepOutcome out;
  State& s = out.state;
  s.t = t1;
  s.u.resize(n);
  s.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.u[i] = state.u[i] + dt * u_t[i];
  s.u.front() = 0.0;
  s.u.back() = 0.0;

  // Forcing and production enter through their exact increments.
  const double source = (model.Q(t1) - model.Q(state.t)) - (model.a(t1) - model.a(state.t));
  for (std::size_t i = 0; i < n; ++i) s.eta[i] = state.eta[i] + source - dt * state.u[i];
  s.eta.front() = bt.eta_left(t1);
  s.eta.back() = bt.eta_right(t1);

  s.p = state.p;
  if (auto b = detect_blowup(s, dz, options.blowup)) {
    out.blowup = b;
    return out;
  }
  ClosureResult c = closure(model, t1, s.u, s.eta, dz, options.coupling);
  s.u_t = std::move(c.u_t);
  s.p = std::move(c.p);
  s.p.front() = bt.p_left(t1);
  s.p.back() = bt.p_right(t1);
  if (!all_finite(s.p) || !all_finite(s.u_t)) {
    BlowupDetected b;
    b.t_blow = t1;
    b.max_grad = max_upwind_gradient(s.u, dz);
    b.max_u = max_abs(s.u);
    b.reason = "non-finite field";
    out.blowup = b;
  }
  return out;
}

SystemResidual system_residual(const Model& model, double dz, const State& s0, const State& s1,
                               const State& s2) {
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const double h1 = s1.t - s0.t, h2 = s2.t - s1.t;
  const double t = s2.t;
  const Vec uz = derivative(s2.u, dz);
  const Vec pz = derivative(s2.p, dz);
  SystemResidual r{0.0, 0.0, 0.0};
  for (std::size_t i = 1; i + 1 < s2.u.size(); ++i) {
    const double eta_t = (s2.eta[i] - s1.eta[i]) / h2;
    const double eta_tt = 2.0 * ((s2.eta[i] - s1.eta[i]) / h2 - (s1.eta[i] - s0.eta[i]) / h1) / (h1 + h2);
    r.displacement = std::max(r.displacement, std::abs(eta_t + model.a_dt(t) + s2.u[i] - model.q(t)));
    const double tissue = (c.alpha * eta_tt + c.k_tilde * eta_t + c.kappa * s2.eta[i]) / p.area +
                          p.p_tissue - s2.p[i];
    r.tissue = std::max(r.tissue, std::abs(tissue));
    const double mom = p.rho * (s2.u[i] - s1.u[i]) / h2 + p.rho * s2.u[i] * uz[i] + pz[i] + c.beta * s2.u[i];
    r.momentum = std::max(r.momentum, std::abs(mom));
  }
  return r;
}

RunResult run(const InitialData& ic, const BoundaryTraces& bt, const Model& model, const Grid& grid,
              const RunMonitors& monitors) {
  if (ic.f.size() != grid.n_z) throw GridMismatch("run: initial data does not match grid");
  const std::size_t stride = std::max<std::size_t>(1, monitors.snapshot_stride);
  RunResult res;
  State state = initial_state(ic, model, monitors.options.coupling);
  res.snapshots.push_back(state);
  res.diagnostics.max_gradient = max_upwind_gradient(state.u, grid.dz);
  std::vector<State> tail{state};

  const std::size_t n_steps = grid.n_steps();
  for (std::size_t k = 1; k <= n_steps; ++k) {
    Grid g = grid;
    const double target = k == n_steps ? grid.t_end : static_cast<double>(k) * grid.dt;
    g.dt = target - state.t;
    res.diagnostics.cfl_max = std::max(res.diagnostics.cfl_max, max_abs(state.u) * g.dt / g.dz);
    StepOutcome out = step(state, model, g, bt, monitors.options);
    out.state.t = target;
    ++res.diagnostics.steps;
    res.diagnostics.max_gradient =
        std::max(res.diagnostics.max_gradient, out.blowup ? out.blowup->max_grad : max_upwind_gradient(out.state.u, g.dz));
    if (out.blowup) {
      res.diagnostics.blowup = out.blowup;
      res.snapshots.push_back(out.state);
      res.final_state = std::move(out.state);
      return res;
    }
    state = std::move(out.state);
    tail.push_back(state);
    if (tail.size() > 3) tail.erase(tail.begin());
    if (k % stride == 0 || k == n_steps) res.snapshots.push_back(state);
  }
  if (tail.size() == 3) res.diagnostics.residual = system_residual(model, grid.dz, tail[0], tail[1], tail[2]);
  res.final_state = state;
  return res;
}

}  // namespace csf
