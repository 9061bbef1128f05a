#include "csf/picard.hpp"

#include <algorithm>
#include <cmath>

#include "csf/closure.hpp"
#include "csf/errors.hpp"

namespace csf {

namespace {

void check_shape(const Field& u, const Vec& g, const Vec& t, const char* who) {
  if (u.n_t != t.size() || u.n_z != g.size() || u.data.size() != u.n_t * u.n_z)
    throw GridMismatch(std::string(who) + ": field does not match the (t, z) grid");
}

// Cumulative trapezoid of u over time at every node.
Field time_integral(const Field& u, const Vec& t) {
  Field I(u.n_t, u.n_z, 0.0);
  for (std::size_t k = 1; k < u.n_t; ++k) {
    const double h = t[k] - t[k - 1];
    for (std::size_t i = 0; i < u.n_z; ++i) I(k, i) = I(k - 1, i) + 0.5 * h * (u(k - 1, i) + u(k, i));
  }
  return I;
}

// Time derivative: centered inside, second-order backward at the last level.
Field time_derivative(const Field& u, const Vec& t, const Vec& u_t0) {
  Field d(u.n_t, u.n_z, 0.0);
  const std::size_t N = u.n_t;
  if (!u_t0.empty())
    for (std::size_t i = 0; i < u.n_z; ++i) d(0, i) = u_t0[i];
  for (std::size_t k = 1; k + 1 < N; ++k) {
    const double h1 = t[k] - t[k - 1], h2 = t[k + 1] - t[k];
    const double cm = -h2 / (h1 * (h1 + h2)), c0 = (h2 - h1) / (h1 * h2), cp = h1 / (h2 * (h1 + h2));
    for (std::size_t i = 0; i < u.n_z; ++i) d(k, i) = cm * u(k - 1, i) + c0 * u(k, i) + cp * u(k + 1, i);
  }
  if (N == 2) {
    const double h = t[1] - t[0];
    for (std::size_t i = 0; i < u.n_z; ++i) d(1, i) = (u(1, i) - u(0, i)) / h;
  } else if (N > 2) {
    const std::size_t k = N - 1;
    const double h1 = t[k - 1] - t[k - 2], h2 = t[k] - t[k - 1];
    const double c2 = h2 / (h1 * (h1 + h2)), c1 = -(h1 + h2) / (h1 * h2), c0 = (h1 + 2 * h2) / (h2 * (h1 + h2));
    for (std::size_t i = 0; i < u.n_z; ++i) d(k, i) = c2 * u(k - 2, i) + c1 * u(k - 1, i) + c0 * u(k, i);
  }
  return d;
}

}  // namespace

Field Field::replicate(const Vec& f, std::size_t nt) {
  Field F(nt, f.size());
  for (std::size_t k = 0; k < nt; ++k) std::copy(f.begin(), f.end(), F.data.begin() + k * f.size());
  return F;
}

Vec time_levels(double T, double dt) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error("time_levels: need dt > 0 and T >= 0");
  const double r = T / dt;
  const auto n = static_cast<std::size_t>(std::ceil(r - 1e-9 * std::max(1.0, r)));
  Vec t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * dt;
  t.back() = T;
  return t;
}

Field eta_update(const Field& u_n, const Vec& g, const Model& model, const Vec& t) {
  check_shape(u_n, g, t, "eta_update");
  const Field I = time_integral(u_n, t);
  const double base = 0.3 * model.params().alpha_bar;
  Field eta(u_n.n_t, u_n.n_z);
  for (std::size_t k = 0; k < u_n.n_t; ++k) {
    const double src = -model.a(t[k]) + base + model.Q(t[k]);
    for (std::size_t i = 0; i < u_n.n_z; ++i) eta(k, i) = g[i] - I(k, i) + src;
  }
  return eta;
}

Field pressure_update(const Field& u_n, const Vec& g, const Model& model, const Vec& t, const Vec& u_t0) {
  check_shape(u_n, g, t, "pressure_update");
  if (!u_t0.empty() && u_t0.size() != u_n.n_z) throw GridMismatch("pressure_update: u_t0 size");
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const Field I = time_integral(u_n, t);
  const Field ut = time_derivative(u_n, t, u_t0);
  Field P(u_n.n_t, u_n.n_z);
  for (std::size_t k = 0; k < u_n.n_t; ++k) {
    const double tk = t[k];
    const double src = -c.alpha * model.a_dtt(tk) + c.alpha * model.q_dt(tk) + c.k_tilde * model.q(tk) -
                       c.k_tilde * model.a_dt(tk) - c.kappa * model.a(tk) + 0.3 * p.alpha_bar * c.kappa +
                       c.kappa * model.Q(tk) + p.area * p.p_tissue;
    for (std::size_t i = 0; i < u_n.n_z; ++i) {
      P(k, i) = (src - c.alpha * ut(k, i) - c.k_tilde * u_n(k, i) + c.kappa * g[i] - c.kappa * I(k, i)) / p.area;
    }
  }
  return P;
}

Field velocity_update(const Field& u_n, const Field& p_next, const Vec& f, const Model& model, const Vec& t,
                      double dz) {
  check_shape(u_n, f, t, "velocity_update");
  check_shape(p_next, f, t, "velocity_update");
  const std::size_t nz = u_n.n_z;
  for (std::size_t k = 0; k + 1 < u_n.n_t; ++k) {
    const double cfl = max_abs(u_n.row(k)) * (t[k + 1] - t[k]) / dz;
    if (cfl >= 1.0) throw CflViolation(cfl, t[k]);
  }
  const double rho = model.params().rho;
  const double b = model.coeffs().beta / rho;
  Field u(u_n.n_t, nz, 0.0);
  for (std::size_t i = 1; i + 1 < nz; ++i) u(0, i) = f[i];
  for (std::size_t k = 0; k + 1 < u_n.n_t; ++k) {
    const double h = t[k + 1] - t[k];
    for (std::size_t i = 1; i + 1 < nz; ++i) {
      const double a = u_n(k, i);
      const double uz = a >= 0.0 ? (u(k, i) - u(k, i - 1)) / dz : (u(k, i + 1) - u(k, i)) / dz;
      const double pz = (p_next(k, i + 1) - p_next(k, i - 1)) / (2.0 * dz);
      u(k + 1, i) = u(k, i) - h * (a * uz + pz / rho + b * u(k, i));
    }
  }
  return u;
}

PicardResult iterate(const Vec& f_in, const Vec& g, const Model& model, double T, const Grid& grid,
                     const PicardOptions& options) {
  if (!(options.tol > 0.0)) throw Error("iterate: tol must be positive");
  if (f_in.size() != grid.n_z || g.size() != grid.n_z) throw GridMismatch("iterate: data does not match grid");
  Vec f = f_in;
  f.front() = 0.0;
  f.back() = 0.0;
  PicardResult res;
  res.t = time_levels(T, grid.dt);
  const Vec u_t0 = closure(model, 0.0, f, g, grid.dz).u_t;

  Field u = Field::replicate(f, res.t.size());
  std::size_t above_one = 0;
  for (std::size_t n = 0; n < options.n_max; ++n) {
    Field eta = eta_update(u, g, model, res.t);
    Field p = pressure_update(u, g, model, res.t, n == 0 ? Vec{} : u_t0);
    Field next = velocity_update(u, p, f, model, res.t, grid.dz);
    const double diff = max_abs_diff(next.data, u.data);
    if (!std::isfinite(diff)) throw NumericError("Picard iterate became non-finite");
    if (!res.diffs.empty() && res.diffs.back() > 0.0) {
      const double ratio = diff / res.diffs.back();
      res.ratios.push_back(ratio);
      above_one = ratio > 1.0 ? above_one + 1 : 0;
    }
    res.diffs.push_back(diff);
    res.state = IterationState{n + 1, std::move(next), std::move(eta), std::move(p), diff};
    if (diff < options.tol) {
      res.converged = true;
      break;
    }
    if (above_one >= options.not_contracting_after) throw NotContracting(res.ratios);
    u = res.state.u_n;
  }
  return res;
}

}  // namespace csf
