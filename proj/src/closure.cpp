#include "csf/closure.hpp"

#include "csf/errors.hpp"

namespace csf {

Vec pressure_from(const Model& model, double t, const Vec& u, const Vec& u_t, const Vec& eta) {
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const double qd = model.q_dt(t) - model.a_dtt(t);
  const double q = model.q(t) - model.a_dt(t);
  Vec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = p.p_tissue + (c.alpha * (qd - u_t[i]) + c.k_tilde * (q - u[i]) + c.kappa * eta[i]) / p.area;
  return out;
}

ClosureResult closure(const Model& model, double t, const Vec& u, const Vec& eta, double dz,
                      Coupling coupling) {
  const std::size_t n = u.size();
  if (eta.size() != n) throw GridMismatch("closure: u and eta differ in size");
  if (n < 3) throw GridMismatch("closure: need at least 3 nodes");
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const Vec du = upwind_derivative(u, u, dz);

  ClosureResult r;
  r.u_t.assign(n, 0.0);
  if (coupling == Coupling::Decoupled) {
    const double b = c.beta / p.rho;
    for (std::size_t i = 1; i + 1 < n; ++i) r.u_t[i] = -u[i] * du[i] - b * u[i];
  } else {
    const std::size_t m = n - 2;
    const double off = c.alpha / (2.0 * p.area * dz);
    Vec lower(m, off), diag(m, p.rho), upper(m, -off), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = k + 1;
      const double uz = (u[i + 1] - u[i - 1]) / (2.0 * dz);
      const double ez = (eta[i + 1] - eta[i - 1]) / (2.0 * dz);
      rhs[k] = -p.rho * u[i] * du[i] - c.beta * u[i] + (c.k_tilde * uz - c.kappa * ez) / p.area;
    }
    lower[0] = 0.0;
    upper[m - 1] = 0.0;
    const Vec w = solve_tridiagonal(std::move(lower), std::move(diag), std::move(upper), std::move(rhs));
    for (std::size_t k = 0; k < m; ++k) r.u_t[k + 1] = w[k];
  }
  r.p = pressure_from(model, t, u, r.u_t, eta);
  return r;
}

}  // namespace csf
