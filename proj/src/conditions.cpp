#include "csf/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csf/closure.hpp"
#include "csf/errors.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

// Weights of the exact exponential kernel against a linear interpolant of h on
// one cell: returns {weight on the left sample, weight on the right sample}.
std::pair<double, double> kernel_weights(double x, double dz) {
  double i0, i1;
  if (std::abs(x) < 0.5) {
    // (x e^x - e^x + 1) / x^2 = sum_{n>=2} (n-1) x^(n-2) / n!
    double term = 1.0, sum = 0.0, fact = 2.0;
    for (int n = 2; n < 24; ++n) {
      if (n > 2) fact *= n;
      sum += (n - 1) * term / fact;
      term *= x;
    }
    i1 = dz * sum;
    i0 = dz * (x == 0.0 ? 1.0 : std::expm1(x) / x);
  } else {
    const double e = std::exp(x);
    i0 = dz * std::expm1(x) / x;
    i1 = dz * (x * e - e + 1.0) / (x * x);
  }
  return {i1, i0 - i1};
}

}  // namespace

Vec build_ic_rhs(const Model& model, const Vec& f, const Vec& g, double dz) {
  if (f.size() != g.size()) throw GridMismatch("build_ic_rhs: f and g differ in size");
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const Vec fz = derivative(f, dz);
  const double qd0 = model.q_dt(0.0) - model.a_dtt(0.0);
  const double q0 = model.q(0.0) - model.a_dt(0.0);
  Vec h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    h[i] = -p.rho * qd0 - p.rho * f[i] * fz[i] - c.beta * f[i] -
           (p.rho / c.alpha) * (c.k_tilde * (q0 - f[i]) + c.kappa * g[i] + p.area * p.p_tissue);
  }
  return h;
}

double initial_pressure_left(const Model& model, double g0) {
  const auto& c = model.coeffs();
  const auto& p = model.params();
  const double qd0 = model.q_dt(0.0) - model.a_dtt(0.0);
  const double q0 = model.q(0.0) - model.a_dt(0.0);
  return p.p_tissue + (c.alpha * qd0 + c.k_tilde * q0 + c.kappa * g0) / p.area;
}

double initial_pressure_growth(const Model& model) {
  const auto& p = model.params();
  return std::exp(p.area * p.rho / model.coeffs().alpha * p.length);
}

Vec build_initial_pressure(const Model& model, const Vec& f, const Vec& g, double dz) {
  const Vec h = build_ic_rhs(model, f, g, dz);
  if (!all_finite(h)) throw NumericError("initial pressure: non-finite right-hand side");
  const auto& p = model.params();
  const double x = p.area * p.rho / model.coeffs().alpha * dz;
  const double e = std::exp(x);
  const auto [wa, wb] = kernel_weights(x, dz);
  Vec s(h.size());
  s[0] = initial_pressure_left(model, g[0]);
  for (std::size_t j = 1; j < h.size(); ++j) s[j] = e * s[j - 1] + wa * h[j - 1] + wb * h[j];
  if (!all_finite(s)) throw NumericError("initial pressure overflowed");
  return s;
}

Vec balanced_displacement(const Model& model, const Vec& f, double dz, double g0) {
  const auto& c = model.coeffs();
  const double b = model.beta_over_rho();
  Vec g(f.size(), g0);
  if (c.kappa == 0.0) return g;
  const Vec fz = derivative(f, dz);
  const double f0 = f[0], ff0 = f[0] * fz[0];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double df = f[i] - f0;
    g[i] += (c.k_tilde * df - c.alpha * (f[i] * fz[i] - ff0) - c.alpha * b * df) / c.kappa;
  }
  return g;
}

InitialData make_initial_data(const Model& model, const Grid& grid, const Vec& f_raw, const Vec& g,
                              PressureMode mode) {
  if (f_raw.size() != grid.n_z || g.size() != grid.n_z)
    throw GridMismatch("initial data does not match the grid");
  InitialData ic;
  ic.grid = grid;
  ic.f_profile = f_raw;
  ic.f = f_raw;
  ic.f.front() = 0.0;
  ic.f.back() = 0.0;
  ic.g = g;
  if (mode == PressureMode::Auto)
    mode = initial_pressure_growth(model) <= 1e12 ? PressureMode::Ode : PressureMode::Closure;
  ic.pressure_source = mode;
  if (mode == PressureMode::Ode)
    ic.s = build_initial_pressure(model, ic.f, ic.g, grid.dz);
  else
    ic.s = closure(model, 0.0, ic.f, ic.g, grid.dz).p;
  return ic;
}

BoundaryTraces::BoundaryTraces(const Model& model, double g_left, double g_right)
    : model_(model), g_left_(g_left), g_right_(g_right) {}

double BoundaryTraces::eta_at(double t, double g) const {
  return g - model_.a(t) + 0.3 * model_.params().alpha_bar + model_.Q(t);
}

double BoundaryTraces::p_at(double t, double g) const {
  const auto& c = model_.coeffs();
  const auto& p = model_.params();
  const double ab = p.alpha_bar, w = p.omega, A = p.area;
  const double th = phase(t, p);
  const double s1 = std::sin(th - kPi / 2), c1 = std::cos(th - kPi / 2);
  const double s2 = std::sin(2 * th - kPi / 2), c2 = std::cos(2 * th - kPi / 2);
  double v = (ab * c.alpha * w * w - c.kappa * ab) / A * s1;
  v += (c.kappa * ab - 4.0 * ab * c.alpha * w * w) / (2.0 * A) * c2;
  v -= ab * c.k_tilde * w / A * (c1 + s2);
  v += c.kappa / A * g;
  v += (c.k_tilde * model_.q(t) + c.kappa * model_.Q(t) + c.alpha * model_.q_dt(t)) / A;
  v -= c.kappa * ab / A;
  v += p.p_tissue;
  return v;
}

BoundaryTraces boundary_traces(const Model& model, const Vec& g) {
  if (g.empty()) throw GridMismatch("boundary_traces: empty g");
  return BoundaryTraces(model, g.front(), g.back());
}

CompatibilityReport check_compatibility(const InitialData& ic, const BoundaryTraces& bt,
                                        const Model& model, double tolerance) {
  const auto& c = model.coeffs();
  const auto& p = model.params();
  CompatibilityReport r;
  r.tolerance = tolerance;
  const Vec& fp = ic.f_profile.empty() ? ic.f : ic.f_profile;
  r.u_left = std::abs(fp.front());
  r.u_right = std::abs(fp.back());
  r.eta_left = std::abs(bt.eta_left(0.0) - ic.g.front());
  r.eta_right = std::abs(bt.eta_right(0.0) - ic.g.back());
  r.p_left = std::abs(bt.p_left(0.0) - ic.s.front());
  r.s_integral_L = ic.s.back();
  const double ab = p.alpha_bar, w = p.omega;
  r.s_closed_L = p.p_tissue - (c.alpha * ab * w * w + ab * c.k_tilde * w + c.kappa * ic.g.back()) / p.area;
  r.s_mismatch = std::abs(r.s_integral_L - r.s_closed_L);
  auto ok = [&](double res, double scale) { return res <= tolerance * std::max(1.0, std::abs(scale)); };
  r.pass = ok(r.u_left, 0.0) && ok(r.u_right, 0.0) && ok(r.eta_left, ic.g.front()) &&
           ok(r.eta_right, ic.g.back()) && ok(r.p_left, ic.s.front());
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalExpected: return "GlobalExpected";
    case Verdict::BlowupExpected: return "BlowupExpected";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

double hk_proxy(const Vec& f, double dz, int k_max) {
  double norm = l2_norm(f, dz);
  Vec d = f;
  for (int j = 1; j <= k_max; ++j) {
    d = derivative(d, dz);
    norm = std::max(norm, l2_norm(d, dz));
  }
  return norm;
}

AdmissibilityVerdict admissibility(const Vec& f, double dz, double beta_over_rho, int k_max) {
  if (k_max < 0 || k_max > 5) throw Error("admissibility: k_max must lie in [0, 5]");
  if (f.size() < static_cast<std::size_t>(k_max) + 3)
    throw GridMismatch("admissibility: too few samples for the requested derivative order");
  AdmissibilityVerdict v;
  v.threshold = beta_over_rho;
  const Vec fz = derivative(f, dz);
  v.min_slope = *std::min_element(fz.begin(), fz.end());
  v.slope_ok = v.min_slope >= -beta_over_rho;
  v.h_k_norm = hk_proxy(f, dz, k_max);
  v.sup_norm_ok = v.h_k_norm <= beta_over_rho;
  if (!v.slope_ok)
    v.verdict = Verdict::BlowupExpected;
  else if (v.sup_norm_ok)
    v.verdict = Verdict::GlobalExpected;
  else
    v.verdict = Verdict::Indeterminate;
  return v;
}

AdmissibilityVerdict admissibility(const InitialData& ic, const Model& model, int k_max) {
  const Vec& fp = ic.f_profile.empty() ? ic.f : ic.f_profile;
  return admissibility(fp, ic.grid.dz, model.beta_over_rho(), k_max);
}

}  // namespace csf
