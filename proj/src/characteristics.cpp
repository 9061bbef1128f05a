#include "csf/characteristics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "csf/errors.hpp"
#include "csf/parallel.hpp"

namespace csf {

namespace {

// (1 - e^{-b t}) / b, the distance factor of a characteristic.
double travel_factor(double b, double t) { return -std::expm1(-b * t) / b; }

double rhs(double w, double b, double pzz) { return -w * w - b * w - b * pzz; }

double rk4_step(double w, double t, double h, double b, const std::function<double(double)>& pzz) {
  const double k1 = rhs(w, b, pzz(t));
  const double k2 = rhs(w + 0.5 * h * k1, b, pzz(t + 0.5 * h));
  const double k3 = rhs(w + 0.5 * h * k2, b, pzz(t + 0.5 * h));
  const double k4 = rhs(w + h * k3, b, pzz(t + h));
  return w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool escaped(double w, double threshold) { return !std::isfinite(w) || std::abs(w) > threshold; }

}  // namespace

CharacteristicFan CharacteristicFan::from_profile(const std::function<double(double)>& f,
                                                  const std::function<double(double)>& fprime,
                                                  double length, std::size_t count,
                                                  double beta_over_rho) {
  if (count < 2) throw Error("fan needs at least two foot points");
  CharacteristicFan fan;
  fan.beta_over_rho = beta_over_rho;
  for (std::size_t k = 0; k < count; ++k) {
    const double lam = length * static_cast<double>(k) / static_cast<double>(count - 1);
    fan.lambdas.push_back(lam);
    fan.f_vals.push_back(f(lam));
    fan.fprime_vals.push_back(fprime(lam));
  }
  return fan;
}

double homogeneous_solution(const std::function<double(double)>& f, double beta_over_rho, double t,
                            double z, double length, std::size_t scan_points) {
  const double b = beta_over_rho;
  const double c = travel_factor(b, t);
  auto phi = [&](double lam) { return lam + f(lam) * c - z; };

  std::vector<double> lam(scan_points), val(scan_points);
  for (std::size_t k = 0; k < scan_points; ++k) {
    lam[k] = length * static_cast<double>(k) / static_cast<double>(scan_points - 1);
    val[k] = phi(lam[k]);
  }
  std::vector<double> roots;
  std::vector<std::pair<double, double>> brackets;
  for (std::size_t k = 0; k < scan_points; ++k) {
    if (val[k] == 0.0) {
      roots.push_back(lam[k]);
    } else if (k + 1 < scan_points && val[k + 1] != 0.0 && (val[k] < 0.0) != (val[k + 1] < 0.0)) {
      brackets.emplace_back(lam[k], lam[k + 1]);
    }
  }
  if (roots.size() + brackets.size() == 0) throw NoRoot("no foot point reaches the query point");
  if (roots.size() + brackets.size() > 1)
    throw MultipleRoots("characteristics have crossed at the query point");

  double root;
  if (!roots.empty()) {
    root = roots.front();
  } else {
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        phi, brackets[0].first, brackets[0].second, boost::math::tools::eps_tolerance<double>(52),
        iters);
    root = 0.5 * (lo + hi);
  }
  return f(root) * std::exp(-b * t);
}

double slope_closed_form(double fprime0, double beta_over_rho, double t) {
  const double b = beta_over_rho;
  const double e = std::exp(-b * t);
  const double r = fprime0 / b;
  const double den = (1.0 + r) - r * e;
  if (den <= 0.0) throw BlowupReached(blowup_time(fprime0, b).value_or(t));
  return fprime0 * e / den;
}

BlowupTime blowup_time(double fprime0, double beta_over_rho) {
  const double b = beta_over_rho;
  if (fprime0 >= -b) return std::nullopt;
  // (1/b) ln(f' / (f' + b))
  return std::log1p(-b / (fprime0 + b)) / b;
}

BlowupReport scan_fan(const CharacteristicFan& fan) {
  const std::size_t n = fan.lambdas.size();
  if (fan.f_vals.size() != n || fan.fprime_vals.size() != n)
    throw GridMismatch("scan_fan: inconsistent fan arrays");
  for (std::size_t k = 1; k < n; ++k)
    if (!(fan.lambdas[k] > fan.lambdas[k - 1])) throw Error("scan_fan: foot points must increase");
  BlowupReport r;
  r.per_lambda.resize(n);
  parallel_for(n, [&](std::size_t k) { r.per_lambda[k] = blowup_time(fan.fprime_vals[k], fan.beta_over_rho); });
  double min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    min_slope = std::min(min_slope, fan.fprime_vals[k]);
    if (r.per_lambda[k] && *r.per_lambda[k] < r.min_blowup_time) {
      r.min_blowup_time = *r.per_lambda[k];
      r.argmin_lambda = fan.lambdas[k];
    }
  }
  r.criterion_margin = n ? min_slope + fan.beta_over_rho : 0.0;
  return r;
}

RiccatiSetup riccati_setup(double beta_over_rho, double p_zz, double omega0) {
  const double b = beta_over_rho;
  const double disc = b * b - 4.0 * b * p_zz;
  if (disc < 0.0) throw ComplexEigenvalues("slope equation has complex eigenvalues");
  RiccatiSetup s;
  s.beta_over_rho = b;
  s.p_zz = p_zz;
  s.omega0 = omega0;
  s.eig1 = 0.5 * (b + std::sqrt(disc));
  s.eig2 = s.eig1 != 0.0 ? b * p_zz / s.eig1 : 0.5 * (b - std::sqrt(disc));
  return s;
}

double riccati_particular(const RiccatiSetup& s, double t) {
  const double b = s.beta_over_rho;
  const double d = s.eig1 - s.eig2;
  const double k = s.omega0 + 2.0 * b - 2.0 * s.eig2;
  // b(t) e^{-eig1 t}, written so that large d t does not overflow.
  const double decay = d > 0.0 ? -std::expm1(-d * t) / d : t;
  const double den = 2.0 * std::exp(-d * t) + k * decay;
  if (!(den > 0.0)) throw ZeroDenominator("particular solution has a pole on [0, t]");
  return -s.eig1 + k / den;
}

double riccati_general(const RiccatiSetup& s, double t) {
  using boost::math::quadrature::gauss_kronrod;
  if (s.omega0 == 0.0) throw SlopeZeroAtFoot("general solution needs a nonzero initial slope");
  const double b = s.beta_over_rho;
  auto G = [&](double tau) {
    if (tau == 0.0) return 0.0;
    return gauss_kronrod<double, 61>::integrate(
        [&](double x) { return 2.0 * riccati_particular(s, x) + b; }, 0.0, tau, 8, 1e-12);
  };
  const double inner = t == 0.0 ? 0.0
                                : gauss_kronrod<double, 61>::integrate(
                                      [&](double tau) { return std::exp(-G(tau)); }, 0.0, t, 8, 1e-12);
  const double bracket = 2.0 / s.omega0 + inner;
  if (s.omega0 < 0.0 && bracket >= 0.0) throw BlowupReached(t);
  const double y = std::exp(G(t)) * bracket;
  return riccati_particular(s, t) + 1.0 / y;
}

RiccatiTrajectory riccati_integrate(const RiccatiSetup& setup, double omega0, double t_max, double dt,
                                    double threshold, double time_tol) {
  const double p = setup.p_zz;
  return riccati_integrate(setup.beta_over_rho, [p](double) { return p; }, omega0, t_max, dt,
                           threshold, time_tol);
}

RiccatiTrajectory riccati_integrate(double b, const std::function<double(double)>& p_zz, double omega0,
                                    double t_max, double dt, double threshold, double time_tol) {
  if (!(dt > 0.0)) throw Error("riccati_integrate: dt must be positive");
  RiccatiTrajectory tr;
  double t = 0.0, w = omega0;
  tr.t.push_back(t);
  tr.omega.push_back(w);
  while (t < t_max) {
    // Shrink the step as |omega| grows so the approach to a pole stays resolved.
    double h = std::min({dt, t_max - t, 0.05 / std::max(std::abs(w), 1e-300)});
    if (!(t + h > t)) break;
    const double next = rk4_step(w, t, h, b, p_zz);
    if (escaped(next, threshold)) {
      double lo = 0.0, hi = h;
      while (hi - lo > time_tol * std::max(1.0, t)) {
        const double mid = 0.5 * (lo + hi);
        if (escaped(rk4_step(w, t, mid, b, p_zz), threshold))
          hi = mid;
        else
          lo = mid;
      }
      tr.diverged = true;
      tr.divergence_time = t + hi;
      return tr;
    }
    t += h;
    w = next;
    tr.t.push_back(t);
    tr.omega.push_back(w);
  }
  return tr;
}

}  // namespace csf
