#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace csf {

/// Foot points with the profile value and slope at each.
struct CharacteristicFan {
  std::vector<double> lambdas;
  std::vector<double> f_vals;
  std::vector<double> fprime_vals;
  double beta_over_rho = 1.0;

  static CharacteristicFan from_profile(const std::function<double(double)>& f,
                                        const std::function<double(double)>& fprime,
                                        double length, std::size_t count, double beta_over_rho);
};

/// Blow-up time of one characteristic; empty means the slope stays bounded.
using BlowupTime = std::optional<double>;

struct BlowupReport {
  std::vector<BlowupTime> per_lambda;
  double min_blowup_time = std::numeric_limits<double>::infinity();
  double argmin_lambda = std::numeric_limits<double>::quiet_NaN();
  double criterion_margin = 0.0;  // min f' + beta/rho
  bool any_finite() const { return std::isfinite(min_blowup_time); }
};

/// Velocity of the damped Burgers flow at (t, z) by tracing back to the foot point.
/// `scan_points` sets the resolution of the bracketing scan over [0, length].
double homogeneous_solution(const std::function<double(double)>& f, double beta_over_rho, double t,
                            double z, double length = 1.0, std::size_t scan_points = 1024);

/// Slope u_z carried along the characteristic with initial slope fprime0.
double slope_closed_form(double fprime0, double beta_over_rho, double t);

BlowupTime blowup_time(double fprime0, double beta_over_rho);

BlowupReport scan_fan(const CharacteristicFan& fan);

struct RiccatiSetup {
  double beta_over_rho = 1.0;
  double p_zz = 0.0;
  double omega0 = 0.0;
  double eig1 = 0.0;  // larger root
  double eig2 = 0.0;
};

RiccatiSetup riccati_setup(double beta_over_rho, double p_zz, double omega0);

/// Particular solution a(t) / b(t) of the slope equation with b(0) = 2.
double riccati_particular(const RiccatiSetup& setup, double t);

/// Full solution omega = omega_bar + 1 / y with y built by adaptive quadrature.
double riccati_general(const RiccatiSetup& setup, double t);

struct RiccatiTrajectory {
  std::vector<double> t;
  std::vector<double> omega;
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::infinity();
};

/// Classic RK4 for omega' = -omega^2 - b omega - b p_zz, stopping once |omega|
/// exceeds `threshold`; the crossing time is refined by bisection.
RiccatiTrajectory riccati_integrate(const RiccatiSetup& setup, double omega0, double t_max, double dt,
                                    double threshold = 1e9, double time_tol = 1e-10);

/// Same integrator with a time-dependent curvature coefficient.
RiccatiTrajectory riccati_integrate(double beta_over_rho, const std::function<double(double)>& p_zz,
                                    double omega0, double t_max, double dt, double threshold = 1e9,
                                    double time_tol = 1e-10);

}  // namespace csf
