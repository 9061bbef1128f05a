#include "csf/model.hpp"

#include <cmath>
#include <numbers>

#include "csf/errors.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase reduced to one period so that shifted arguments land on the same value.
double reduced_phase(double t, double omega) {
  const double T = 2.0 * kPi / omega;
  return omega * std::fmod(t, T);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

PhysicalParams PhysicalParams::table1() {
  PhysicalParams p;
  p.rho = 1004.0;
  p.mu = 1e-3;
  p.r_lumen = 1e-3;
  p.delta_tissue = 5e-4;
  p.area = 3.5e-6;
  p.k_e = 8.0;
  p.k_d = 0.35e-3;
  p.q_p = 0.32e-6 / 60.0;
  p.p_tissue = 10.0 * 133.322387415;  // 10 mmHg
  // Choroid stroke volume of about 1.42 cm^3/min at one beat per second,
  // spread over the cross section.
  p.alpha_bar = 6.76e-3;
  p.omega = 2.0 * kPi;
  p.length = 1.0;
  return p;
}

PhysicalParams PhysicalParams::desk(double beta_over_rho) {
  PhysicalParams p;
  p.rho = 1.0;
  p.area = 1.0;
  p.length = 1.0;
  p.r_lumen = 1.0;
  p.delta_tissue = 1e-3;
  p.k_d = 1e-3;
  p.k_e = 1e-3;
  p.alpha_bar = 0.01;
  p.omega = 2.0 * kPi;
  p.q_p = 0.01;
  p.p_tissue = 0.0;
  p.set_beta_over_rho(beta_over_rho);
  return p;
}

double PhysicalParams::beta_over_rho() const { return 8.0 * mu / (r_lumen * r_lumen) / rho; }

void PhysicalParams::set_beta_over_rho(double value) { mu = value * rho * r_lumen * r_lumen / 8.0; }

void PhysicalParams::validate() const {
  if (!positive_finite(rho)) throw Error("rho must be positive and finite");
  if (!positive_finite(mu)) throw Error("mu must be positive and finite");
  if (!positive_finite(r_lumen)) throw Error("r_lumen must be positive and finite");
  if (!positive_finite(area)) throw Error("area must be positive and finite");
  if (!positive_finite(length)) throw Error("length must be positive and finite");
  if (!positive_finite(omega)) throw Error("omega must be positive and finite");
  if (!std::isfinite(k_e) || k_e < 0.0) throw Error("k_e must be non-negative");
  if (!std::isfinite(k_d) || k_d < 0.0) throw Error("k_d must be non-negative");
  if (!std::isfinite(delta_tissue) || !std::isfinite(q_p) || !std::isfinite(p_tissue) ||
      !std::isfinite(alpha_bar))
    throw Error("non-finite parameter");
}

DerivedCoefficients derive(const PhysicalParams& params) {
  params.validate();
  DerivedCoefficients c;
  c.alpha = params.rho * params.area * params.delta_tissue;
  c.k_tilde = params.k_d;
  c.kappa = params.k_e;
  c.beta = 8.0 * params.mu / (params.r_lumen * params.r_lumen);
  c.q_tilde = params.q_p / params.area;
  if (!(c.alpha > 0.0)) throw Error("alpha = rho A delta must be positive");
  return c;
}

double forcing(double t, const PhysicalParams& p) {
  const double th = reduced_phase(t, p.omega);
  return p.alpha_bar * (1.3 + std::sin(th - kPi / 2) - 0.5 * std::cos(2.0 * th - kPi / 2));
}

double forcing_dt(double t, const PhysicalParams& p) {
  const double th = reduced_phase(t, p.omega);
  const double w = p.omega;
  return p.alpha_bar * (w * std::cos(th - kPi / 2) + w * std::sin(2.0 * th - kPi / 2));
}

double forcing_dtt(double t, const PhysicalParams& p) {
  const double th = reduced_phase(t, p.omega);
  const double w2 = p.omega * p.omega;
  return p.alpha_bar * (-w2 * std::sin(th - kPi / 2) + 2.0 * w2 * std::cos(2.0 * th - kPi / 2));
}

double period(const PhysicalParams& params) { return 2.0 * kPi / params.omega; }

double phase(double t, const PhysicalParams& params) { return reduced_phase(t, params.omega); }

double production_F(double t, const PhysicalParams& params) {
  const double q = params.q_p / params.area;
  return q / params.omega * std::sin(reduced_phase(t, params.omega));
}

double ProductionModel::Q(double t, const PhysicalParams& p, double q_tilde) const {
  if (kind == ProductionKind::Constant) return q_tilde * t;
  const double m = harmonic;
  return amp(q_tilde) / (m * p.omega) * std::sin(m * reduced_phase(t, p.omega));
}

double ProductionModel::q(double t, const PhysicalParams& p, double q_tilde) const {
  if (kind == ProductionKind::Constant) return q_tilde;
  const double m = harmonic;
  return amp(q_tilde) * std::cos(m * reduced_phase(t, p.omega));
}

double ProductionModel::q_dt(double t, const PhysicalParams& p, double q_tilde) const {
  if (kind == ProductionKind::Constant) return 0.0;
  const double m = harmonic;
  return -amp(q_tilde) * m * p.omega * std::sin(m * reduced_phase(t, p.omega));
}

Model::Model(const PhysicalParams& params, ProductionModel production)
    : Model(params, derive(params), production) {}

Model::Model(const PhysicalParams& params, const DerivedCoefficients& coeffs,
             ProductionModel production)
    : params_(params), coeffs_(coeffs), production_(production) {
  if (production_.harmonic < 1) throw Error("production harmonic must be >= 1");
}

}  // namespace csf
