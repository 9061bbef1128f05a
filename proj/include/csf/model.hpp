#pragma once

#include <cmath>
#include <limits>

namespace csf {

/// Raw constants in SI units.
struct PhysicalParams {
  double rho = 1.0;           // kg/m^3
  double mu = 1.0;            // Pa s
  double r_lumen = 1e-3;      // m
  double delta_tissue = 1.0;  // m
  double area = 1.0;          // m^2
  double k_e = 0.0;           // N/m
  double k_d = 0.0;           // N s/m
  double q_p = 0.0;           // m^3/s
  double p_tissue = 0.0;      // Pa
  double alpha_bar = 0.0;     // m
  double omega = 6.283185307179586;
  double length = 1.0;        // m

  /// Physiological defaults (fluid and tissue properties of the human ventricles).
  static PhysicalParams table1();
  /// Nondimensional desk-scale set with rho = 1 and the requested beta/rho.
  static PhysicalParams desk(double beta_over_rho);

  double beta_over_rho() const;
  /// Sets mu so that 8 mu / (rho r^2) equals the given value.
  void set_beta_over_rho(double value);
  /// Throws csf::Error when an invariant does not hold.
  void validate() const;
};

struct DerivedCoefficients {
  double alpha = 0.0;
  double k_tilde = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double q_tilde = 0.0;
};

DerivedCoefficients derive(const PhysicalParams& params);

/// Choroid expansion a(t) and its analytic derivatives.
double forcing(double t, const PhysicalParams& params);
double forcing_dt(double t, const PhysicalParams& params);
double forcing_dtt(double t, const PhysicalParams& params);

double period(const PhysicalParams& params);

/// omega t reduced to [0, 2 pi).
double phase(double t, const PhysicalParams& params);

/// Default periodic production antiderivative F(t) = (Q/omega) sin(omega t).
double production_F(double t, const PhysicalParams& params);

enum class ProductionKind { Constant, Periodic };

/// CSF production per unit area. Constant: Q(t) = q t. Periodic: Q(t) = F(t)
/// with F(t) = (amplitude / (m omega)) sin(m omega t), amplitude defaulting to q.
struct ProductionModel {
  ProductionKind kind = ProductionKind::Constant;
  double amplitude = std::numeric_limits<double>::quiet_NaN();  // NaN: use q
  int harmonic = 1;

  double amp(double q_tilde) const { return std::isnan(amplitude) ? q_tilde : amplitude; }

  /// Volume per area produced on [0, t].
  double Q(double t, const PhysicalParams& params, double q_tilde) const;
  /// Rate dQ/dt.
  double q(double t, const PhysicalParams& params, double q_tilde) const;
  /// dq/dt.
  double q_dt(double t, const PhysicalParams& params, double q_tilde) const;
};

/// Parameters, derived coefficients and production law bundled together.
class Model {
 public:
  Model() : Model(PhysicalParams{}) {}
  explicit Model(const PhysicalParams& params, ProductionModel production = {});
  /// Escape hatch for tests and analyses that need coefficient values not
  /// reachable from a physical parameter set.
  Model(const PhysicalParams& params, const DerivedCoefficients& coeffs,
        ProductionModel production = {});

  const PhysicalParams& params() const { return params_; }
  const DerivedCoefficients& coeffs() const { return coeffs_; }
  const ProductionModel& production() const { return production_; }

  double a(double t) const { return forcing(t, params_); }
  double a_dt(double t) const { return forcing_dt(t, params_); }
  double a_dtt(double t) const { return forcing_dtt(t, params_); }
  double Q(double t) const { return production_.Q(t, params_, coeffs_.q_tilde); }
  double q(double t) const { return production_.q(t, params_, coeffs_.q_tilde); }
  double q_dt(double t) const { return production_.q_dt(t, params_, coeffs_.q_tilde); }

  double beta_over_rho() const { return coeffs_.beta / params_.rho; }
  double period() const { return csf::period(params_); }

 private:
  PhysicalParams params_;
  DerivedCoefficients coeffs_;
  ProductionModel production_;
};

}  // namespace csf
