#pragma once

#include <functional>
#include <string>

#include "csf/grid.hpp"
#include "csf/model.hpp"
#include "csf/numerics.hpp"

namespace csf {

/// A velocity profile together with its derivative.
struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
};

enum class PressureMode { Auto, Ode, Closure };

struct InitialData {
  Grid grid;
  Vec f;
  Vec g;
  Vec s;
  // Profile samples before the walls are pinned to zero.
  Vec f_profile;
  // Which construction produced s.
  PressureMode pressure_source = PressureMode::Ode;
};

/// Right-hand side h(z) of the initial-pressure ODE s' - (A rho / alpha) s = h.
Vec build_ic_rhs(const Model& model, const Vec& f, const Vec& g, double dz);

/// P(0, 0) implied by the forcing, production and g(0).
double initial_pressure_left(const Model& model, double g0);

/// Integrates s' - (A rho / alpha) s = h from s(0) with a trapezoid rule whose
/// exponential kernel is integrated exactly.
Vec build_initial_pressure(const Model& model, const Vec& f, const Vec& g, double dz);

/// Growth factor exp(A rho L / alpha) of the initial-pressure integral.
double initial_pressure_growth(const Model& model);

/// Displacement that makes h constant for the given f, so that the pressure
/// integral stays at s(0). Falls back to g = g0 when kappa = 0.
Vec balanced_displacement(const Model& model, const Vec& f, double dz, double g0 = 0.0);

/// Samples f and g on the grid, pins f at the walls and builds s.
InitialData make_initial_data(const Model& model, const Grid& grid, const Vec& f_raw, const Vec& g,
                              PressureMode mode = PressureMode::Auto);

/// Dirichlet traces of eta and P at both walls; u vanishes there.
class BoundaryTraces {
 public:
  BoundaryTraces() = default;
  BoundaryTraces(const Model& model, double g_left, double g_right);

  double eta_left(double t) const { return eta_at(t, g_left_); }
  double eta_right(double t) const { return eta_at(t, g_right_); }
  double p_left(double t) const { return p_at(t, g_left_); }
  double p_right(double t) const { return p_at(t, g_right_); }

 private:
  double eta_at(double t, double g) const;
  double p_at(double t, double g) const;

  Model model_;
  double g_left_ = 0.0;
  double g_right_ = 0.0;
};

BoundaryTraces boundary_traces(const Model& model, const Vec& g);

struct CompatibilityReport {
  double u_left = 0.0;
  double u_right = 0.0;
  double eta_left = 0.0;
  double eta_right = 0.0;
  double p_left = 0.0;
  double s_integral_L = 0.0;
  double s_closed_L = 0.0;
  double s_mismatch = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

CompatibilityReport check_compatibility(const InitialData& ic, const BoundaryTraces& bt,
                                        const Model& model, double tolerance = 1e-9);

enum class Verdict { GlobalExpected, BlowupExpected, Indeterminate };

std::string to_string(Verdict v);

struct AdmissibilityVerdict {
  bool sup_norm_ok = false;
  bool slope_ok = false;
  double min_slope = 0.0;
  double h_k_norm = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Indeterminate;
};

/// max over j <= k_max of the L2 norm of the j-th discrete derivative.
double hk_proxy(const Vec& f, double dz, int k_max);

AdmissibilityVerdict admissibility(const InitialData& ic, const Model& model, int k_max = 1);
AdmissibilityVerdict admissibility(const Vec& f, double dz, double beta_over_rho, int k_max = 1);

}  // namespace csf
