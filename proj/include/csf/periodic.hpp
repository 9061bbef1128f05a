#pragma once

#include <functional>
#include <vector>

#include "csf/fd_solver.hpp"
#include "csf/grid.hpp"
#include "csf/model.hpp"

namespace csf {

/// Space-independent periodic production F with its first two derivatives.
struct PeriodicProduction {
  std::function<double(double)> F;
  std::function<double(double)> F_dt;
  std::function<double(double)> F_dtt;

  /// The production law of the model when periodic, otherwise the default
  /// F(t) = (Q / omega) sin(omega t).
  static PeriodicProduction from_model(const Model& model);
};

struct PeriodicSolution {
  std::function<double(double)> eta_bar;
  std::function<double(double)> eta_bar_dt;
  std::function<double(double)> eta_bar_dtt;
  std::function<double(double)> u_bar;
  std::function<double(double)> p_bar;
  std::function<double(double)> F_dt;
  double period = 0.0;
};

PeriodicSolution build_periodic(const Model& model, const PeriodicProduction& production);
PeriodicSolution build_periodic(const Model& model);

/// Pressure at t = 0 in the closed form usually quoted for the periodic
/// initial data (it leaves out the damping term k F'(0) / A).
double periodic_initial_pressure_reference(const Model& model);

/// Largest absolute residual of the three space-independent equations over the
/// samples; the tissue equation is divided by A.
double residual(const PeriodicSolution& sol, const Model& model, const std::vector<double>& t_samples);

struct StabilityResult {
  double delta = 0.0;
  double sup_deviation = 0.0;
  double deviation_over_delta = 0.0;
  bool blowup = false;
  bool bound_satisfied = false;
};

struct StabilityOptions {
  double k_bound = 10.0;
  RunMonitors monitors;
};

/// Perturbs the periodic solution by delta sin(pi z / L) in u and eta, runs the
/// finite-difference solver over [0, T] and records the largest deviation.
StabilityResult stability_experiment(double delta, const Model& model, const Grid& grid, double T,
                                     const StabilityOptions& options = {});

std::vector<StabilityResult> stability_sweep(const std::vector<double>& deltas, const Model& model,
                                             const Grid& grid, double T, const StabilityOptions& options = {});

}  // namespace csf
