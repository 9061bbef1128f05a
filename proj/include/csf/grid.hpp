#pragma once

#include <cstddef>
#include <vector>

namespace csf {

/// Uniform mesh on [0, length] with a fixed time step.
struct Grid {
  std::size_t n_z = 201;
  double length = 1.0;
  double dz = 1.0 / 200.0;
  double dt = 5e-3;
  double t_end = 1.0;

  Grid() = default;
  Grid(std::size_t n_z, double length, double dt, double t_end);

  double z(std::size_t i) const { return static_cast<double>(i) * dz; }
  std::vector<double> nodes() const;
  /// Number of time steps needed to reach t_end.
  std::size_t n_steps() const;
};

}  // namespace csf
