#pragma once

#include <cstddef>
#include <vector>

#include "csf/grid.hpp"
#include "csf/model.hpp"
#include "csf/numerics.hpp"

namespace csf {

/// Values on the (time x space) lattice, row k holding time level k.
struct Field {
  std::size_t n_t = 0;
  std::size_t n_z = 0;
  Vec data;

  Field() = default;
  Field(std::size_t nt, std::size_t nz, double value = 0.0) : n_t(nt), n_z(nz), data(nt * nz, value) {}
  double& operator()(std::size_t k, std::size_t i) { return data[k * n_z + i]; }
  double operator()(std::size_t k, std::size_t i) const { return data[k * n_z + i]; }
  std::span<const double> row(std::size_t k) const { return {data.data() + k * n_z, n_z}; }
  Vec row_copy(std::size_t k) const { return Vec(row(k).begin(), row(k).end()); }
  /// f replicated at every time level.
  static Field replicate(const Vec& f, std::size_t nt);
};

/// Uniform time levels 0, dt, ..., T (the last level lands exactly on T).
Vec time_levels(double T, double dt);

struct IterationState {
  std::size_t n = 0;
  Field u_n;
  Field eta_n;
  Field p_n;
  double diff_sup = 0.0;
};

Field eta_update(const Field& u_n, const Vec& g, const Model& model, const Vec& t);

/// `u_t0` is the acceleration used at t = 0; empty means zero.
Field pressure_update(const Field& u_n, const Vec& g, const Model& model, const Vec& t,
                      const Vec& u_t0 = {});

/// Linear transport with frozen advection velocity u_n, forced by -P_z / rho.
/// Throws CflViolation when max|u_n| dt/dz >= 1.
Field velocity_update(const Field& u_n, const Field& p_next, const Vec& f, const Model& model,
                      const Vec& t, double dz);

struct PicardOptions {
  double tol = 1e-8;
  std::size_t n_max = 50;
  std::size_t not_contracting_after = 3;
};

struct PicardResult {
  IterationState state;
  std::vector<double> diffs;
  std::vector<double> ratios;
  bool converged = false;
  Vec t;
};

/// Repeats the three updates until successive velocity iterates differ by
/// less than tol in the sup norm.
PicardResult iterate(const Vec& f, const Vec& g, const Model& model, double T, const Grid& grid,
                     const PicardOptions& options = {});

}  // namespace csf
