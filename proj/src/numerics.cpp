#include "csf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "csf/errors.hpp"
#include "csf/grid.hpp"

namespace csf {

Grid::Grid(std::size_t n, double len, double step, double end)
    : n_z(n), length(len), dz(len / static_cast<double>(n - 1)), dt(step), t_end(end) {
  if (n < 3) throw Error("grid needs at least 3 nodes");
  if (!(len > 0.0) || !std::isfinite(len)) throw Error("grid length must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("time step must be positive");
  if (!(end >= 0.0) || !std::isfinite(end)) throw Error("t_end must be non-negative");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> z(n_z);
  for (std::size_t i = 0; i < n_z; ++i) z[i] = this->z(i);
  z.back() = length;
  return z;
}

std::size_t Grid::n_steps() const {
  const double r = t_end / dt;
  return static_cast<std::size_t>(std::ceil(r - 1e-9 * std::max(1.0, r)));
}

Vec derivative(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  if (n < 3) throw Error("derivative needs at least 3 samples");
  Vec d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

Vec upwind_derivative(std::span<const double> v, std::span<const double> wind, double h) {
  const std::size_t n = v.size();
  if (wind.size() != n) throw GridMismatch("upwind_derivative: size mismatch");
  Vec d(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = wind[i] >= 0.0 ? (v[i] - v[i - 1]) / h : (v[i + 1] - v[i]) / h;
  d[0] = (v[1] - v[0]) / h;
  d[n - 1] = (v[n - 1] - v[n - 2]) / h;
  return d;
}

double trapezoid(std::span<const double> v, double h) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * h;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw GridMismatch("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2_norm(std::span<const double> v, double h) {
  Vec sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [](double x) { return x * x; });
  return std::sqrt(trapezoid(sq, h));
}

double h2_proxy(std::span<const double> v, double h) {
  const Vec d1 = derivative(v, h);
  const Vec d2 = derivative(d1, h);
  const double a = l2_norm(v, h), b = l2_norm(d1, h), c = l2_norm(d2, h);
  return std::sqrt(a * a + b * b + c * c);
}

Vec solve_tridiagonal(Vec lower, Vec diag, Vec upper, Vec rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw GridMismatch("solve_tridiagonal: size mismatch");
  // Banded LU with row swaps; a swapped row can reach two columns right.
  Vec up2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(lower[i + 1]) > std::abs(diag[i])) {
      std::swap(lower[i + 1], diag[i]);
      std::swap(diag[i + 1], upper[i]);
      if (i + 2 < n) std::swap(upper[i + 1], up2[i]);
      std::swap(rhs[i + 1], rhs[i]);
    }
    if (diag[i] == 0.0) throw NumericError("singular tridiagonal system");
    const double m = lower[i + 1] / diag[i];
    diag[i + 1] -= m * upper[i];
    if (i + 2 < n) upper[i + 1] -= m * up2[i];
    rhs[i + 1] -= m * rhs[i];
  }
  if (diag[n - 1] == 0.0) throw NumericError("singular tridiagonal system");
  Vec x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  if (n >= 2) x[n - 2] = (rhs[n - 2] - upper[n - 2] * x[n - 1]) / diag[n - 2];
  for (std::size_t k = n - 2; k-- > 0;)
    x[k] = (rhs[k] - upper[k] * x[k + 1] - up2[k] * x[k + 2]) / diag[k];
  return x;
}

Vec sample(const std::function<double(double)>& f, std::span<const double> nodes) {
  Vec v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f(nodes[i]);
  return v;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace csf
