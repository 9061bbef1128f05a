#pragma once

#include <functional>
#include <span>
#include <vector>

namespace csf {

using Vec = std::vector<double>;

/// First derivative: centered inside, second-order one-sided at both ends.
Vec derivative(std::span<const double> v, double h);

/// First-order upwind derivative driven by the sign of `wind` (interior nodes;
/// end nodes get one-sided values).
Vec upwind_derivative(std::span<const double> v, std::span<const double> wind, double h);

/// Composite trapezoid over uniformly spaced samples.
double trapezoid(std::span<const double> v, double h);

double max_abs(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Discrete L2 norm with trapezoid weights.
double l2_norm(std::span<const double> v, double h);

/// sqrt(|v|^2 + |v'|^2 + |v''|^2) in the discrete L2 sense.
double h2_proxy(std::span<const double> v, double h);

/// Solves a tridiagonal system with partial pivoting. `lower[i]` couples row i
/// to column i-1 and `upper[i]` row i to column i+1.
Vec solve_tridiagonal(Vec lower, Vec diag, Vec upper, Vec rhs);

Vec sample(const std::function<double(double)>& f, std::span<const double> nodes);

bool all_finite(std::span<const double> v);

}  // namespace csf
