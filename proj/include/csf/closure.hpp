#pragma once

#include "csf/model.hpp"
#include "csf/numerics.hpp"

namespace csf {

enum class Coupling {
  Full,       // pressure force acts on the flow
  Decoupled,  // damped Burgers; pressure is still reported
};

struct ClosureResult {
  Vec u_t;
  Vec p;
};

/// Instantaneous acceleration and pressure for a given (u, eta) at time t.
///
/// Eliminating eta_tt between the displacement and pressure equations turns the
/// momentum balance into rho w - (alpha / A) w_z = R for w = u_t, which is solved
/// with centered differences and w = 0 at the walls. The pressure then follows
/// pointwise from the displacement equation.
ClosureResult closure(const Model& model, double t, const Vec& u, const Vec& eta, double dz,
                      Coupling coupling = Coupling::Full);

/// Pressure implied by (u, u_t, eta) through the tissue equation.
Vec pressure_from(const Model& model, double t, const Vec& u, const Vec& u_t, const Vec& eta);

}  // namespace csf
