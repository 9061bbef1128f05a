#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "csf/closure.hpp"
#include "csf/conditions.hpp"
#include "csf/grid.hpp"
#include "csf/model.hpp"

namespace csf {

/// Fields at one time level. `u_t` is the acceleration from the closure at t.
struct State {
  double t = 0.0;
  Vec u;
  Vec eta;
  Vec p;
  Vec u_t;
};

struct BlowupDetected {
  double t_blow = 0.0;
  double max_grad = 0.0;
  double max_u = 0.0;
  std::string reason;
};

struct BlowupThresholds {
  double grad_threshold = 1e4;
  double u_threshold = 1e6;
};

struct SolverOptions {
  Coupling coupling = Coupling::Full;
  BlowupThresholds blowup;
};

/// Either the advanced state or the reason the run stopped.
struct StepOutcome {
  State state;
  std::optional<BlowupDetected> blowup;
};

/// Initial state: fields from the initial data, acceleration from the closure.
State initial_state(const InitialData& ic, const Model& model, Coupling coupling = Coupling::Full);

/// One forward-Euler step of the coupled system. Throws CflViolation when
/// max|u| dt/dz >= 1.
StepOutcome step(const State& state, const Model& model, const Grid& grid, const BoundaryTraces& bt,
                 const SolverOptions& options = {});

/// Checks a state against the blow-up thresholds.
std::optional<BlowupDetected> detect_blowup(const State& state, double dz, const BlowupThresholds& th);

struct SystemResidual {
  double displacement = std::numeric_limits<double>::quiet_NaN();
  double tissue = std::numeric_limits<double>::quiet_NaN();
  double momentum = std::numeric_limits<double>::quiet_NaN();
};

/// Finite-difference residuals of the three equations at the newest of three
/// consecutive states (interior nodes only).
SystemResidual system_residual(const Model& model, double dz, const State& s0, const State& s1,
                               const State& s2);

struct RunDiagnostics {
  double cfl_max = 0.0;
  double max_gradient = 0.0;
  std::size_t steps = 0;
  SystemResidual residual;
  std::optional<BlowupDetected> blowup;
};

struct RunMonitors {
  std::size_t snapshot_stride = 1;
  SolverOptions options;
};

struct RunResult {
  std::vector<State> snapshots;
  State final_state;
  RunDiagnostics diagnostics;
};

RunResult run(const InitialData& ic, const BoundaryTraces& bt, const Model& model, const Grid& grid,
              const RunMonitors& monitors = {});

}  // namespace csf
