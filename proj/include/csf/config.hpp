#pragma once

#include <limits>
#include <string>
#include <vector>

#include "csf/closure.hpp"
#include "csf/conditions.hpp"
#include "csf/fd_solver.hpp"
#include "csf/model.hpp"
#include "csf/picard.hpp"

namespace csf {

enum class Mode { Simulate, Blowup, Periodic, Check, Compare };
enum class SolverKind { Fd, Picard };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct IcConfig {
  std::string preset = "sine4";  // zero | sine4 | negexp | custom
  double amplitude = std::numeric_limits<double>::quiet_NaN();
  std::string expression;        // u0(z) for the custom preset
  std::string displacement = "balanced";  // balanced | zero | expression
  std::string g_expression;
  double g0 = 0.0;
  PressureMode pressure = PressureMode::Auto;
};

struct RunConfig {
  Mode mode = Mode::Simulate;
  SolverKind solver = SolverKind::Fd;
  Coupling coupling = Coupling::Full;
  std::string preset = "desk";

  PhysicalParams params = PhysicalParams::desk(4.0 * 3.141592653589793 + 1.0);
  ProductionModel production;

  std::size_t n_z = 201;
  double dt = 5e-3;
  double t_end = 1.0;
  std::size_t snapshot_stride = 1;

  IcConfig ic;
  PicardOptions picard;
  BlowupThresholds blowup;
  int k_max = 1;
  std::size_t fan_points = 201;
  bool cross_check = false;

  std::vector<double> deltas = {1e-4, 1e-3, 1e-2};
  double periodic_t_end = std::numeric_limits<double>::quiet_NaN();  // NaN: one period
  double k_bound = 10.0;
  std::size_t residual_samples = 100;

  std::string out_dir = "out";
  bool write_csv = true;
  bool write_dat = true;
};

/// Reads the INI-style schema; quantities are normalized to SI.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Serializes every field in SI units; parse_config(write_config(c)) reproduces c.
std::string write_config(const RunConfig& config);

/// Converts "<number> [unit]" for the named field into SI.
double parse_quantity(const std::string& field, const std::string& text);

}  // namespace csf
