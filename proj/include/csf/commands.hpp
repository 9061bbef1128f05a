#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "csf/conditions.hpp"
#include "csf/config.hpp"
#include "csf/fd_solver.hpp"
#include "csf/model.hpp"

namespace csf {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitBlowup = 2 };

struct CommandContext {
  std::string out_dir;
  bool quiet = false;
  std::ostream* out = nullptr;
};

/// Ordered key: value pairs written to diagnostics.txt.
class Diagnostics {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, bool value);
  const std::string& get(const std::string& key) const;
  bool has(const std::string& key) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string format_number(double v);

// Builders shared by the commands.
Model make_model(const RunConfig& config);
Grid make_grid(const RunConfig& config);
Profile make_profile(const RunConfig& config);
Vec make_displacement(const RunConfig& config, const Model& model, const Grid& grid, const Vec& f);
InitialData make_initial_data(const RunConfig& config, const Model& model, const Grid& grid);

int cmd_simulate(const RunConfig& config, const CommandContext& ctx);
int cmd_blowup(const RunConfig& config, const CommandContext& ctx);
int cmd_periodic(const RunConfig& config, const CommandContext& ctx);
int cmd_check(const RunConfig& config, const CommandContext& ctx);
int cmd_compare(const RunConfig& config, const CommandContext& ctx);

/// Dispatches on config.mode.
int run_command(const RunConfig& config, const CommandContext& ctx);

/// Parses and validates a diagnostics.txt body.
std::map<std::string, std::string> read_diagnostics(const std::string& text);

}  // namespace csf
