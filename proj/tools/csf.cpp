#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "csf/commands.hpp"
#include "csf/config.hpp"
#include "csf/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"csf: cerebrospinal fluid and tissue dynamics solver"};
  std::string mode;
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  app.add_option("mode", mode, "simulate | blowup | periodic | check | compare")->required();
  app.add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_flag("--quiet", quiet, "suppress the diagnostics summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? csf::kExitOk : csf::kExitError;
  }

  try {
    csf::RunConfig cfg = csf::load_config(config_path);
    cfg.mode = csf::parse_mode(mode);
    csf::CommandContext ctx;
    ctx.out_dir = out_dir;
    ctx.quiet = quiet;
    ctx.out = &std::cout;
    return csf::run_command(cfg, ctx);
  } catch (const std::exception& e) {
    std::cerr << "csf: " << e.what() << '\n';
    return csf::kExitError;
  }
}
