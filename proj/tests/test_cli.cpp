#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "csf/commands.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("csf_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  int csf(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " " + CSF_BINARY + " " + args + " >" + (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  int run_mode(const std::string& mode, const fs::path& config, const fs::path& out, const std::string& env = "") {
    return csf(mode + " --config " + config.string() + " --out " + out.string() + " --quiet", env);
  }

  std::map<std::string, std::string> diagnostics(const fs::path& out) const {
    return csf::read_diagnostics(slurp(out / "diagnostics.txt"));
  }

  fs::path dir_;
};

std::size_t data_rows(const std::string& csv) {
  std::size_t n = 0;
  for (char c : csv) n += c == '\n';
  return n - 1;
}

constexpr char kSine4[] =
    "[run]\nmode = simulate\npreset = desk\n"
    "[params]\nbeta_over_rho = 13.566370614359172\n"
    "[grid]\nn_z = 101\ndt = 2e-3\nt_end = 0.2\nsnapshot_stride = 25\n"
    "[ic]\npreset = sine4\n";

}  // namespace

TEST_F(Cli, SmoothRunSucceeds) {
  ASSERT_EQ(run_mode("simulate", write("c.ini", kSine4), dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const std::string final_csv = slurp(dir_ / "out" / "final.csv");
  EXPECT_EQ(final_csv.substr(0, final_csv.find('\n')), "t,z,u,eta,p");
  EXPECT_EQ(data_rows(final_csv), 101u);
  EXPECT_EQ(data_rows(slurp(dir_ / "out" / "trajectory.csv")), 101u * 5);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trajectory.dat"));
  const auto d = diagnostics(dir_ / "out");
  EXPECT_EQ(d.at("status"), "completed");
  EXPECT_EQ(d.at("blowup_detected"), "false");
  EXPECT_EQ(d.at("admissibility_verdict"), "GlobalExpected");
  EXPECT_EQ(final_csv.find('\r'), std::string::npos);
}

TEST_F(Cli, SteepProfileReportsBlowup) {
  const fs::path cfg = fs::path(CSF_SOURCE_DIR) / "configs" / "simulate_negexp.ini";
  ASSERT_EQ(run_mode("simulate", cfg, dir_ / "out"), 2) << slurp(dir_ / "stderr.txt");
  const auto d = diagnostics(dir_ / "out");
  EXPECT_EQ(d.at("blowup_detected"), "true");
  EXPECT_GT(std::stod(d.at("blowup_time")), 0.0);
  EXPECT_TRUE(std::isfinite(std::stod(d.at("predicted_blowup_time"))));
  EXPECT_EQ(d.at("admissibility_verdict"), "BlowupExpected");
}

TEST_F(Cli, EmptyHorizonWritesInitialData) {
  std::string cfg = kSine4;
  cfg.replace(cfg.find("t_end = 0.2"), 11, "t_end = 0");
  ASSERT_EQ(run_mode("simulate", write("c.ini", cfg), dir_ / "out"), 0);
  const std::string traj = slurp(dir_ / "out" / "trajectory.csv");
  EXPECT_EQ(data_rows(traj), 101u);
  std::istringstream rows(traj);
  std::string line;
  std::getline(rows, line);
  const double pi = 3.141592653589793;
  for (int i = 0; std::getline(rows, line); ++i) {
    double t, z, u;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &z, &u), 3);
    EXPECT_EQ(t, 0.0);
    const double expect = (i == 0 || i == 100) ? 0.0 : 4.0 * std::sin(pi * z);
    EXPECT_NEAR(u, expect, 1e-15);
  }
}

TEST_F(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run_mode("simulate", write("bad.ini", "[grid]\nn_z = 11\n"), dir_ / "out"), 1);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("run.mode"), std::string::npos);
  EXPECT_EQ(run_mode("simulate", write("unit.ini", "[run]\nmode = simulate\n[params]\nq_p = 1 parsec\n"), dir_ / "o"),
            1);
  EXPECT_EQ(csf("simulate --config " + (dir_ / "missing.ini").string()), 1);
  EXPECT_EQ(csf("explode --config " + write("c.ini", kSine4).string()), 1);
  EXPECT_NE(csf(""), 0);
}

TEST_F(Cli, CflViolationExitsOne) {
  std::string cfg = kSine4;
  cfg.replace(cfg.find("dt = 2e-3"), 9, "dt = 5e-2");
  EXPECT_EQ(run_mode("simulate", write("c.ini", cfg), dir_ / "out"), 1);
}

TEST_F(Cli, PeriodicMode) {
  const std::string cfg =
      "[run]\nmode = periodic\npreset = desk\n[params]\nbeta_over_rho = 1\nproduction = periodic\n"
      "k_e = 1\nk_d = 0.1\ndelta_tissue = 0.1\nalpha_bar = 0.01\nq_p = 0.01\n"
      "[grid]\nn_z = 41\ndt = 2e-3\n[periodic]\ndeltas = 1e-3, 1e-2\nt_end = 0.2\n";
  ASSERT_EQ(run_mode("periodic", write("c.ini", cfg), dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto d = diagnostics(dir_ / "out");
  EXPECT_LT(std::stod(d.at("periodic_residual")), 1e-10);
  EXPECT_EQ(d.at("periodic_residual_pass"), "true");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "periodic.csv"));
}

TEST_F(Cli, CheckModePasses) {
  const fs::path cfg = fs::path(CSF_SOURCE_DIR) / "configs" / "check.ini";
  ASSERT_EQ(run_mode("check", cfg, dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto d = diagnostics(dir_ / "out");
  for (const char* key : {"u_left_status", "u_right_status", "eta_left_status", "eta_right_status", "p_left_status"})
    EXPECT_EQ(d.at(key), "PASS") << key;
  EXPECT_EQ(d.at("s_mismatch_status"), "REPORTED");
}

TEST_F(Cli, CompareWithinTolerance) {
  const fs::path cfg = fs::path(CSF_SOURCE_DIR) / "configs" / "compare.ini";
  ASSERT_EQ(run_mode("compare", cfg, dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto d = diagnostics(dir_ / "out");
  EXPECT_LE(std::stod(d.at("linf_u")), std::stod(d.at("tolerance_u")));
  EXPECT_EQ(d.at("linf_u_within_tolerance"), "true");
}

TEST_F(Cli, BlowupModeClassifiesFan) {
  const std::string cfg =
      "[run]\nmode = blowup\npreset = desk\n[params]\nbeta_over_rho = 0.5\n"
      "[grid]\nn_z = 101\ndt = 1e-3\n[ic]\npreset = negexp\n[blowup]\nfan_points = 101\n";
  ASSERT_EQ(run_mode("blowup", write("c.ini", cfg), dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto d = diagnostics(dir_ / "out");
  EXPECT_EQ(d.at("characteristics"), "FiniteTime");
  const double e = std::exp(1.0);
  EXPECT_NEAR(std::stod(d.at("min_blowup_time")), 2.0 * std::log(e / (e - 0.5)), 1e-12);
  EXPECT_EQ(std::stod(d.at("min_blowup_lambda")), 1.0);
  EXPECT_EQ(data_rows(slurp(dir_ / "out" / "blowup.csv")), 101u);
}

TEST_F(Cli, OutputIsDeterministic) {
  const fs::path cfg = write("c.ini", kSine4);
  ASSERT_EQ(run_mode("simulate", cfg, dir_ / "a"), 0);
  ASSERT_EQ(run_mode("simulate", cfg, dir_ / "b"), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "b" / "trajectory.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "final.csv"), slurp(dir_ / "b" / "final.csv"));
}

TEST_F(Cli, ThreadCapDoesNotChangeResults) {
  const std::string cfg =
      "[run]\nmode = periodic\npreset = desk\n[params]\nbeta_over_rho = 1\nk_e = 1\nalpha_bar = 0.01\n"
      "[grid]\nn_z = 31\ndt = 2e-3\n[periodic]\ndeltas = 1e-4, 1e-3, 1e-2\nt_end = 0.1\n";
  const fs::path c = write("c.ini", cfg);
  ASSERT_EQ(run_mode("periodic", c, dir_ / "one", "CSF_THREADS=1"), 0);
  ASSERT_EQ(run_mode("periodic", c, dir_ / "four", "CSF_THREADS=4"), 0);
  EXPECT_EQ(slurp(dir_ / "one" / "periodic.csv"), slurp(dir_ / "four" / "periodic.csv"));
}

TEST_F(Cli, ReloadedConfigReproducesDiagnostics) {
  const csf::RunConfig a = csf::parse_config(kSine4);
  const fs::path c2 = write("c2.ini", csf::write_config(a));
  ASSERT_EQ(run_mode("simulate", write("c.ini", kSine4), dir_ / "a"), 0);
  ASSERT_EQ(run_mode("simulate", c2, dir_ / "b"), 0);
  auto da = diagnostics(dir_ / "a"), db = diagnostics(dir_ / "b");
  da.erase("wall_clock_s");
  db.erase("wall_clock_s");
  EXPECT_EQ(da, db);
}

TEST(Diagnostics, FormatAndParse) {
  csf::Diagnostics d;
  d.set("alpha", 0.1);
  d.set("flag", true);
  d.set("name", std::string("x y"));
  d.set("alpha", 0.25);
  EXPECT_EQ(d.str(), "alpha: 0.25\nflag: true\nname: x y\n");
  const auto m = csf::read_diagnostics(d.str());
  EXPECT_EQ(m.at("name"), "x y");
  EXPECT_EQ(csf::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csf::format_number(NAN), "nan");
  EXPECT_EQ(csf::format_number(-INFINITY), "-inf");
}
