#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "csf/errors.hpp"
#include "csf/periodic.hpp"
#include "oracles.hpp"

using namespace csf;

namespace {

constexpr double kPi = std::numbers::pi;

PhysicalParams random_params() {
  PhysicalParams p;
  p.rho = csf_test::uniform(0.5, 2.0);
  p.mu = csf_test::uniform(1e-7, 1e-5);
  p.r_lumen = csf_test::uniform(5e-4, 2e-3);
  p.delta_tissue = csf_test::uniform(0.1, 2.0);
  p.area = csf_test::uniform(0.5, 2.0);
  p.k_e = csf_test::uniform(0.0, 5.0);
  p.k_d = csf_test::uniform(0.0, 5.0);
  p.q_p = csf_test::uniform(0.0, 1.0);
  p.p_tissue = csf_test::uniform(0.0, 10.0);
  p.alpha_bar = csf_test::uniform(0.0, 0.1);
  p.omega = csf_test::uniform(1.0, 10.0);
  return p;
}

std::vector<double> random_times(double T, std::size_t n = 100) {
  std::vector<double> t(n);
  for (double& v : t) v = csf_test::uniform(0.0, 3.0 * T);
  return t;
}

Model periodic_desk() {
  PhysicalParams p = PhysicalParams::desk(1.0);
  p.alpha_bar = 0.01;
  p.q_p = 0.01;
  p.k_e = 1.0;
  p.k_d = 0.1;
  p.delta_tissue = 0.1;
  ProductionModel prod;
  prod.kind = ProductionKind::Periodic;
  return Model(p, prod);
}

}  // namespace

TEST(PeriodicSolution, InitialValues) {
  for (int k = 0; k < 5; ++k) {
    const PhysicalParams p = random_params();
    const PeriodicSolution s = build_periodic(Model(p));
    EXPECT_NEAR(s.eta_bar(0.0), -2.0 * kPi / p.omega, 1e-12);
    for (double t : {0.0, 0.3, 2.0}) EXPECT_EQ(s.u_bar(t), 0.0);
    EXPECT_DOUBLE_EQ(s.period, 2.0 * kPi / p.omega);
  }
}

TEST(PeriodicSolution, InitialPressureAgainstClosedForm) {
  for (int k = 0; k < 5; ++k) {
    PhysicalParams p = random_params();
    const Model m(p);
    const PeriodicSolution s = build_periodic(m);
    const double ref = periodic_initial_pressure_reference(m);
    // the reference leaves out the damping of the production rate
    const double damping = m.coeffs().k_tilde * s.F_dt(0.0) / p.area;
    EXPECT_NEAR(s.p_bar(0.0), ref + damping, 1e-10 * std::max(1.0, std::abs(ref)));
    p.k_d = 0.0;
    const Model undamped(p);
    EXPECT_NEAR(build_periodic(undamped).p_bar(0.0), periodic_initial_pressure_reference(undamped),
                1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(PeriodicSolution, ResidualVanishes) {
  for (int k = 0; k < 10; ++k) {
    const PhysicalParams p = random_params();
    for (int harmonic : {1, 3}) {
      ProductionModel prod;
      prod.kind = ProductionKind::Periodic;
      prod.harmonic = harmonic;
      const Model m(p, prod);
      EXPECT_LT(residual(build_periodic(m), m, random_times(period(p))), 1e-10);
    }
  }
}

TEST(PeriodicSolution, ConstantStateWithoutForcing) {
  PhysicalParams p = random_params();
  p.alpha_bar = 0.0;
  p.q_p = 0.0;
  const Model m(p);
  EXPECT_LT(residual(build_periodic(m), m, random_times(period(p))), 1e-14 * std::max(1.0, p.p_tissue));
}

TEST(PeriodicSolution, PressureOffsetShowsInResidual) {
  const PhysicalParams p = random_params();
  const Model m(p);
  PeriodicSolution s = build_periodic(m);
  const auto original = s.p_bar;
  s.p_bar = [original](double t) { return original(t) + 1.0; };
  EXPECT_NEAR(residual(s, m, random_times(period(p))), 1.0, 1e-9);
}

TEST(PeriodicSolution, RejectsProductionAwayFromZero) {
  PeriodicProduction prod{[](double t) { return 1.0 + std::sin(t); }, [](double t) { return std::cos(t); },
                          [](double t) { return -std::sin(t); }};
  EXPECT_THROW(build_periodic(Model(random_params()), prod), Error);
  prod.F = [](double t) { return std::sin(t); };
  EXPECT_NO_THROW(build_periodic(Model(random_params()), prod));
}

TEST(PeriodicSolution, Periodicity) {
  for (int k = 0; k < 5; ++k) {
    const PhysicalParams p = random_params();
    const PeriodicSolution s = build_periodic(Model(p));
    for (double t : random_times(s.period, 50)) {
      EXPECT_NEAR(s.eta_bar(t), s.eta_bar(t + s.period), 1e-10);
      EXPECT_NEAR(s.p_bar(t), s.p_bar(t + s.period), 1e-10 * std::max(1.0, std::abs(s.p_bar(t))));
    }
  }
}

TEST(Stability, UnperturbedRunTracksSolution) {
  // the scheme carries the space-independent solution without truncation error,
  // so the floor is rounding at every resolution
  const Model m = periodic_desk();
  const double T = period(m.params());
  const PeriodicSolution sol = build_periodic(m);
  const double scale = std::max({1.0, std::abs(sol.p_bar(0.0)), std::abs(sol.eta_bar(0.0))});
  for (auto [n, dt] : {std::pair{26u, 4e-3}, std::pair{51u, 2e-3}, std::pair{101u, 1e-3}}) {
    const StabilityResult r = stability_experiment(0.0, m, Grid(n, 1.0, dt, T), T);
    EXPECT_FALSE(r.blowup);
    EXPECT_LT(r.sup_deviation, 1e-9 * scale) << "n = " << n;
  }
}

TEST(Stability, MonotoneAndLinearInDelta) {
  const Model m = periodic_desk();
  const double T = period(m.params());
  const std::vector<StabilityResult> r = stability_sweep({1e-4, 1e-3, 1e-2}, m, Grid(101, 1.0, 1e-3, T), T);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_LT(r[1].sup_deviation, r[2].sup_deviation);
  EXPECT_LT(r[0].sup_deviation, r[1].sup_deviation);
  double lo = r[0].deviation_over_delta, hi = lo;
  for (const auto& x : r) {
    EXPECT_FALSE(x.blowup);
    lo = std::min(lo, x.deviation_over_delta);
    hi = std::max(hi, x.deviation_over_delta);
  }
  EXPECT_LT(hi / lo, 3.0);
}

TEST(Stability, SweepMatchesSerialRuns) {
  const Model m = periodic_desk();
  const double T = 0.2;
  const Grid grid(41, 1.0, 2e-3, T);
  const std::vector<StabilityResult> sweep = stability_sweep({1e-3, 5e-3}, m, grid, T);
  EXPECT_EQ(sweep[0].sup_deviation, stability_experiment(1e-3, m, grid, T).sup_deviation);
  EXPECT_EQ(sweep[1].sup_deviation, stability_experiment(5e-3, m, grid, T).sup_deviation);
}
