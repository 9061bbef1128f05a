#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "csf/closure.hpp"
#include "csf/conditions.hpp"
#include "csf/errors.hpp"
#include "oracles.hpp"

using namespace csf;

namespace {

constexpr double kPi = std::numbers::pi;

// rho = A = delta = 1 so alpha = 1; beta = 1.
PhysicalParams unit_params() {
  PhysicalParams p;
  p.rho = 1.0;
  p.area = 1.0;
  p.delta_tissue = 1.0;
  p.k_d = 1.0;
  p.k_e = 1.0;
  p.alpha_bar = 1.0;
  p.omega = 1.0;
  p.q_p = 0.0;
  p.p_tissue = 0.0;
  p.set_beta_over_rho(1.0);
  return p;
}

PhysicalParams moderate_params() {
  PhysicalParams p = PhysicalParams::desk(1.0);
  p.delta_tissue = 0.5;
  p.k_e = 1.0;
  p.k_d = 0.5;
  p.alpha_bar = 0.1;
  p.q_p = 0.1;
  p.p_tissue = 1.0;
  return p;
}

}  // namespace

TEST(IcRhs, ConstantWhenDataVanish) {
  PhysicalParams p = unit_params();
  p.alpha_bar = 0.3;
  p.omega = 2.0;
  p.k_d = 0.7;
  const Model m(p);
  const Vec zero(11, 0.0);
  const Vec h = build_ic_rhs(m, zero, zero, 0.1);
  const double expect = p.rho * 0.3 * 4.0 - (p.rho / 1.0) * 0.3 * 0.7 * 2.0;
  for (double v : h) EXPECT_NEAR(v, expect, 1e-14);
}

TEST(IcRhs, VanishesWithoutForcing) {
  PhysicalParams p = unit_params();
  p.alpha_bar = 0.0;
  const Vec zero(11, 0.0);
  for (double v : build_ic_rhs(Model(p), zero, zero, 0.1)) EXPECT_EQ(v, 0.0);
}

TEST(IcRhs, UnitCoefficients) {
  const Vec h = build_ic_rhs(Model(unit_params()), Vec(11, 0.0), Vec(11, 1.0), 0.1);
  for (double v : h) EXPECT_NEAR(v, -1.0, 1e-14);
}

TEST(IcRhs, GridMismatch) {
  EXPECT_THROW(build_ic_rhs(Model(unit_params()), Vec(11, 0.0), Vec(10, 0.0), 0.1), GridMismatch);
}

TEST(InitialPressure, ZeroData) {
  PhysicalParams p = unit_params();
  p.alpha_bar = 0.0;
  p.k_e = 0.0;
  for (double v : build_initial_pressure(Model(p), Vec(21, 0.0), Vec(21, 0.0), 0.05)) EXPECT_EQ(v, 0.0);
}

TEST(InitialPressure, LeftValueIsTissuePressure) {
  PhysicalParams p = unit_params();
  p.alpha_bar = 0.0;
  p.p_tissue = 5.0;
  EXPECT_DOUBLE_EQ(initial_pressure_left(Model(p), 0.0), 5.0);
}

TEST(InitialPressure, MatchesAdaptiveOdeSolution) {
  const PhysicalParams p = moderate_params();
  const Model m(p);
  const auto& c = m.coeffs();
  auto f = [](double z) { return std::sin(kPi * z); };
  auto fp = [](double z) { return kPi * std::cos(kPi * z); };
  auto g = [](double z) { return 0.1 * std::cos(kPi * z); };
  const double w = p.omega, ab = p.alpha_bar;
  auto h = [&](double z) {
    return p.rho * ab * w * w - p.rho * f(z) * fp(z) - c.beta * f(z) -
           (p.rho / c.alpha) * (ab * c.k_tilde * w + c.k_tilde * c.q_tilde - c.k_tilde * f(z) + c.kappa * g(z) +
                                p.area * p.p_tissue);
  };
  const double k = p.area * p.rho / c.alpha;
  const double s0 = p.p_tissue - ab * c.alpha * w * w / p.area + c.k_tilde * ab * w / p.area +
                    c.k_tilde * c.q_tilde / p.area + c.kappa / p.area * g(0.0);
  double prev = 0.0;
  for (std::size_t n : {41u, 81u, 161u, 321u}) {
    const Grid grid(n, 1.0, 1.0, 0.0);
    const Vec z = grid.nodes();
    const Vec s = build_initial_pressure(m, sample(f, z), sample(g, z), grid.dz);
    EXPECT_NEAR(s[0], s0, 1e-12 * std::abs(s0));
    const Vec ref = csf_test::dopri5([&](double x, double y) { return k * y + h(x); }, s0, z);
    const double err = max_abs_diff(s, ref);
    if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 1.8) << "n = " << n;
    prev = err;
  }
}

TEST(InitialPressure, BalancedDisplacementFreezesPressure) {
  const Model m(moderate_params());
  const Grid grid(101, 1.0, 1.0, 0.0);
  Vec f = sample([](double z) { return 0.5 * std::sin(kPi * z); }, grid.nodes());
  f.front() = f.back() = 0.0;
  const Vec g = balanced_displacement(m, f, grid.dz, 0.2);
  const Vec h = build_ic_rhs(m, f, g, grid.dz);
  for (double v : h) EXPECT_NEAR(v, h[0], 1e-12 * std::max(1.0, std::abs(h[0])));
  const Vec s = build_initial_pressure(m, f, g, grid.dz);
  for (double v : s) EXPECT_NEAR(v, s[0], 1e-10 * std::max(1.0, std::abs(s[0])));
}

TEST(InitialPressure, ClosureConvergesToOdeOnBalancedData) {
  const Model m(moderate_params());
  double prev = 0.0;
  for (std::size_t n : {101u, 201u, 401u}) {
    const Grid grid(n, 1.0, 1.0, 0.0);
    const Vec f = sample([](double z) { return 0.5 * std::sin(kPi * z); }, grid.nodes());
    const Vec g = balanced_displacement(m, f, grid.dz);
    const InitialData ode = make_initial_data(m, grid, f, g, PressureMode::Ode);
    const InitialData cl = make_initial_data(m, grid, f, g, PressureMode::Closure);
    EXPECT_EQ(ode.pressure_source, PressureMode::Ode);
    EXPECT_EQ(cl.pressure_source, PressureMode::Closure);
    const double err = max_abs_diff(ode.s, cl.s);
    if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 0.9) << "n = " << n;
    prev = err;
  }
}

TEST(InitialPressure, AutoFallsBackWhenIntegralOverflows) {
  const Model desk(PhysicalParams::desk(1.0));
  EXPECT_GT(initial_pressure_growth(desk), 1e12);
  const Grid grid(51, 1.0, 1e-3, 0.0);
  const InitialData ic = make_initial_data(desk, grid, Vec(51, 0.0), Vec(51, 0.0));
  EXPECT_EQ(ic.pressure_source, PressureMode::Closure);
  EXPECT_THROW(build_initial_pressure(desk, Vec(51, 0.1), Vec(51, 0.0), grid.dz), NumericError);
}

TEST(MakeInitialData, PinsVelocityAtWalls) {
  const Model m(moderate_params());
  const Grid grid(21, 1.0, 1e-3, 0.0);
  const InitialData ic = make_initial_data(m, grid, Vec(21, 1.0), Vec(21, 0.0));
  EXPECT_EQ(ic.f.front(), 0.0);
  EXPECT_EQ(ic.f.back(), 0.0);
  EXPECT_EQ(ic.f_profile.front(), 1.0);
  EXPECT_THROW(make_initial_data(m, grid, Vec(20, 1.0), Vec(21, 0.0)), GridMismatch);
}

TEST(BoundaryTraces, StartFromInitialData) {
  const Model m(moderate_params());
  const Grid grid(41, 1.0, 1e-3, 0.0);
  const Vec z = grid.nodes();
  const Vec g = sample([](double x) { return 0.3 + x; }, z);
  const InitialData ic = make_initial_data(m, grid, sample([](double x) { return std::sin(kPi * x); }, z), g);
  const BoundaryTraces bt = boundary_traces(m, g);
  EXPECT_NEAR(bt.eta_left(0.0), g.front(), 1e-15);
  EXPECT_NEAR(bt.eta_right(0.0), g.back(), 1e-15);
  EXPECT_NEAR(bt.p_left(0.0), ic.s.front(), 1e-12 * std::max(1.0, std::abs(ic.s.front())));
}

TEST(BoundaryTraces, PressureSatisfiesTissueEquationAtWall) {
  // With u = 0 at the wall, P = P~ + (alpha eta_tt + k eta_t + kappa eta) / A.
  for (ProductionKind kind : {ProductionKind::Constant, ProductionKind::Periodic}) {
    ProductionModel prod;
    prod.kind = kind;
    const Model m(moderate_params(), prod);
    const auto& c = m.coeffs();
    const auto& p = m.params();
    const BoundaryTraces bt(m, 0.4, -0.2);
    for (double t : csf_test::linspace(0.0, 3.0, 37)) {
      const double eta = 0.4 - m.a(t) + 0.3 * p.alpha_bar + m.Q(t);
      const double eta_t = -m.a_dt(t) + m.q(t);
      const double eta_tt = -m.a_dtt(t) + m.q_dt(t);
      const double expect = p.p_tissue + (c.alpha * eta_tt + c.k_tilde * eta_t + c.kappa * eta) / p.area;
      EXPECT_NEAR(bt.p_left(t), expect, 1e-12 * std::max(1.0, std::abs(expect)));
      EXPECT_NEAR(bt.eta_left(t), eta, 1e-14);
    }
  }
}

TEST(BoundaryTraces, PeriodicWithoutProduction) {
  PhysicalParams p = moderate_params();
  p.q_p = 0.0;
  const BoundaryTraces bt(Model(p), 0.1, 0.1);
  for (double t : {0.0, 0.37, 1.2, 2.9})
    EXPECT_NEAR(bt.p_left(t), bt.p_left(t + period(p)), 1e-12 * std::max(1.0, std::abs(bt.p_left(t))));
}

TEST(Compatibility, ConsistentDataPass) {
  const Model m(moderate_params());
  const Grid grid(101, 1.0, 1e-3, 0.0);
  const Vec z = grid.nodes();
  const Vec g = sample([](double x) { return 0.1 * std::cos(kPi * x); }, z);
  const InitialData ic = make_initial_data(m, grid, sample([](double x) { return std::sin(kPi * x); }, z), g);
  const CompatibilityReport r = check_compatibility(ic, boundary_traces(m, g), m);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.u_left, 1e-15);
  EXPECT_LT(r.u_right, 1e-15);
  EXPECT_LE(r.p_left, 1e-12 * std::abs(ic.s.front()));
  EXPECT_TRUE(std::isfinite(r.s_mismatch));
  // right-end closed form evaluated independently
  const auto& c = m.coeffs();
  const auto& p = m.params();
  const double closed = p.p_tissue - (c.alpha * p.alpha_bar * p.omega * p.omega +
                                      p.alpha_bar * c.k_tilde * p.omega + c.kappa * g.back()) / p.area;
  EXPECT_DOUBLE_EQ(r.s_closed_L, closed);
  EXPECT_EQ(r.s_integral_L, ic.s.back());
  EXPECT_DOUBLE_EQ(r.s_mismatch, std::abs(ic.s.back() - closed));
}

TEST(Compatibility, NonvanishingProfileFails) {
  const Model m(moderate_params());
  const Grid grid(51, 1.0, 1e-3, 0.0);
  const InitialData ic = make_initial_data(m, grid, Vec(51, -1.0), Vec(51, 0.0));
  const CompatibilityReport r = check_compatibility(ic, boundary_traces(m, ic.g), m);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.u_left, 1.0);
}

TEST(Admissibility, ZeroProfile) {
  EXPECT_EQ(admissibility(Vec(51, 0.0), 0.02, 1.0).verdict, Verdict::GlobalExpected);
}

TEST(Admissibility, ExponentialProfileBlowsUp) {
  const Grid grid(201, 1.0, 1e-3, 0.0);
  const Vec f = sample([](double x) { return -std::exp(x); }, grid.nodes());
  const AdmissibilityVerdict v = admissibility(f, grid.dz, 0.5);
  EXPECT_EQ(v.verdict, Verdict::BlowupExpected);
  EXPECT_FALSE(v.slope_ok);
  EXPECT_NEAR(v.min_slope, -std::exp(1.0), 1e-4);
}

TEST(Admissibility, SineProfileDependsOnScaling) {
  const Grid grid(201, 1.0, 1e-3, 0.0);
  const Vec f = sample([](double x) { return 4.0 * std::sin(kPi * x); }, grid.nodes());
  const double table1 = PhysicalParams::table1().beta_over_rho();
  EXPECT_NEAR(table1, 8000.0 / 1004.0, 1e-12);
  EXPECT_EQ(admissibility(f, grid.dz, table1).verdict, Verdict::BlowupExpected);
  const AdmissibilityVerdict desk = admissibility(f, grid.dz, 4.0 * kPi + 1.0);
  EXPECT_EQ(desk.verdict, Verdict::GlobalExpected);
  EXPECT_TRUE(desk.slope_ok && desk.sup_norm_ok);
  // the second derivative norm 4 pi^2 / sqrt 2 exceeds the threshold
  EXPECT_EQ(admissibility(f, grid.dz, 4.0 * kPi + 1.0, 2).verdict, Verdict::Indeterminate);
}

TEST(Admissibility, StableUnderRefinement) {
  for (double b : {0.5, 3.0, 13.0}) {
    Verdict first{};
    for (std::size_t n : {101u, 201u, 401u, 801u}) {
      const Grid grid(n, 1.0, 1e-3, 0.0);
      const Verdict v =
          admissibility(sample([](double x) { return 2.0 * std::sin(kPi * x); }, grid.nodes()), grid.dz, b).verdict;
      if (n == 101u) first = v;
      EXPECT_EQ(v, first) << "beta/rho " << b << " n " << n;
    }
  }
}

TEST(Admissibility, GlobalImpliesBothFlags) {
  for (int k = 0; k < 200; ++k) {
    const double amp = csf_test::uniform(-3.0, 3.0), b = csf_test::uniform(0.1, 20.0);
    const Grid grid(101, 1.0, 1e-3, 0.0);
    const AdmissibilityVerdict v =
        admissibility(sample([&](double x) { return amp * std::sin(kPi * x); }, grid.nodes()), grid.dz, b);
    if (v.verdict == Verdict::GlobalExpected) EXPECT_TRUE(v.slope_ok && v.sup_norm_ok);
    if (v.verdict == Verdict::BlowupExpected) EXPECT_FALSE(v.slope_ok);
  }
}

TEST(Admissibility, RejectsHighOrder) {
  EXPECT_THROW(admissibility(Vec(51, 0.0), 0.02, 1.0, 6), Error);
  EXPECT_NO_THROW(admissibility(Vec(51, 0.0), 0.02, 1.0, 5));
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::GlobalExpected), "GlobalExpected");
  EXPECT_EQ(to_string(Verdict::BlowupExpected), "BlowupExpected");
  EXPECT_EQ(to_string(Verdict::Indeterminate), "Indeterminate");
}
