#include <gtest/gtest.h>

#include <sstream>

#include "mzak/dynamics/first_order.hpp"
#include "mzak/dynamics/nonlinearity.hpp"
#include "mzak/invariants/invariants.hpp"
#include "mzak/spectral/operators.hpp"
#include "oracles.hpp"

using namespace mzak;

namespace {

Fieldd apply_spectral(const Fieldd& f, const Eigen::ArrayXd& symbol) {
  Fieldd s = to_spectral(f);
  s.values() *= symbol.cast<oracle::Complex>();
  return s;
}

State smooth_state(const Grid<double>& g, const Geometry& geo, unsigned seed, double amp) {
  return make_state(amp * oracle::smooth_field(g, seed, 3, false),
                    amp * oracle::smooth_field(g, seed + 1, 3, true),
                    amp * oracle::smooth_field(g, seed + 2, 3, true), geo, true);
}

// Quadrature of |grad phi|^2 with oracle derivatives.
double I1_quadrature(const Fieldd& phi) {
  const auto& g = phi.grid();
  const auto x = to_physical(phi).values();
  double s = 0;
  for (int a = 0; a < g.dimension(); ++a) s += oracle::derivative(g, x, a).abs2().sum();
  return s * g.cell_volume();
}

double cubic_quadrature(const Fieldd& phi, const Fieldd& chi, const Geometry& geo) {
  const auto& g = phi.grid();
  const auto p = to_physical(phi).values();
  auto gp = oracle::gradient(g, p);
  std::vector<oracle::Values> gc;
  for (const auto& v : gp) gc.push_back(v.conjugate());
  const oracle::Values F = oracle::Complex(0, -1) * oracle::cross(gc, gp, geo);
  return (to_physical(chi).values().real() * F.real()).sum() * g.cell_volume();
}

}  // namespace

TEST(Invariants, I1PlaneWave) {
  Grid<double> g(2, 16, 3.0);
  const double k0 = g.wavenumber_unit();
  const Fieldd phi = Fieldd::sample(g, [&](const auto& x) { return 0.5 * std::polar(1.0, k0 * (2 * x[0] + x[1])); });
  EXPECT_NEAR(compute_I1(phi), 0.25 * 5 * k0 * k0 * 9.0, 1e-10);
}

TEST(Invariants, I1MatchesQuadrature) {
  Grid<double> g(3, 8, 2.0);
  const Fieldd phi = oracle::smooth_field(g, 71, 3, false);
  const double q = I1_quadrature(phi);
  EXPECT_NEAR(compute_I1(phi), q, 1e-11 * q);
}

TEST(Invariants, CubicTermMatchesQuadrature) {
  for (int d : {2, 3}) {
    Grid<double> g(d, 8, 2.0);
    const Geometry geo = d == 2 ? Geometry::dim2() : Geometry::dim3(Eigen::Vector3d(0.3, 0.4, 0.5));
    const Fieldd phi = oracle::smooth_field(g, 72, 2, false);
    const Fieldd chi = oracle::smooth_field(g, 73, 2, true);
    const double q = cubic_quadrature(phi, chi, geo);
    EXPECT_NEAR(cubic_term(phi, chi, geo), q, 1e-10 * std::abs(q)) << d;
  }
}

TEST(Invariants, EnergyPieces) {
  Grid<double> g(2, 16, 2.0);
  const State s = smooth_state(g, Geometry::dim2(), 74, 0.4);
  const auto [chi, chi_t] = from_first_order(s.chi_plus, s.chi_minus);
  const double cubic = cubic_term(s.phi, chi, s.geometry);
  const double lap2 = l2_norm_squared(apply_spectral(s.phi, -g.xi_squared()));
  const double bchi = l2_norm_squared(apply_spectral(chi_t, (g.xi_abs() > 0).select(g.xi_abs().inverse(), 0.0)));
  const double chi2 = l2_norm_squared(chi);
  EXPECT_NEAR(compute_I2(s), lap2 + 0.5 * (bchi + chi2) + cubic, 1e-10 * compute_I2(s));
  EXPECT_NEAR(compute_m(s), lap2 + chi2 / 4 + bchi / 2 + compute_I1(s.phi), 1e-10 * compute_m(s));
  EXPECT_NEAR(energy_tilde(s), compute_I1(s.phi) + compute_I2(s) - cubic + std::abs(cubic),
              1e-10 * energy_tilde(s));
}

TEST(Invariants, ConservedOverShortRun) {
  Grid<double> g(2, 32, 2 * std::numbers::pi);
  const State s = smooth_state(g, Geometry::dim2(), 75, 0.3);
  SimConfig c;
  c.dt = 1e-3;
  c.t_end = 0.2;
  c.checkpoint_stride = 10;
  InvariantSeries series, halved;
  evolve(s, c, {invariant_recorder(series)});
  EXPECT_EQ(series.size(), 21u);
  EXPECT_LT(relative_drift(series.I1), 1e-8);
  EXPECT_LT(relative_drift(series.I2), 1e-4);
  c.dt /= 2;
  c.checkpoint_stride *= 2;
  evolve(s, c, {invariant_recorder(halved)});
  EXPECT_GT(relative_drift(series.I2) / relative_drift(halved.I2), 3.5);
}

TEST(Invariants, SeriesRejectsNonIncreasingTime) {
  Grid<double> g(2, 8, 1.0);
  const State s = smooth_state(g, Geometry::dim2(), 76, 0.3);
  InvariantSeries series;
  series.record(s);
  EXPECT_THROW(series.record(s), std::invalid_argument);
}

TEST(Invariants, CsvShape) {
  InvariantSeries empty;
  std::ostringstream a;
  write_invariants_csv(a, empty);
  EXPECT_EQ(a.str(), "t,I1,I2,m\n");
  Grid<double> g(2, 8, 1.0);
  InvariantSeries one;
  one.record(smooth_state(g, Geometry::dim2(), 77, 0.3));
  std::ostringstream b;
  write_invariants_csv(b, one);
  const std::string text = b.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Invariants, RelativeDrift) {
  EXPECT_EQ(relative_drift({}), 0.0);
  EXPECT_EQ(relative_drift({2.0}), 0.0);
  EXPECT_DOUBLE_EQ(relative_drift({2.0, 2.5, 1.0}), 0.5);
}

TEST(Trap, RootSolvesQuadratic) {
  const double c0 = 0.01, E = 5.0;
  const double m1 = trap_root(c0, E);
  EXPECT_NEAR(E - m1 + c0 * m1 * m1, 0.0, 1e-12);
  EXPECT_LT(m1, 1 / (2 * c0));
}

TEST(Trap, Decisions) {
  const double c0 = 0.01, E = 5.0;
  const double m1 = trap_root(c0, E);
  const TrapReport ok = trap_check({m1 * 0.9, m1, m1 * 0.5}, c0, E);
  EXPECT_TRUE(ok.smallness_met);
  EXPECT_TRUE(ok.all_satisfied());
  const TrapReport bad = trap_check({m1 * 0.9, m1 * 1.01}, c0, E);
  EXPECT_FALSE(bad.all_satisfied());
  const TrapReport big = trap_check({1.0}, c0, 30.0);
  EXPECT_FALSE(big.smallness_met);
  EXPECT_NE(big.message.find("smallness"), std::string::npos);
}

TEST(C0, RatioBoundsCubicTerm) {
  Grid<double> g(2, 16, 2 * std::numbers::pi);
  const Geometry geo = Geometry::dim2();
  const Fieldd phi = dealias(oracle::smooth_field(g, 78, 3, false));
  const double ratio = c0_ratio(phi, geo);
  const double a = compute_I1(phi) + l2_norm_squared(apply_spectral(phi, -g.xi_squared()));
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Fieldd chi = to_physical(project_mean_zero(oracle::smooth_field(g, 300 + seed, 5, true)));
    const double lhs = std::abs(cubic_term(phi, chi, geo)) - l2_norm_squared(chi) / 4;
    EXPECT_LE(lhs, ratio * a * a * (1 + 1e-12));
  }
  // chi = 2 P F attains the supremum
  const Fieldd pf = zero_nyquist(project_mean_zero(real_part(wave_density(phi, geo))));
  const Fieldd chi_star = to_physical(2.0 * pf);
  const double best = std::abs(cubic_term(phi, chi_star, geo)) - l2_norm_squared(chi_star) / 4;
  EXPECT_NEAR(best, ratio * a * a, 1e-10 * best);
}

TEST(C0, EnsembleIsSeeded) {
  Grid<double> g(2, 16, 2 * std::numbers::pi);
  const auto a = estimate_c0(g, Geometry::dim2(), 100, 5);
  const auto b = estimate_c0(g, Geometry::dim2(), 100, 5);
  EXPECT_EQ(a.c0, b.c0);
  EXPECT_DOUBLE_EQ(a.c0, 2 * a.raw);
  EXPECT_GT(a.c0, 0);
  EXPECT_THROW(estimate_c0(g, Geometry::dim2(), 50, 5), std::invalid_argument);
}
