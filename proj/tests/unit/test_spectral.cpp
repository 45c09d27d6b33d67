#include <gtest/gtest.h>

#include <sstream>

#include "mzak/spectral/multiplier.hpp"
#include "mzak/spectral/operators.hpp"
#include "mzak/spectral/snapshot.hpp"
#include "oracles.hpp"

using namespace mzak;

namespace {

double max_diff(const oracle::Values& a, const oracle::Values& b) {
  return (a - b).abs().maxCoeff();
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid<double>(2, 7, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid<double>(2, 6, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid<double>(4, 8, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid<double>(2, 8, -1.0), std::invalid_argument);
}

TEST(Grid, ModeIndexing) {
  Grid<double> g(2, 8, 2.0);
  EXPECT_EQ(g.mode(3), 3);
  EXPECT_EQ(g.mode(4), -4);
  EXPECT_EQ(g.index_of_mode(-1), 7);
  EXPECT_DOUBLE_EQ(g.wavenumber_unit(), std::numbers::pi);
  const std::size_t f = g.flat_of_modes({-2, 3, 0});
  EXPECT_DOUBLE_EQ(g.xi(0)[f], -2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(g.xi(1)[f], 3 * std::numbers::pi);
}

TEST(Fft, MatchesNaiveDft2D) {
  Grid<double> g(2, 8, 2 * std::numbers::pi);
  const Fieldd f(g, Representation::physical, oracle::random_values(g.size(), 3));
  const Fieldd s = to_spectral(f);
  EXPECT_LT(max_diff(s.values(), oracle::dft(g, f.values())), 1e-13);
}

TEST(Fft, MatchesNaiveDft3D) {
  Grid<double> g(3, 8, 3.0);
  const Fieldd f(g, Representation::physical, oracle::random_values(g.size(), 4));
  EXPECT_LT(max_diff(to_spectral(f).values(), oracle::dft(g, f.values())), 1e-13);
}

TEST(Fft, RoundTrip) {
  Grid<double> g(2, 16, 5.0);
  const Fieldd f(g, Representation::physical, oracle::random_values(g.size(), 5));
  EXPECT_LT(max_abs_difference(to_physical(to_spectral(f)), f), 1e-13);
}

TEST(Fft, ParsevalMeasure) {
  Grid<double> g(3, 8, 1.5);
  const Fieldd f(g, Representation::physical, oracle::random_values(g.size(), 6));
  EXPECT_NEAR(l2_norm_squared(f), l2_norm_squared(to_spectral(f)), 1e-10 * l2_norm_squared(f));
  const double quadrature = f.values().abs2().sum() * g.cell_volume();
  EXPECT_NEAR(l2_norm_squared(f), quadrature, 1e-12 * quadrature);
}

TEST(Operators, PartialOfTrigIsExact) {
  Grid<double> g(2, 16, 2 * std::numbers::pi);
  const Fieldd f = Fieldd::sample(g, [](const auto& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
  const Fieldd expect =
      Fieldd::sample(g, [](const auto& x) { return 3 * std::cos(3 * x[0]) * std::cos(2 * x[1]); });
  const Fieldd d = partial(f, 0);
  EXPECT_TRUE(d.is_physical());
  EXPECT_LT(max_abs_difference(d, expect), 1e-12);
  EXPECT_THROW(partial(f, 2), std::out_of_range);
}

TEST(Operators, PartialMatchesOracle) {
  Grid<double> g(3, 8, 2.0);
  const Fieldd f(g, Representation::physical, oracle::random_values(g.size(), 7));
  for (int a = 0; a < 3; ++a)
    EXPECT_LT(max_diff(partial(f, a).values(), oracle::derivative(g, f.values(), a)), 1e-11);
}

TEST(Operators, PerpGradientNeeds2D) {
  Grid<double> g(3, 8, 1.0);
  EXPECT_THROW(perp_gradient(Fieldd(g, Representation::physical)), DimensionError);
}

TEST(Operators, DealiasKeepsTwoThirds) {
  Grid<double> g(2, 12, 1.0);
  Fieldd s(g, Representation::spectral, oracle::Values::Ones(static_cast<Eigen::Index>(g.size())));
  const Fieldd d = dealias(s);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto m = oracle::modes_of(g, k);
    const bool keep = std::abs(m[0]) <= 4 && std::abs(m[1]) <= 4;
    EXPECT_EQ(d.values()[k], keep ? std::complex<double>(1) : std::complex<double>(0));
  }
}

TEST(Multiplier, LaplacianOfPlaneWave) {
  Grid<double> g(2, 16, 3.0);
  const double k0 = g.wavenumber_unit();
  const Fieldd f = Fieldd::sample(g, [&](const auto& x) { return std::polar(1.0, k0 * (2 * x[0] - 3 * x[1])); });
  const Fieldd lap = to_physical(apply_multiplier(f, MultiplierSpec::laplacian()));
  EXPECT_LT(max_abs_difference(lap, -(13 * k0 * k0) * f), 1e-10);
  const Fieldd b = to_physical(apply_multiplier(f, MultiplierSpec::riesz(1)));
  EXPECT_LT(max_abs_difference(b, std::sqrt(13.0) * k0 * f), 1e-11);
}

TEST(Multiplier, NegativeRieszRejectsMean) {
  Grid<double> g(2, 8, 1.0);
  const Fieldd one = Fieldd::sample(g, [](const auto&) { return 1.0; });
  EXPECT_THROW(apply_multiplier(one, MultiplierSpec::riesz(-1)), ZeroModeError);
  EXPECT_NO_THROW(apply_multiplier(project_mean_zero(one), MultiplierSpec::riesz(-1)));
}

TEST(Multiplier, BracketPower) {
  Grid<double> g(2, 8, 2 * std::numbers::pi);
  const auto sym = multiplier_symbol(g, MultiplierSpec::bracket(2));
  EXPECT_DOUBLE_EQ(sym[g.flat_of_modes({1, 2, 0})], 6.0);
}

TEST(Snapshot, RoundTripIsExact) {
  Grid<double> g(3, 8, 1.25);
  const Fieldd f(g, Representation::spectral, oracle::random_values(g.size(), 8));
  std::stringstream buf;
  write_snapshot(buf, f);
  EXPECT_EQ(buf.str().size(), kSnapshotHeaderBytes + 16 * g.size());
  const Fieldd r = read_snapshot(buf);
  EXPECT_TRUE(r.grid() == g);
  EXPECT_TRUE(r.is_spectral());
  EXPECT_TRUE((r.values() == f.values()).all());
}

TEST(Snapshot, RejectsBadMagic) {
  std::stringstream buf("XXXX0000000000000000000000");
  EXPECT_THROW(read_snapshot(buf), std::runtime_error);
}
