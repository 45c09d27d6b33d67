#include "mzak/invariants/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "mzak/dynamics/nonlinearity.hpp"
#include "mzak/spectral/multiplier.hpp"
#include "mzak/spectral/operators.hpp"
#include "mzak/util/random.hpp"

namespace mzak {

namespace {

using Complex = std::complex<double>;

double weighted_sum(const Fieldd& f, const Eigen::ArrayXd& weight) {
  const Fieldd s = to_spectral(f);
  return s.grid().volume() * (s.values().abs2() * weight).sum();
}

double laplacian_norm_squared(const Fieldd& phi) {
  return weighted_sum(phi, phi.grid().xi_squared().square());
}

double inverse_b_norm_squared(const Fieldd& chi_t) {
  return l2_norm_squared(apply_multiplier(chi_t, MultiplierSpec::riesz(-1)));
}

struct Split {
  Fieldd chi;
  Fieldd inv_b_chi_t;  // (chi_+ - chi_-) / (2i)
};

Split split(const State& s) {
  const Fieldd p = to_spectral(s.chi_plus);
  const Fieldd m = to_spectral(s.chi_minus);
  return {0.5 * (p + m), Complex(0, -0.5) * (p - m)};
}

}  // namespace

double compute_I1(const Fieldd& phi) { return weighted_sum(phi, phi.grid().xi_squared()); }

double cubic_term(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry) {
  const Fieldd F = wave_density(phi, geometry);
  const Fieldd x = to_physical(chi);
  const Complex integral = (x.values() * F.values()).sum() * phi.grid().cell_volume();
  const double scale = l2_norm(x) * l2_norm(F);
  if (std::abs(integral.imag()) > 1e-10 * scale + std::numeric_limits<double>::min()) {
    std::ostringstream msg;
    msg << "cubic energy term has imaginary part " << integral.imag() << " (scale " << scale
        << ")";
    throw StateCorruptionError(msg.str());
  }
  return integral.real();
}

double compute_I2(const Fieldd& phi, const Fieldd& chi, const Fieldd& chi_t,
                  const Geometry& geometry) {
  return laplacian_norm_squared(phi) +
         0.5 * (inverse_b_norm_squared(chi_t) + l2_norm_squared(chi)) +
         cubic_term(phi, chi, geometry);
}

double compute_I2(const State& state) {
  const Split s = split(state);
  return laplacian_norm_squared(state.phi) +
         0.5 * (l2_norm_squared(s.inv_b_chi_t) + l2_norm_squared(s.chi)) +
         cubic_term(state.phi, s.chi, state.geometry);
}

double compute_m(const Fieldd& phi, const Fieldd& chi, const Fieldd& chi_t) {
  return laplacian_norm_squared(phi) + 0.25 * l2_norm_squared(chi) +
         0.5 * inverse_b_norm_squared(chi_t) + compute_I1(phi);
}

double compute_m(const State& state) {
  const Split s = split(state);
  return laplacian_norm_squared(state.phi) + 0.25 * l2_norm_squared(s.chi) +
         0.5 * l2_norm_squared(s.inv_b_chi_t) + compute_I1(state.phi);
}

double energy_tilde(const State& state) {
  const double c = cubic_term(state.phi, split(state).chi, state.geometry);
  return compute_I1(state.phi) + compute_I2(state) - c + std::abs(c);
}

void InvariantSeries::record(const State& state) {
  if (!times.empty() && !(state.t > times.back()))
    throw std::invalid_argument("invariant samples must have increasing times");
  const Split s = split(state);
  const double c = cubic_term(state.phi, s.chi, state.geometry);
  const double lap = laplacian_norm_squared(state.phi);
  const double i1 = compute_I1(state.phi);
  const double chi2 = l2_norm_squared(s.chi);
  const double chit2 = l2_norm_squared(s.inv_b_chi_t);
  times.push_back(state.t);
  I1.push_back(i1);
  I2.push_back(lap + 0.5 * (chit2 + chi2) + c);
  m.push_back(lap + 0.25 * chi2 + 0.5 * chit2 + i1);
  cubic.push_back(c);
}

Observer invariant_recorder(InvariantSeries& series) {
  return [&series](std::size_t, const State& state) { series.record(state); };
}

void write_invariants_csv(std::ostream& out, const InvariantSeries& series) {
  out << "t,I1,I2,m\n";
  char line[128];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", series.times[i], series.I1[i],
                  series.I2[i], series.m[i]);
    out << line;
  }
}

double relative_drift(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double ref = std::abs(values.front());
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
  return ref > 0 ? worst / ref : worst;
}

double c0_ratio(const Fieldd& phi, const Geometry& geometry) {
  const double denom = compute_I1(phi) + laplacian_norm_squared(phi);
  if (denom == 0.0) return 0.0;
  const Fieldd F = zero_nyquist(project_mean_zero(forward_transform(wave_density(phi, geometry))));
  return l2_norm_squared(F) / (denom * denom);
}

C0Estimate estimate_c0(const std::vector<Fieldd>& members, const Geometry& geometry,
                       double safety_factor) {
  C0Estimate est;
  est.safety_factor = safety_factor;
  for (const auto& phi : members) {
    if (to_spectral(phi).values().abs().maxCoeff() == 0.0) continue;
    est.raw = std::max(est.raw, c0_ratio(phi, geometry));
    ++est.members;
  }
  if (est.members == 0) throw std::invalid_argument("c0 ensemble contains only zero fields");
  est.c0 = safety_factor * est.raw;
  return est;
}

std::vector<Fieldd> c0_ensemble(const Grid<double>& grid, std::size_t ensemble_size,
                                std::uint64_t seed) {
  const int d = grid.dimension();
  const double L = grid.period();
  const double k0 = grid.wavenumber_unit();
  std::vector<Fieldd> out;
  out.reserve(ensemble_size);
  for (std::size_t j = 0; j < ensemble_size; ++j) {
    std::mt19937_64 rng(splitmix64(seed + j));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    Fieldd f(grid, Representation::spectral);
    if (j % 2 == 0) {
      std::array<double, 3> center{};
      std::array<int, 3> carrier{};
      for (int a = 0; a < d; ++a) center[a] = L * unit(rng);
      while (carrier == std::array<int, 3>{})
        for (int a = 0; a < d; ++a) carrier[a] = static_cast<int>(unit(rng) * 7.0) - 3;
      const double w = L * (1.0 / 12.0 + unit(rng) / 12.0);
      const double norm = std::pow(2 * std::numbers::pi * w * w, d / 2.0) / grid.volume();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.unflatten(i);
        double q2 = 0.0, phase = 0.0;
        for (int a = 0; a < d; ++a) {
          const double xi = k0 * grid.mode(idx[a]);
          const double q = xi - k0 * carrier[a];
          q2 += q * q;
          phase -= q * center[a];
        }
        f[i] = norm * std::exp(-0.5 * w * w * q2) * std::polar(1.0, phase);
      }
    } else {
      for (int m0 = -4; m0 <= 4; ++m0)
        for (int m1 = -4; m1 <= 4; ++m1)
          for (int m2 = (d == 3 ? -4 : 0); m2 <= (d == 3 ? 4 : 0); ++m2) {
            const Complex c(normal(rng), normal(rng));
            const double decay = std::exp(-(m0 * m0 + m1 * m1 + m2 * m2) / 8.0);
            f.mode({m0, m1, m2}) += decay * c;
          }
    }
    out.push_back(dealias(zero_nyquist(project_mean_zero(f))));
  }
  return out;
}

C0Estimate estimate_c0(const Grid<double>& grid, const Geometry& geometry,
                       std::size_t ensemble_size, std::uint64_t seed) {
  if (ensemble_size < 100) throw std::invalid_argument("c0 ensemble_size must be >= 100");
  return estimate_c0(c0_ensemble(grid, ensemble_size, seed), geometry);
}

double trap_root(double c0, double E_tilde) {
  const double disc = 1.0 - 4.0 * c0 * E_tilde;
  if (disc < 0) return std::numeric_limits<double>::quiet_NaN();
  // rationalized form of (1 - sqrt(disc)) / (2 c0), free of cancellation
  return 2.0 * E_tilde / (1.0 + std::sqrt(disc));
}

bool TrapReport::all_satisfied() const {
  if (!smallness_met) return false;
  for (std::size_t i = 0; i < satisfied.size(); ++i)
    if (!satisfied[i] || !below_m0[i]) return false;
  return true;
}

bool TrapReport::initially_consistent() const {
  return !smallness_met || below_m0.empty() || below_m0.front();
}

TrapReport trap_check(const std::vector<double>& m, double c0, double E_tilde) {
  if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");
  TrapReport r;
  r.c0 = c0;
  r.E_tilde = E_tilde;
  r.m0 = 1.0 / (2.0 * c0);
  r.smallness_met = E_tilde < 1.0 / (4.0 * c0);
  if (!r.smallness_met) {
    r.m1 = std::numeric_limits<double>::quiet_NaN();
    r.message = "smallness hypothesis not met";
    return r;
  }
  r.m1 = trap_root(c0, E_tilde);
  for (double v : m) {
    r.satisfied.push_back(v <= r.m1 * (1.0 + 1e-6));
    r.below_m0.push_back(v <= r.m0);
  }
  if (!r.initially_consistent())
    r.message = "m(0) exceeds m0 although the smallness hypothesis holds";
  else
    r.message = r.all_satisfied() ? "trap bound holds" : "trap bound violated";
  return r;
}

TrapReport trap_check(const InvariantSeries& series, double c0) {
  if (series.empty()) throw std::invalid_argument("trap_check needs at least one sample");
  const double c = series.cubic.front();
  const double E_tilde = series.I1.front() + series.I2.front() - c + std::abs(c);
  return trap_check(series.m, c0, E_tilde);
}

}  // namespace mzak
