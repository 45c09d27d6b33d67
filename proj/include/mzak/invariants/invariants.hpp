#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mzak/dynamics/integrator.hpp"

namespace mzak {

/// ||grad phi||^2 = L^d sum |xi|^2 |phi_hat|^2.
double compute_I1(const Fieldd& phi);

/// Cubic energy term  int chi F dx  with F = (1/i)(grad conj(phi) (x) grad phi), which is
/// real. Throws StateCorruptionError if the imaginary part of the integral exceeds
/// 1e-10 relative to ||chi|| ||F||.
double cubic_term(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry);

/// ||Lap phi||^2 + (||B^{-1} chi_t||^2 + ||chi||^2)/2 + cubic_term.
double compute_I2(const Fieldd& phi, const Fieldd& chi, const Fieldd& chi_t,
                  const Geometry& geometry);
double compute_I2(const State& state);

/// ||Lap phi||^2 + ||chi||^2/4 + ||B^{-1} chi_t||^2/2 + ||grad phi||^2.
double compute_m(const State& state);
double compute_m(const Fieldd& phi, const Fieldd& chi, const Fieldd& chi_t);

/// I1 + I2 with the cubic term replaced by its absolute value.
double energy_tilde(const State& state);

struct InvariantSeries {
  std::vector<double> times;
  std::vector<double> I1;
  std::vector<double> I2;
  std::vector<double> m;
  std::vector<double> cubic;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }

  /// Evaluates all quantities on state and appends them. Throws std::invalid_argument
  /// unless state.t exceeds the last recorded time.
  void record(const State& state);
};

/// Observer appending to series on every call.
Observer invariant_recorder(InvariantSeries& series);

/// Header `t,I1,I2,m`, one row per sample, %.17g.
void write_invariants_csv(std::ostream& out, const InvariantSeries& series);

/// max_t |x(t) - x(0)| / |x(0)|; 0 for fewer than two samples.
double relative_drift(const std::vector<double>& values);

struct C0Estimate {
  double c0 = 0.0;          // safety_factor * raw
  double raw = 0.0;         // ensemble maximum
  double safety_factor = 2.0;
  std::size_t members = 0;  // nonzero members evaluated
};

/// Ratio sup_chi (|cubic_term(phi, chi)| - ||chi||^2/4) / (||grad phi||^2 + ||Lap phi||^2)^2
/// for one phi; the supremum over grid functions chi is ||P F||^2 with P the projection
/// onto mean-zero, non-Nyquist modes. Returns 0 for phi = 0.
double c0_ratio(const Fieldd& phi, const Geometry& geometry);

/// Maximum of c0_ratio over explicit members, times safety_factor. Zero members are
/// skipped; throws std::invalid_argument if every member is zero.
C0Estimate estimate_c0(const std::vector<Fieldd>& members, const Geometry& geometry,
                       double safety_factor = 2.0);

/// Seeded random ensemble: even members are Gaussian packets with lattice carriers,
/// odd members random low-mode (|m_j| <= 4) combinations. Members are given in closed
/// form on the spectrum, so the same seed describes the same functions on every grid.
/// Member j draws from its own generator seeded by splitmix64(seed + j).
std::vector<Fieldd> c0_ensemble(const Grid<double>& grid, std::size_t ensemble_size,
                                std::uint64_t seed);

/// Requires ensemble_size >= 100.
C0Estimate estimate_c0(const Grid<double>& grid, const Geometry& geometry,
                       std::size_t ensemble_size, std::uint64_t seed = 1);

struct TrapReport {
  double c0 = 0.0;
  double E_tilde = 0.0;
  double m0 = 0.0;
  double m1 = 0.0;
  bool smallness_met = false;
  std::vector<bool> satisfied;  // m(t) <= m1 (1 + 1e-6)
  std::vector<bool> below_m0;   // m(t) <= m0
  std::string message;

  bool all_satisfied() const;
  /// m(0) <= m0 whenever the smallness hypothesis holds.
  bool initially_consistent() const;
};

/// m1 = (1 - sqrt(1 - 4 c0 E)) / (2 c0), the smaller root of E - m + c0 m^2.
double trap_root(double c0, double E_tilde);

/// Trap bound evaluated with E_tilde taken from the first sample.
TrapReport trap_check(const InvariantSeries& series, double c0);
TrapReport trap_check(const std::vector<double>& m, double c0, double E_tilde);

}  // namespace mzak
