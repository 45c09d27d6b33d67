#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "mzak/dynamics/state.hpp"

namespace mzak {

/// Builds a State from (phi0, chi0, chi1): spectral, mean zero, Nyquist-free, and
/// 2/3-dealiased when dealias is set. chi0 and chi1 must be real.
State make_state(const Fieldd& phi0, const Fieldd& chi0, const Fieldd& chi1,
                 const Geometry& geometry, bool dealias, double t = 0.0);

/// Time derivatives of (phi, chi_+, chi_-).
struct Rates {
  Fieldd phi;
  Fieldd chi_plus;
  Fieldd chi_minus;
};

/// Right-hand side of the first-order system, obtained from
///   i d/dt Lap phi + Lap^2 phi + N_S = 0,   chi_tt - Lap chi - N_W = 0
/// with chi_pm = chi +- i B^{-1} chi_t:
///   d/dt phi    = i Lap phi + i Lap^{-1} N_S
///   d/dt chi_pm = -+ i B chi_pm +- i B^{-1} N_W
/// where N_S, N_W are the nonlinearities of nonlinearity.hpp evaluated at
/// chi = (chi_+ + chi_-)/2.
Rates rhs_first_order(const State& state, const SimConfig& config);

/// Advances states by config.dt with the configured integrator. Holds the
/// precomputed phase factors for one (grid, dt) pair.
class Stepper {
 public:
  Stepper(const Grid<double>& grid, const SimConfig& config);

  /// Throws BlowUpError if the new state contains non-finite values.
  State advance(const State& state) const;

  const SimConfig& config() const noexcept { return config_; }

 private:
  friend Rates rhs_first_order(const State& state, const SimConfig& config);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  SimConfig config_;
};

State step(const State& state, const SimConfig& config);

/// Called with (step index, state) at step 0 and every checkpoint_stride steps.
using Observer = std::function<void(std::size_t, const State&)>;

struct EvolveResult {
  State final_state;
  std::size_t steps = 0;
  std::size_t observer_calls = 0;
};

/// Runs round((t_end - state.t) / dt) steps. A BlowUpError escaping a step is
/// rethrown with its step index filled in.
EvolveResult evolve(State state, const SimConfig& config,
                    const std::vector<Observer>& observers = {});

/// True when every value of every field is finite.
bool all_finite(const State& state);

}  // namespace mzak
