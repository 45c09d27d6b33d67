#pragma once

#include <utility>

#include "mzak/dynamics/state.hpp"

namespace mzak {

/// chi_pm = chi0 +- i B^{-1} chi1 with B = (-Laplacian)^{1/2}. Inputs must be real and
/// mean zero; outputs are spectral.
std::pair<Fieldd, Fieldd> to_first_order(const Fieldd& chi0, const Fieldd& chi1);

/// Inverse of to_first_order: chi = (chi_+ + chi_-)/2, chi_t = B (chi_+ - chi_-)/(2i).
/// Throws StateCorruptionError when chi_- differs from conj(chi_+) by more than
/// tolerance relative to the size of chi_+. Outputs are spectral and real in x.
std::pair<Fieldd, Fieldd> from_first_order(const Fieldd& chi_plus, const Fieldd& chi_minus,
                                           double tolerance = 1e-10);

/// Relative deviation max|chi_- - conj(chi_+)| / max(max|chi_+|, tiny), physical space.
double conjugacy_defect(const Fieldd& chi_plus, const Fieldd& chi_minus);

enum class PropagatorKind { schrodinger, wave_plus, wave_minus };

/// Free evolution over time t: spectrum times e^{-i t |xi|^2} (e^{it Laplacian}) or
/// e^{-+ i t |xi|} (e^{-+ i t B}). Unitary; output spectral.
Fieldd linear_propagator(const Fieldd& field, double t, PropagatorKind kind);

/// Spectrum of the phase factor applied by linear_propagator.
Fieldd::Values propagator_symbol(const Grid<double>& grid, double t, PropagatorKind kind);

}  // namespace mzak
