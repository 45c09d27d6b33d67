#pragma once

#include <cstddef>

#include "mzak/bourgain/spacetime.hpp"

namespace mzak {

enum class DenominatorStyle { bracket_xi, bracket_xi2, homogeneous_xi2 };

/// Weights of the trilinear sum
///   sum |c(xi,tau)| |c1(xi1,tau1)| |c2(xi2,tau2)| / (<sigma>^a <sigma1>^a1 <sigma2>^a2 W^m)
/// over xi = xi1 - xi2, tau = tau1 - tau2, where sigma uses `dispersion` for v,
/// sigma_i = tau_i + |xi_i|^2 and W is <xi>, <xi2> or |xi2| (xi2 = 0 terms dropped).
struct TrilinearSpec {
  double a = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double m = 0.0;
  Dispersion dispersion = Dispersion::wave_plus;
  DenominatorStyle style = DenominatorStyle::bracket_xi;
  /// Upper bound on the zero-padded lattice, 2^{d+1} N^d n_time points.
  std::size_t lattice_cap = std::size_t{1} << 24;
};

/// Evaluates the sum through a zero-padded FFT correlation; coefficients of v outside the
/// lattice count as zero. Throws std::length_error above the cap.
double trilinear_integral(const SpaceTimeField& v, const SpaceTimeField& v1,
                          const SpaceTimeField& v2, const TrilinearSpec& spec);

}  // namespace mzak
