#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mzak {

/// |(|xi1|^2 - |xi2|^2 -+ |xi|) - (sigma1 - sigma2 - sigma)| with xi = xi1 - xi2,
/// tau = tau1 - tau2, sigma_i = tau_i + |xi_i|^2 and sigma = tau +- |xi|; sign is +1 or -1.
double dispersive_identity_residual(const Eigen::VectorXd& xi1, const Eigen::VectorXd& xi2,
                                    double tau1, double tau2, int sign);

/// |z| <= lambda |y2| + lambda/(lambda-1) |y1| [lambda/(lambda+1) <= |z|/|y1| <= lambda/(lambda-1)]
/// with z = y1 - y2. Requires lambda > 1.
bool inequality_check_301(double y1, double y2, double lambda);

struct InequalityConstants {
  double c = 9.0;
  double c1 = 0.1;
  double c2 = 12.0;
};

struct FrequencySample {
  Eigen::VectorXd xi1;
  Eigen::VectorXd xi2;
  double tau1 = 0.0;
  double tau2 = 0.0;
  int sign = 1;
};

/// Outcome of the three modulation inequalities on |xi1| >= 2 |xi2|:
///   <xi1>^2 <= c (<sigma> + <sigma1> + <sigma2>)
///   <xi1>^2 <= c (<sigma> + <sigma2> + <sigma1> [c1 |sigma1| <= |xi1|^2 <= c2 |sigma1|])
///   <xi1>^2 <= c (<sigma1> + <sigma2> + <sigma> [c1 |sigma| <= |xi|^2 <= c2 |sigma|])
struct InequalityReport {
  InequalityConstants constants;
  std::size_t samples = 0;
  std::array<std::size_t, 3> violations{};
  /// Smallest c that satisfies each inequality on the samples (c1, c2 held fixed).
  std::array<double, 3> minimal_c{};
  /// Index of the first violating sample per inequality, or samples if none.
  std::array<std::size_t, 3> first_violation{};
  std::vector<std::array<bool, 3>> satisfied;

  bool all_satisfied() const { return violations == std::array<std::size_t, 3>{}; }
};

/// Throws std::invalid_argument for a sample with |xi1| < 2 |xi2|, mismatched
/// dimensions or a sign other than +-1. Per-sample flags are kept when keep_flags.
InequalityReport inequality_check_31_33(const std::vector<FrequencySample>& samples,
                                        const InequalityConstants& constants = {},
                                        bool keep_flags = false);

/// Seeded samples in the region |xi1| >= 2 |xi2|, |xi1| log-uniform in [1e-2, max_xi].
/// A third of them put tau1, tau2 on the Schrodinger surfaces so sigma carries the
/// whole resonance function; another third put tau on the wave surface.
std::vector<FrequencySample> sample_region(int dimension, std::size_t count, std::uint64_t seed,
                                           double max_xi = 1e3);

}  // namespace mzak
