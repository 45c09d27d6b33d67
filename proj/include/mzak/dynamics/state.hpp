#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string_view>

#include "mzak/spectral/field.hpp"

namespace mzak {

/// Spatial setting of the system: the 2D cross-gradient coupling, or the 3D one
/// weighted by the constant vector e.
struct Geometry {
  int dimension = 2;
  Eigen::Vector3d e = Eigen::Vector3d(0, 0, 1);

  static Geometry dim2() { return {2, Eigen::Vector3d(0, 0, 1)}; }
  static Geometry dim3(const Eigen::Vector3d& e) { return {3, e}; }

  friend bool operator==(const Geometry& a, const Geometry& b) {
    return a.dimension == b.dimension && (a.dimension == 2 || a.e == b.e);
  }
};

/// First-order unknowns (phi, chi_+, chi_-) at time t. All three fields are
/// spectral and mean zero; chi_- is the pointwise conjugate of chi_+.
struct State {
  double t = 0.0;
  Fieldd phi;
  Fieldd chi_plus;
  Fieldd chi_minus;
  Geometry geometry;

  const Grid<double>& grid() const { return phi.grid(); }
};

enum class Integrator { strang, interaction_rk4, reference_rk4_second_order };

std::string_view to_string(Integrator integrator);
Integrator integrator_from_string(std::string_view name);

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Integrator integrator = Integrator::strang;
  bool dealias = true;
  bool nonlinearity_enabled = true;
  Eigen::Vector3d e = Eigen::Vector3d(0, 0, 1);
  std::size_t checkpoint_stride = 1;

  /// Throws std::invalid_argument on nonpositive dt, negative t_end, zero stride or
  /// non-finite e.
  void validate() const;

  friend bool operator==(const SimConfig& a, const SimConfig& b) {
    return a.dt == b.dt && a.t_end == b.t_end && a.integrator == b.integrator &&
           a.dealias == b.dealias && a.nonlinearity_enabled == b.nonlinearity_enabled &&
           a.e == b.e && a.checkpoint_stride == b.checkpoint_stride;
  }
};

}  // namespace mzak
