#pragma once

#include <cmath>
#include <sstream>

#include "mzak/spectral/field.hpp"

namespace mzak {

enum class MultiplierKind {
  riesz_power,          // |xi|^s; B = (-Delta)^{1/2} is s = 1
  laplacian,            // -|xi|^2
  bilaplacian,          // |xi|^4
  bracket_power,        // <xi>^k = (1 + |xi|^2)^{k/2}
  zero_mean_projection  // 0 at xi = 0, 1 elsewhere
};

struct MultiplierSpec {
  MultiplierKind kind = MultiplierKind::riesz_power;
  double exponent = 0.0;

  static MultiplierSpec riesz(double s) { return {MultiplierKind::riesz_power, s}; }
  static MultiplierSpec laplacian() { return {MultiplierKind::laplacian, 0.0}; }
  static MultiplierSpec bilaplacian() { return {MultiplierKind::bilaplacian, 0.0}; }
  static MultiplierSpec bracket(double k) { return {MultiplierKind::bracket_power, k}; }
  static MultiplierSpec zero_mean() { return {MultiplierKind::zero_mean_projection, 0.0}; }

  bool needs_zero_mean() const { return kind == MultiplierKind::riesz_power && exponent < 0; }
};

/// Symbol of the multiplier sampled on the lattice of grid. Negative Riesz powers
/// put 0 on the zero mode.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> multiplier_symbol(const Grid<Scalar>& grid,
                                                          const MultiplierSpec& spec) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Array& k2 = grid.xi_squared();
  switch (spec.kind) {
    case MultiplierKind::riesz_power: {
      const Scalar half = static_cast<Scalar>(spec.exponent) / Scalar(2);
      if (spec.exponent == 0) return Array::Ones(k2.size());
      return (k2 > Scalar(0)).select(k2.pow(half), Scalar(0));
    }
    case MultiplierKind::laplacian:
      return -k2;
    case MultiplierKind::bilaplacian:
      return k2 * k2;
    case MultiplierKind::bracket_power:
      return (Scalar(1) + k2).pow(static_cast<Scalar>(spec.exponent) / Scalar(2));
    case MultiplierKind::zero_mean_projection:
      return (k2 > Scalar(0)).select(Array::Ones(k2.size()), Scalar(0));
  }
  throw std::invalid_argument("unknown multiplier kind");
}

namespace detail {

template <typename Scalar>
void check_zero_mode(const Field<Scalar>& spectral, const MultiplierSpec& spec) {
  if (!spec.needs_zero_mean()) return;
  const Scalar dc = std::abs(spectral.values()[0]);
  const Scalar scale = spectral.values().abs().maxCoeff();
  if (dc > Scalar(1e-12) * std::max(scale, std::numeric_limits<Scalar>::min())) {
    std::ostringstream msg;
    msg << "Riesz power " << spec.exponent
        << " is undefined on the zero mode (mean = " << dc
        << "); project to mean zero first";
    throw ZeroModeError(msg.str());
  }
}

}  // namespace detail

/// Multiplies the spectrum by the symbol. The result is spectral; physical input is
/// transformed first.
template <typename Scalar>
Field<Scalar> apply_multiplier(const Field<Scalar>& field, const MultiplierSpec& spec) {
  Field<Scalar> out = to_spectral(field);
  detail::check_zero_mode(out, spec);
  out.values() *= multiplier_symbol(out.grid(), spec).template cast<std::complex<Scalar>>();
  return out;
}

}  // namespace mzak
