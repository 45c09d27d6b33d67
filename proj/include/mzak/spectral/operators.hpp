#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

#include "mzak/spectral/field.hpp"

namespace mzak {

template <typename Scalar>
using VectorField = std::vector<Field<Scalar>>;

namespace detail {

template <typename Scalar>
Field<Scalar> restore(Field<Scalar> spectral, Representation wanted) {
  return wanted == Representation::spectral ? spectral : inverse_transform(spectral);
}

}  // namespace detail

/// Partial derivative along axis: multiplication by i xi_axis in spectrum, with the
/// Nyquist planes zeroed. The result comes back in the input's representation.
template <typename Scalar>
Field<Scalar> partial(const Field<Scalar>& f, int axis) {
  const auto& grid = f.grid();
  if (axis < 0 || axis >= grid.dimension()) throw std::out_of_range("derivative axis out of range");
  Field<Scalar> s = to_spectral(f);
  s.values() *= grid.derivative_symbol(axis);
  return detail::restore(std::move(s), f.representation());
}

template <typename Scalar>
VectorField<Scalar> gradient(const Field<Scalar>& f) {
  const Field<Scalar> s = to_spectral(f);
  VectorField<Scalar> out;
  out.reserve(static_cast<std::size_t>(f.grid().dimension()));
  for (int a = 0; a < f.grid().dimension(); ++a)
    out.push_back(detail::restore(partial(s, a), f.representation()));
  return out;
}

/// (d/dx2, -d/dx1), two-dimensional grids only.
template <typename Scalar>
VectorField<Scalar> perp_gradient(const Field<Scalar>& f) {
  if (f.grid().dimension() != 2) throw DimensionError("perp_gradient requires a 2D grid");
  const Field<Scalar> s = to_spectral(f);
  VectorField<Scalar> out;
  out.push_back(detail::restore(partial(s, 1), f.representation()));
  out.push_back(detail::restore(Scalar(-1) * partial(s, 0), f.representation()));
  return out;
}

/// Pointwise (a x b) . e in physical space, three-dimensional grids only.
template <typename Scalar>
Field<Scalar> cross_dot_e(const VectorField<Scalar>& a, const VectorField<Scalar>& b,
                          const Eigen::Matrix<Scalar, 3, 1>& e) {
  if (a.size() != 3 || b.size() != 3 || a[0].grid().dimension() != 3)
    throw DimensionError("cross_dot_e requires 3D vector fields");
  std::array<Field<Scalar>, 3> pa{to_physical(a[0]), to_physical(a[1]), to_physical(a[2])};
  std::array<Field<Scalar>, 3> pb{to_physical(b[0]), to_physical(b[1]), to_physical(b[2])};
  Field<Scalar> out(pa[0].grid(), Representation::physical);
  auto& v = out.values();
  if (e[0] != 0) v += e[0] * (pa[1].values() * pb[2].values() - pa[2].values() * pb[1].values());
  if (e[1] != 0) v += e[1] * (pa[2].values() * pb[0].values() - pa[0].values() * pb[2].values());
  if (e[2] != 0) v += e[2] * (pa[0].values() * pb[1].values() - pa[1].values() * pb[0].values());
  return out;
}

/// Pointwise a . b (no conjugation) in physical space.
template <typename Scalar>
Field<Scalar> dot(const VectorField<Scalar>& a, const VectorField<Scalar>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("dot: size mismatch");
  Field<Scalar> out(a[0].grid(), Representation::physical);
  for (std::size_t j = 0; j < a.size(); ++j)
    out.values() += to_physical(a[j]).values() * to_physical(b[j]).values();
  return out;
}

/// 2/3 rule: zero every mode with some |m_j| > N/3 (this includes the Nyquist planes).
/// Always returns a spectral field.
template <typename Scalar>
Field<Scalar> dealias(const Field<Scalar>& f) {
  Field<Scalar> s = to_spectral(f);
  s.values() *= f.grid().retained_mask().template cast<std::complex<Scalar>>();
  return s;
}

template <typename Scalar>
Field<Scalar> project_mean_zero(const Field<Scalar>& f) {
  Field<Scalar> s = to_spectral(f);
  s.values()[0] = 0;
  return s;
}

template <typename Scalar>
Field<Scalar> zero_nyquist(const Field<Scalar>& f) {
  Field<Scalar> s = to_spectral(f);
  s.values() *= f.grid().non_nyquist_mask().template cast<std::complex<Scalar>>();
  return s;
}

}  // namespace mzak
