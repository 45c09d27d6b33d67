#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mzak/spectral/fft.hpp"

namespace mzak {

namespace detail {

/// Immutable per-grid lookup tables shared by every copy of a Grid.
template <typename Scalar>
struct Lattice {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

  std::array<Array, 3> xi;  // xi[axis][flat]; unused axes are empty
  std::array<ComplexArray, 3> derivative;  // i xi[axis], zero on Nyquist planes
  Array xi_squared;
  Array xi_abs;
  Array retained;      // 1 where every |m_j| <= N/3, else 0
  Array non_nyquist;   // 0 where any index sits on the Nyquist plane
  std::unique_ptr<FftPlanPair<Scalar>> plans;
};

}  // namespace detail

/// Periodic cube [0, L)^d sampled with N points per axis.
///
/// Flat indices are row major with axis 0 slowest. Index j on an axis carries the
/// integer frequency m = j for j < N/2 and m = j - N otherwise, so the lattice is
/// {-N/2, ..., N/2 - 1} and the wavenumber is xi = (2 pi / L) m.
template <typename Scalar = double>
class Grid {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Grid(int dimension, int points_per_axis, Scalar period)
      : dimension_(dimension), n_(points_per_axis), period_(period) {
    if (dimension != 2 && dimension != 3)
      throw std::invalid_argument("grid dimension must be 2 or 3, got " +
                                  std::to_string(dimension));
    if (points_per_axis < 8 || points_per_axis % 2 != 0)
      throw std::invalid_argument("points_per_axis must be even and >= 8, got " +
                                  std::to_string(points_per_axis));
    if (!(period > 0) || !std::isfinite(static_cast<double>(period)))
      throw std::invalid_argument("grid period must be positive and finite");
    build();
  }

  int dimension() const noexcept { return dimension_; }
  int points_per_axis() const noexcept { return n_; }
  Scalar period() const noexcept { return period_; }

  std::size_t size() const noexcept {
    std::size_t s = 1;
    for (int a = 0; a < dimension_; ++a) s *= static_cast<std::size_t>(n_);
    return s;
  }

  Scalar wavenumber_unit() const noexcept {
    return Scalar(2) * std::numbers::pi_v<Scalar> / period_;
  }
  Scalar spacing() const noexcept { return period_ / Scalar(n_); }
  /// (L/N)^d, the quadrature weight of one sample.
  Scalar cell_volume() const noexcept { return std::pow(spacing(), Scalar(dimension_)); }
  /// L^d
  Scalar volume() const noexcept { return std::pow(period_, Scalar(dimension_)); }

  /// Integer frequency of axis index j.
  int mode(int j) const noexcept { return j < n_ / 2 ? j : j - n_; }
  /// Axis index of integer frequency m (m taken modulo N).
  int index_of_mode(int m) const noexcept { return ((m % n_) + n_) % n_; }

  std::array<int, 3> unflatten(std::size_t flat) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dimension_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n_);
      flat /= n_;
    }
    return idx;
  }

  std::size_t flatten(const std::array<int, 3>& idx) const noexcept {
    std::size_t flat = 0;
    for (int a = 0; a < dimension_; ++a) flat = flat * n_ + static_cast<std::size_t>(idx[a]);
    return flat;
  }

  /// Flat index of the lattice point with integer frequencies m.
  std::size_t flat_of_modes(const std::array<int, 3>& m) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dimension_; ++a) idx[a] = index_of_mode(m[a]);
    return flatten(idx);
  }

  /// Physical coordinate of axis index j.
  Scalar coordinate(int j) const noexcept { return spacing() * Scalar(j); }

  const Array& xi(int axis) const { return lattice_->xi.at(static_cast<std::size_t>(axis)); }
  /// Spectral symbol of d/dx_axis: i xi_axis with the Nyquist planes zeroed.
  const auto& derivative_symbol(int axis) const {
    return lattice_->derivative.at(static_cast<std::size_t>(axis));
  }
  const Array& xi_squared() const noexcept { return lattice_->xi_squared; }
  const Array& xi_abs() const noexcept { return lattice_->xi_abs; }
  const Array& retained_mask() const noexcept { return lattice_->retained; }
  const Array& non_nyquist_mask() const noexcept { return lattice_->non_nyquist; }
  const detail::FftPlanPair<Scalar>& plans() const noexcept { return *lattice_->plans; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dimension_ == b.dimension_ && a.n_ == b.n_ && a.period_ == b.period_;
  }

 private:
  void build() {
    auto lat = std::make_shared<detail::Lattice<Scalar>>();
    const std::size_t total = size();
    const Scalar k0 = wavenumber_unit();
    for (int a = 0; a < dimension_; ++a) lat->xi[a].resize(static_cast<Eigen::Index>(total));
    lat->xi_squared.setZero(static_cast<Eigen::Index>(total));
    lat->retained.setOnes(static_cast<Eigen::Index>(total));
    lat->non_nyquist.setOnes(static_cast<Eigen::Index>(total));
    for (std::size_t f = 0; f < total; ++f) {
      const auto idx = unflatten(f);
      const auto e = static_cast<Eigen::Index>(f);
      for (int a = 0; a < dimension_; ++a) {
        const int m = mode(idx[a]);
        const Scalar xa = k0 * Scalar(m);
        lat->xi[a][e] = xa;
        lat->xi_squared[e] += xa * xa;
        if (3 * std::abs(m) > n_) lat->retained[e] = 0;
        if (m == -n_ / 2) lat->non_nyquist[e] = 0;
      }
    }
    lat->xi_abs = lat->xi_squared.sqrt();
    for (int a = 0; a < dimension_; ++a)
      lat->derivative[a] =
          (lat->xi[a] * lat->non_nyquist).template cast<std::complex<Scalar>>() *
          std::complex<Scalar>(0, 1);
    lat->plans = std::make_unique<detail::FftPlanPair<Scalar>>(std::vector<int>(dimension_, n_));
    lattice_ = std::move(lat);
  }

  int dimension_;
  int n_;
  Scalar period_;
  std::shared_ptr<const detail::Lattice<Scalar>> lattice_;
};

template <typename Scalar = double>
Grid<Scalar> make_grid(int dimension, int points_per_axis, Scalar period) {
  return Grid<Scalar>(dimension, points_per_axis, period);
}

}  // namespace mzak
