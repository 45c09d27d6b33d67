#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "mzak/errors.hpp"
#include "mzak/spectral/grid.hpp"

namespace mzak {

enum class Representation : std::uint8_t { physical = 0, spectral = 1 };

/// Complex samples on a Grid, either point values or Fourier coefficients.
///
/// Spectral convention: the coefficient of e^{i xi.x} is
///   c(m) = N^{-d} sum_x f(x) e^{-i xi.x},
/// so f(x) = sum_m c(m) e^{i xi.x}. A constant 1 has c(0) = 1 and a lattice plane
/// wave has a unit spike. Parseval reads
///   sum_x |f(x)|^2 (L/N)^d = L^d sum_m |c(m)|^2,
/// i.e. the spectral measure of one lattice point is L^d.
template <typename Scalar = double>
class Field {
 public:
  using Complex = std::complex<Scalar>;
  using Values = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  Field(Grid<Scalar> grid, Representation rep)
      : grid_(std::move(grid)), rep_(rep), values_(Values::Zero(static_cast<Eigen::Index>(grid_.size()))) {}

  Field(Grid<Scalar> grid, Representation rep, Values values)
      : grid_(std::move(grid)), rep_(rep), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid_.size())
      throw std::invalid_argument("field value count does not match grid size");
  }

  /// Samples fn(x) at every grid point; x is passed as a length-3 array (unused axes 0).
  template <typename Fn>
  static Field sample(const Grid<Scalar>& grid, Fn&& fn) {
    Field out(grid, Representation::physical);
    for (std::size_t f = 0; f < grid.size(); ++f) {
      const auto idx = grid.unflatten(f);
      const std::array<Scalar, 3> x{grid.coordinate(idx[0]), grid.coordinate(idx[1]),
                                    grid.coordinate(idx[2])};
      out.values_[static_cast<Eigen::Index>(f)] = Complex(fn(x));
    }
    return out;
  }

  const Grid<Scalar>& grid() const noexcept { return grid_; }
  Representation representation() const noexcept { return rep_; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }
  bool is_physical() const noexcept { return rep_ == Representation::physical; }

  Values& values() noexcept { return values_; }
  const Values& values() const noexcept { return values_; }

  Complex& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }
  const Complex& operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  /// Coefficient of the lattice mode with integer frequencies m (spectral only).
  const Complex& mode(const std::array<int, 3>& m) const {
    require(Representation::spectral, "mode lookup");
    return (*this)[grid_.flat_of_modes(m)];
  }
  Complex& mode(const std::array<int, 3>& m) {
    require(Representation::spectral, "mode lookup");
    return (*this)[grid_.flat_of_modes(m)];
  }

  void require(Representation rep, const char* op) const {
    if (rep_ != rep)
      throw RepresentationError(std::string(op) + ": field must be " +
                                (rep == Representation::spectral ? "spectral" : "physical"));
  }

  std::span<Complex> span() noexcept {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    values_ += o.values_;
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    values_ -= o.values_;
    return *this;
  }
  Field& operator*=(Complex s) {
    values_ *= s;
    return *this;
  }

  void check_compatible(const Field& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("fields live on different grids");
    if (rep_ != o.rep_) throw RepresentationError("fields are in different representations");
  }

 private:
  Grid<Scalar> grid_;
  Representation rep_;
  Values values_;
};

template <typename Scalar>
Field<Scalar> operator+(Field<Scalar> a, const Field<Scalar>& b) {
  a += b;
  return a;
}
template <typename Scalar>
Field<Scalar> operator-(Field<Scalar> a, const Field<Scalar>& b) {
  a -= b;
  return a;
}
template <typename Scalar>
Field<Scalar> operator*(std::complex<Scalar> s, Field<Scalar> a) {
  a *= s;
  return a;
}
template <typename Scalar>
Field<Scalar> operator*(Scalar s, Field<Scalar> a) {
  a *= std::complex<Scalar>(s);
  return a;
}

/// Physical-space pointwise product.
template <typename Scalar>
Field<Scalar> pointwise_product(const Field<Scalar>& a, const Field<Scalar>& b) {
  a.check_compatible(b);
  a.require(Representation::physical, "pointwise_product");
  return Field<Scalar>(a.grid(), Representation::physical, a.values() * b.values());
}

template <typename Scalar>
Field<Scalar> forward_transform(const Field<Scalar>& f) {
  f.require(Representation::physical, "forward_transform");
  Field<Scalar> out(f.grid(), Representation::spectral, f.values());
  f.grid().plans().forward(out.span());
  out.values() /= static_cast<Scalar>(f.grid().size());
  return out;
}

template <typename Scalar>
Field<Scalar> inverse_transform(const Field<Scalar>& f) {
  f.require(Representation::spectral, "inverse_transform");
  Field<Scalar> out(f.grid(), Representation::physical, f.values());
  f.grid().plans().backward(out.span());
  return out;
}

template <typename Scalar>
Field<Scalar> to_spectral(const Field<Scalar>& f) {
  return f.is_spectral() ? f : forward_transform(f);
}

template <typename Scalar>
Field<Scalar> to_physical(const Field<Scalar>& f) {
  return f.is_physical() ? f : inverse_transform(f);
}

/// Integral of |f|^2 over the torus, evaluated in whichever representation f is in.
template <typename Scalar>
Scalar l2_norm_squared(const Field<Scalar>& f) {
  const Scalar sum = f.values().abs2().sum();
  return f.is_spectral() ? sum * f.grid().volume() : sum * f.grid().cell_volume();
}

template <typename Scalar>
Scalar l2_norm(const Field<Scalar>& f) {
  return std::sqrt(l2_norm_squared(f));
}

/// Pointwise complex conjugate in physical space.
template <typename Scalar>
Field<Scalar> conjugate(const Field<Scalar>& f) {
  const Field<Scalar> p = to_physical(f);
  return Field<Scalar>(p.grid(), Representation::physical, p.values().conjugate());
}

/// Largest |Im f(x)| over the grid.
template <typename Scalar>
Scalar max_imaginary(const Field<Scalar>& f) {
  return to_physical(f).values().imag().abs().maxCoeff();
}

/// Physical field with the imaginary part discarded.
template <typename Scalar>
Field<Scalar> real_part(const Field<Scalar>& f) {
  const Field<Scalar> p = to_physical(f);
  return Field<Scalar>(p.grid(), Representation::physical,
                       p.values().real().template cast<std::complex<Scalar>>());
}

/// max_x |a(x) - b(x)| after bringing both to physical space.
template <typename Scalar>
Scalar max_abs_difference(const Field<Scalar>& a, const Field<Scalar>& b) {
  return (to_physical(a).values() - to_physical(b).values()).abs().maxCoeff();
}

using Fieldd = Field<double>;

}  // namespace mzak
