#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>

#include "mzak/spectral/field.hpp"

namespace mzak {

/// Stack of n_time spatial fields sampled at t_j = (j - n_time/2) dt, time major: the
/// value at (t_j, x) sits at j * grid.size() + flat(x).
///
/// The spectral representation holds c(xi, tau) with
///   f(x, t_j) = sum c(xi, tau) e^{i (xi . x + tau t_j)},
/// xi on the grid lattice and tau = (2 pi / (n_time dt)) mu, mu in [-n_time/2, n_time/2).
class SpaceTimeField {
 public:
  using Complex = std::complex<double>;
  using Values = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  /// Throws std::invalid_argument unless n_time is even and >= 8 and dt > 0.
  SpaceTimeField(Grid<double> grid, int n_time, double dt,
                 Representation rep = Representation::physical);
  SpaceTimeField(Grid<double> grid, int n_time, double dt, Representation rep, Values values);

  /// Physical field with slice j given by fn(t_j), a Field on grid.
  static SpaceTimeField sample(const Grid<double>& grid, int n_time, double dt,
                               const std::function<Fieldd(double)>& fn);

  const Grid<double>& grid() const noexcept { return grid_; }
  int n_time() const noexcept { return n_time_; }
  double dt() const noexcept { return dt_; }
  Representation representation() const noexcept { return rep_; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }

  Values& values() noexcept { return values_; }
  const Values& values() const noexcept { return values_; }

  std::size_t slice_size() const noexcept { return grid_.size(); }
  double time(int j) const noexcept { return dt_ * (j - n_time_ / 2); }
  int time_mode(int j) const noexcept { return j < n_time_ / 2 ? j : j - n_time_; }
  double tau_unit() const noexcept;
  double tau(int j) const noexcept { return tau_unit() * time_mode(j); }
  /// Time extent n_time dt.
  double extent() const noexcept { return n_time_ * dt_; }
  /// L^d n_time dt: the factor turning sums of |c|^2 into the L^2_{xt} norm squared.
  double spectral_measure() const noexcept { return grid_.volume() * extent(); }

  /// Copy of slice j as a Field in the matching representation.
  Fieldd slice(int j) const;
  void set_slice(int j, const Fieldd& f);

  const detail::FftPlanPair<double>& plans() const { return *plans_; }

  void check_compatible(const SpaceTimeField& o) const;

 private:
  Grid<double> grid_;
  int n_time_;
  double dt_;
  Representation rep_;
  Values values_;
  std::shared_ptr<const detail::FftPlanPair<double>> plans_;
};

SpaceTimeField forward_transform(const SpaceTimeField& f);
SpaceTimeField inverse_transform(const SpaceTimeField& f);
SpaceTimeField to_spectral(const SpaceTimeField& f);
SpaceTimeField to_physical(const SpaceTimeField& f);

/// Applies a spatial Fourier multiplier with symbol m(xi) to every time slice.
SpaceTimeField apply_spatial_symbol(const SpaceTimeField& f, const Eigen::ArrayXd& symbol);
/// Slice-wise partial derivative.
SpaceTimeField partial(const SpaceTimeField& f, int axis);
/// Pointwise product in physical space, optionally conjugating the first factor.
SpaceTimeField pointwise_product(const SpaceTimeField& a, const SpaceTimeField& b,
                                 bool conjugate_first = false);

/// sum |f|^2 dx dt in physical space, or the same through the spectral measure.
double l2_norm_squared(const SpaceTimeField& f);

enum class Dispersion { schrodinger, wave_plus, wave_minus };
enum class WeightStyle { inhomogeneous, homogeneous };

/// Weights <sigma>^b w(xi)^k with sigma = tau + |xi|^2 (schrodinger), tau + |xi|
/// (wave_plus) or tau - |xi| (wave_minus), and w = <xi> or |xi|.
struct NormSpec {
  double k = 0.0;
  double b = 0.0;
  Dispersion dispersion = Dispersion::schrodinger;
  WeightStyle style = WeightStyle::inhomogeneous;
};

/// Modulation sigma at every lattice point, spectral layout.
Eigen::ArrayXd modulation(const SpaceTimeField& f, Dispersion dispersion);
/// Spatial weight w(xi)^k on one slice; 0 at xi = 0 for the homogeneous style.
Eigen::ArrayXd spatial_weight(const Grid<double>& grid, double k, WeightStyle style);

/// ||f||^2 = L^d n_time dt  sum <sigma>^{2b} w^{2k} |c|^2; k = b = 0 is the L^2_{xt}
/// norm. Homogeneous style throws ZeroModeError on xi = 0 content.
double xkb_norm(const SpaceTimeField& f, const NormSpec& spec);

/// ||f||_Y = sqrt(2 pi L^d) ( sum_xi ( sum_tau <sigma>^{-1} w^k |c| )^2 )^{1/2}; spec.b is
/// ignored. For data on a single tau slice this equals xkb_norm with b = -1 times
/// sqrt(2 pi / (n_time dt)).
double yk_norm(const SpaceTimeField& f, const NormSpec& spec);

/// Smooth even plateau: psi(t) = 1 for |t| <= 1, 0 for |t| >= 2 and
/// g(2 - |t|) / (g(2 - |t|) + g(|t| - 1)) in between, g(s) = exp(-1/s) for s > 0.
double bump(double t);

/// Multiplies slice j by bump(t_j / delta). Requires 0 < delta and 2 delta <=
/// (n_time/2 - 1) dt so the support fits in the sampled interval.
SpaceTimeField time_window(const SpaceTimeField& f, double delta);

/// <f, g> = int f conj(g) dx dt evaluated in physical space.
std::complex<double> pairing(const SpaceTimeField& f, const SpaceTimeField& g);

/// Unit vector of the dual space X^{-k,-b} that attains ||f||_{X^{k,b}} under pairing:
/// g_hat = <sigma>^{2b} w^{2k} f_hat / ||f||. Returns a physical field.
SpaceTimeField dual_extremizer(const SpaceTimeField& f, const NormSpec& spec);

}  // namespace mzak
