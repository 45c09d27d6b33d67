#include "mzak/bourgain/spacetime.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "mzak/errors.hpp"

namespace mzak {

namespace {

using Complex = std::complex<double>;
using Values = SpaceTimeField::Values;

std::span<Complex> as_span(Values& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void check_geometry(int n_time, double dt) {
  if (n_time < 8 || n_time % 2 != 0)
    throw std::invalid_argument("n_time must be even and >= 8, got " + std::to_string(n_time));
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
}

// Plans are shared by every field on the same lattice shape.
std::shared_ptr<const detail::FftPlanPair<double>> make_plans(const Grid<double>& g, int n_time) {
  static std::mutex m;
  static std::map<std::vector<int>, std::shared_ptr<const detail::FftPlanPair<double>>> cache;
  std::vector<int> shape{n_time};
  for (int a = 0; a < g.dimension(); ++a) shape.push_back(g.points_per_axis());
  std::lock_guard lock(m);
  auto& slot = cache[shape];
  if (!slot) slot = std::make_shared<const detail::FftPlanPair<double>>(shape);
  return slot;
}

// (-1)^mu for every time index: the phase from centering the time axis at j = n_time/2.
void apply_time_center_phase(Values& v, const SpaceTimeField& f) {
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  for (int j = 0; j < f.n_time(); ++j)
    if (f.time_mode(j) % 2 != 0) v.segment(j * n, n) *= -1.0;
}

void require_no_zero_mode(const SpaceTimeField& s) {
  const auto n = static_cast<Eigen::Index>(s.slice_size());
  const double scale = s.values().abs().maxCoeff();
  double worst = 0.0;
  for (int j = 0; j < s.n_time(); ++j) worst = std::max(worst, std::abs(s.values()[j * n]));
  if (worst > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "homogeneous weight applied to a field with xi = 0 content (|c| = " << worst << ")";
    throw ZeroModeError(msg.str());
  }
}

// Per-point squared weight <sigma>^{2b} w^{2k} in spectral layout.
Eigen::ArrayXd weight_squared(const SpaceTimeField& s, const NormSpec& spec) {
  const Eigen::ArrayXd sigma = modulation(s, spec.dispersion);
  const Eigen::ArrayXd w = spatial_weight(s.grid(), spec.k, spec.style);
  const auto n = static_cast<Eigen::Index>(s.slice_size());
  Eigen::ArrayXd out(sigma.size());
  for (int j = 0; j < s.n_time(); ++j)
    out.segment(j * n, n) =
        (1.0 + sigma.segment(j * n, n).square()).pow(spec.b) * w.square();
  return out;
}

}  // namespace

SpaceTimeField::SpaceTimeField(Grid<double> grid, int n_time, double dt, Representation rep)
    : SpaceTimeField(grid, n_time, dt, rep,
                     Values::Zero(static_cast<Eigen::Index>(grid.size()) * n_time)) {}

SpaceTimeField::SpaceTimeField(Grid<double> grid, int n_time, double dt, Representation rep,
                               Values values)
    : grid_(std::move(grid)), n_time_(n_time), dt_(dt), rep_(rep), values_(std::move(values)) {
  check_geometry(n_time, dt);
  if (values_.size() != static_cast<Eigen::Index>(grid_.size()) * n_time)
    throw std::invalid_argument("space-time value count does not match n_time * grid size");
  plans_ = make_plans(grid_, n_time_);
}

SpaceTimeField SpaceTimeField::sample(const Grid<double>& grid, int n_time, double dt,
                                      const std::function<Fieldd(double)>& fn) {
  SpaceTimeField out(grid, n_time, dt);
  for (int j = 0; j < n_time; ++j) out.set_slice(j, to_physical(fn(out.time(j))));
  return out;
}

double SpaceTimeField::tau_unit() const noexcept {
  return 2 * std::numbers::pi / (n_time_ * dt_);
}

Fieldd SpaceTimeField::slice(int j) const {
  const auto n = static_cast<Eigen::Index>(slice_size());
  return Fieldd(grid_, rep_, values_.segment(j * n, n));
}

void SpaceTimeField::set_slice(int j, const Fieldd& f) {
  if (!(f.grid() == grid_)) throw std::invalid_argument("slice lives on a different grid");
  f.require(rep_, "set_slice");
  const auto n = static_cast<Eigen::Index>(slice_size());
  values_.segment(j * n, n) = f.values();
}

void SpaceTimeField::check_compatible(const SpaceTimeField& o) const {
  if (!(grid_ == o.grid_) || n_time_ != o.n_time_ || dt_ != o.dt_)
    throw std::invalid_argument("space-time fields have different lattices");
  if (rep_ != o.rep_) throw RepresentationError("space-time fields in different representations");
}

SpaceTimeField forward_transform(const SpaceTimeField& f) {
  if (f.is_spectral()) throw RepresentationError("forward_transform: field must be physical");
  Values v = f.values();
  f.plans().forward(as_span(v));
  v /= static_cast<double>(v.size());
  apply_time_center_phase(v, f);
  return SpaceTimeField(f.grid(), f.n_time(), f.dt(), Representation::spectral, std::move(v));
}

SpaceTimeField inverse_transform(const SpaceTimeField& f) {
  if (!f.is_spectral()) throw RepresentationError("inverse_transform: field must be spectral");
  Values v = f.values();
  apply_time_center_phase(v, f);
  f.plans().backward(as_span(v));
  return SpaceTimeField(f.grid(), f.n_time(), f.dt(), Representation::physical, std::move(v));
}

SpaceTimeField to_spectral(const SpaceTimeField& f) {
  return f.is_spectral() ? f : forward_transform(f);
}

SpaceTimeField to_physical(const SpaceTimeField& f) {
  return f.is_spectral() ? inverse_transform(f) : f;
}

SpaceTimeField apply_spatial_symbol(const SpaceTimeField& f, const Eigen::ArrayXd& symbol) {
  if (symbol.size() != static_cast<Eigen::Index>(f.slice_size()))
    throw std::invalid_argument("symbol size does not match the spatial grid");
  const bool physical = !f.is_spectral();
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  SpaceTimeField out(f.grid(), f.n_time(), f.dt(), Representation::spectral, Values(f.values()));
  // spatial transforms slice by slice keep the time axis untouched
  for (int j = 0; j < f.n_time(); ++j) {
    Values s = out.values().segment(j * n, n);
    if (physical) {
      f.grid().plans().forward(as_span(s));
      s /= static_cast<double>(n);
    }
    s *= symbol.cast<Complex>();
    if (physical) f.grid().plans().backward(as_span(s));
    out.values().segment(j * n, n) = s;
  }
  return SpaceTimeField(f.grid(), f.n_time(), f.dt(), f.representation(),
                        std::move(out.values()));
}

SpaceTimeField partial(const SpaceTimeField& f, int axis) {
  const auto& g = f.grid();
  if (axis < 0 || axis >= g.dimension()) throw std::out_of_range("derivative axis out of range");
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  Values v = f.values();
  for (int j = 0; j < f.n_time(); ++j) {
    Values s = v.segment(j * n, n);
    if (!f.is_spectral()) {
      g.plans().forward(as_span(s));
      s /= static_cast<double>(n);
    }
    s *= g.derivative_symbol(axis);
    if (!f.is_spectral()) g.plans().backward(as_span(s));
    v.segment(j * n, n) = s;
  }
  return SpaceTimeField(g, f.n_time(), f.dt(), f.representation(), std::move(v));
}

SpaceTimeField pointwise_product(const SpaceTimeField& a, const SpaceTimeField& b,
                                 bool conjugate_first) {
  const SpaceTimeField pa = to_physical(a);
  const SpaceTimeField pb = to_physical(b);
  pa.check_compatible(pb);
  Values v = conjugate_first ? Values(pa.values().conjugate() * pb.values())
                             : Values(pa.values() * pb.values());
  return SpaceTimeField(pa.grid(), pa.n_time(), pa.dt(), Representation::physical, std::move(v));
}

double l2_norm_squared(const SpaceTimeField& f) {
  const double sum = f.values().abs2().sum();
  if (f.is_spectral()) return f.spectral_measure() * sum;
  return sum * f.grid().cell_volume() * f.dt();
}

Eigen::ArrayXd modulation(const SpaceTimeField& f, Dispersion dispersion) {
  const auto& g = f.grid();
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  const Eigen::ArrayXd& shift = dispersion == Dispersion::schrodinger ? g.xi_squared() : g.xi_abs();
  const double sign = dispersion == Dispersion::wave_minus ? -1.0 : 1.0;
  Eigen::ArrayXd out(n * f.n_time());
  for (int j = 0; j < f.n_time(); ++j) out.segment(j * n, n) = f.tau(j) + sign * shift;
  return out;
}

Eigen::ArrayXd spatial_weight(const Grid<double>& grid, double k, WeightStyle style) {
  if (style == WeightStyle::inhomogeneous) return (1.0 + grid.xi_squared()).pow(k / 2);
  Eigen::ArrayXd w = grid.xi_abs().pow(k);
  w[0] = 0.0;
  return w;
}

double xkb_norm(const SpaceTimeField& f, const NormSpec& spec) {
  const SpaceTimeField s = to_spectral(f);
  if (spec.style == WeightStyle::homogeneous) require_no_zero_mode(s);
  return std::sqrt(s.spectral_measure() * (weight_squared(s, spec) * s.values().abs2()).sum());
}

double yk_norm(const SpaceTimeField& f, const NormSpec& spec) {
  const SpaceTimeField s = to_spectral(f);
  if (spec.style == WeightStyle::homogeneous) require_no_zero_mode(s);
  const Eigen::ArrayXd sigma = modulation(s, spec.dispersion);
  const Eigen::ArrayXd w = spatial_weight(s.grid(), spec.k, spec.style);
  const auto n = static_cast<Eigen::Index>(s.slice_size());
  Eigen::ArrayXd l1 = Eigen::ArrayXd::Zero(n);
  for (int j = 0; j < s.n_time(); ++j)
    l1 += (1.0 + sigma.segment(j * n, n).square()).rsqrt() * s.values().segment(j * n, n).abs();
  return std::sqrt(2 * std::numbers::pi * s.grid().volume() * (w * l1).square().sum());
}

double bump(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double g_in = std::exp(-1.0 / (2.0 - a));
  const double g_out = std::exp(-1.0 / (a - 1.0));
  return g_in / (g_in + g_out);
}

SpaceTimeField time_window(const SpaceTimeField& f, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("window delta must be positive");
  if (2 * delta > (f.n_time() / 2 - 1) * f.dt())
    throw std::invalid_argument("time window support exceeds the sampled time interval");
  SpaceTimeField out = to_physical(f);
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  for (int j = 0; j < f.n_time(); ++j) out.values().segment(j * n, n) *= bump(f.time(j) / delta);
  return out;
}

std::complex<double> pairing(const SpaceTimeField& f, const SpaceTimeField& g) {
  const SpaceTimeField pf = to_physical(f);
  const SpaceTimeField pg = to_physical(g);
  pf.check_compatible(pg);
  return (pf.values() * pg.values().conjugate()).sum() * pf.grid().cell_volume() * pf.dt();
}

SpaceTimeField dual_extremizer(const SpaceTimeField& f, const NormSpec& spec) {
  const double norm = xkb_norm(f, spec);
  SpaceTimeField s = to_spectral(f);
  if (norm == 0.0) return to_physical(s);
  s.values() *= (weight_squared(s, spec) / norm).cast<Complex>();
  return inverse_transform(s);
}

}  // namespace mzak
