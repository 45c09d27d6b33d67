#include "mzak/dynamics/nonlinearity.hpp"

#include <array>
#include <complex>
#include <span>

#include "mzak/spectral/operators.hpp"

namespace mzak {

namespace {

using Values = Fieldd::Values;
using Complex = std::complex<double>;
constexpr Complex kMinusI(0.0, -1.0);

void check_geometry(const Grid<double>& grid, const Geometry& geometry) {
  if (grid.dimension() != geometry.dimension)
    throw DimensionError("geometry dimension " + std::to_string(geometry.dimension) +
                         " does not match grid dimension " + std::to_string(grid.dimension()));
}

std::span<Complex> as_span(Values& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Physical-space components of grad f.
std::vector<Values> physical_gradient(const Fieldd& f) {
  if (!f.is_spectral()) return physical_gradient(forward_transform(f));
  const auto& grid = f.grid();
  std::vector<Values> out(static_cast<std::size_t>(grid.dimension()));
  for (int a = 0; a < grid.dimension(); ++a) {
    Values v = f.values() * grid.derivative_symbol(a);
    grid.plans().backward(as_span(v));
    out[static_cast<std::size_t>(a)] = std::move(v);
  }
  return out;
}

// Real physical-space components of grad f for real f. Two components share one
// inverse transform: the transform of (d_a + i d_b) f_hat is d_a f + i d_b f.
std::vector<Values> real_gradient(const Fieldd& f) {
  if (!f.is_spectral()) return real_gradient(forward_transform(f));
  const auto& grid = f.grid();
  const int d = grid.dimension();
  std::vector<Values> out(static_cast<std::size_t>(d));
  for (int a = 0; a < d; a += 2) {
    Values v = a + 1 < d ? Values(f.values() * (grid.derivative_symbol(a) +
                                                Complex(0, 1) * grid.derivative_symbol(a + 1)))
                         : Values(f.values() * grid.derivative_symbol(a));
    grid.plans().backward(as_span(v));
    if (a + 1 < d) out[static_cast<std::size_t>(a + 1)] = v.imag().cast<Complex>();
    v.imag() = 0;
    out[static_cast<std::size_t>(a)] = std::move(v);
  }
  return out;
}

// conj(a_i) b_j - conj(a_j) b_i when conj_a is set, else a_i b_j - a_j b_i.
Values pair_form(const Values& ai, const Values& aj, const Values& bi, const Values& bj,
                 bool conj_a) {
  if (conj_a) return ai.conjugate() * bj - aj.conjugate() * bi;
  return ai * bj - aj * bi;
}

// a (x) b: a_1 b_2 - a_2 b_1 in 2D (which equals a . perp(b)), (a x b) . e in 3D.
Values cross_form(const std::vector<Values>& a, const std::vector<Values>& b, const Geometry& g,
                  bool conj_a = false) {
  if (g.dimension == 2) return pair_form(a[0], a[1], b[0], b[1], conj_a);
  const auto& e = g.e;
  Values out = Values::Zero(a[0].size());
  if (e[0] != 0) out += e[0] * pair_form(a[1], a[2], b[1], b[2], conj_a);
  if (e[1] != 0) out += e[1] * pair_form(a[2], a[0], b[2], b[0], conj_a);
  if (e[2] != 0) out += e[2] * pair_form(a[0], a[1], b[0], b[1], conj_a);
  return out;
}

Fieldd finish(const Grid<double>& grid, Values physical, NonlinearityOptions options) {
  grid.plans().forward(as_span(physical));
  const auto& mask = options.dealias ? grid.retained_mask() : grid.non_nyquist_mask();
  physical *= (mask / static_cast<double>(grid.size())).cast<Complex>();
  physical[0] = 0;
  return Fieldd(grid, Representation::spectral, std::move(physical));
}

Values schrodinger_density(const std::vector<Values>& grad_phi, const Fieldd& chi,
                           const Geometry& geometry) {
  return kMinusI * cross_form(grad_phi, real_gradient(chi), geometry);
}

Values wave_density_values(const std::vector<Values>& grad_phi, const Geometry& geometry) {
  return kMinusI * cross_form(grad_phi, grad_phi, geometry, true);
}

Fieldd laplacian_of(Fieldd spectral) {
  spectral.values() *= (-spectral.grid().xi_squared()).cast<Complex>();
  return spectral;
}

}  // namespace

Fieldd schrodinger_nonlinearity(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry,
                                NonlinearityOptions options) {
  check_geometry(phi.grid(), geometry);
  return finish(phi.grid(), schrodinger_density(physical_gradient(phi), chi, geometry), options);
}

Fieldd wave_density(const Fieldd& phi, const Geometry& geometry) {
  check_geometry(phi.grid(), geometry);
  return Fieldd(phi.grid(), Representation::physical,
                wave_density_values(physical_gradient(phi), geometry));
}

Fieldd wave_nonlinearity(const Fieldd& phi, const Geometry& geometry,
                         NonlinearityOptions options) {
  check_geometry(phi.grid(), geometry);
  return laplacian_of(
      finish(phi.grid(), wave_density_values(physical_gradient(phi), geometry), options));
}

NonlinearTerms nonlinear_terms(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry,
                               NonlinearityOptions options) {
  check_geometry(phi.grid(), geometry);
  const auto grad_phi = physical_gradient(phi);
  return {finish(phi.grid(), schrodinger_density(grad_phi, chi, geometry), options),
          laplacian_of(finish(phi.grid(), wave_density_values(grad_phi, geometry), options))};
}

}  // namespace mzak
