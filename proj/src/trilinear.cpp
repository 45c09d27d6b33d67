#include "mzak/bourgain/trilinear.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mzak {

namespace {

using Complex = std::complex<double>;
using CValues = Eigen::Array<Complex, Eigen::Dynamic, 1>;

Eigen::ArrayXd bracket_pow(const Eigen::ArrayXd& x, double p) {
  return (1.0 + x.square()).pow(-p / 2);
}

// Scatters lattice values into the doubled, zero-padded lattice at index (mode mod 2n).
CValues scatter(const Eigen::ArrayXd& values, const SpaceTimeField& f) {
  const auto& g = f.grid();
  const int d = g.dimension();
  const long N = g.points_per_axis();
  const long P = 2 * N;
  const long Pt = 2L * f.n_time();
  long spatial = 1;
  for (int a = 0; a < d; ++a) spatial *= P;
  CValues out = CValues::Zero(Pt * spatial);
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  for (int j = 0; j < f.n_time(); ++j) {
    const long t = (f.time_mode(j) + Pt) % Pt;
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto idx = g.unflatten(static_cast<std::size_t>(s));
      long flat = t;
      for (int a = 0; a < d; ++a) flat = flat * P + (g.mode(idx[a]) + P) % P;
      out[flat] = values[j * n + s];
    }
  }
  return out;
}

// Gathers lattice entries back from the padded layout.
Eigen::ArrayXd gather(const CValues& padded, const SpaceTimeField& f) {
  const auto& g = f.grid();
  const int d = g.dimension();
  const long P = 2L * g.points_per_axis();
  const long Pt = 2L * f.n_time();
  const auto n = static_cast<Eigen::Index>(f.slice_size());
  Eigen::ArrayXd out(n * f.n_time());
  for (int j = 0; j < f.n_time(); ++j) {
    const long t = (f.time_mode(j) + Pt) % Pt;
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto idx = g.unflatten(static_cast<std::size_t>(s));
      long flat = t;
      for (int a = 0; a < d; ++a) flat = flat * P + (g.mode(idx[a]) + P) % P;
      out[j * n + s] = padded[flat].real();
    }
  }
  return out;
}

}  // namespace

double trilinear_integral(const SpaceTimeField& v, const SpaceTimeField& v1,
                          const SpaceTimeField& v2, const TrilinearSpec& spec) {
  const SpaceTimeField c = to_spectral(v);
  const SpaceTimeField c1 = to_spectral(v1);
  const SpaceTimeField c2 = to_spectral(v2);
  c.check_compatible(c1);
  c.check_compatible(c2);
  const auto& g = c.grid();
  const int d = g.dimension();
  std::vector<int> shape{2 * c.n_time()};
  std::size_t padded = static_cast<std::size_t>(shape[0]);
  for (int a = 0; a < d; ++a) {
    shape.push_back(2 * g.points_per_axis());
    padded *= static_cast<std::size_t>(shape.back());
  }
  if (padded > spec.lattice_cap)
    throw std::length_error("trilinear lattice of " + std::to_string(padded) +
                            " padded points exceeds the cap " + std::to_string(spec.lattice_cap));

  const auto n = static_cast<Eigen::Index>(c.slice_size());
  const Eigen::ArrayXd sigma = modulation(c, spec.dispersion);
  const Eigen::ArrayXd sigma_s = modulation(c, Dispersion::schrodinger);
  Eigen::ArrayXd wa = c.values().abs() * bracket_pow(sigma, spec.a);
  Eigen::ArrayXd wb = c1.values().abs() * bracket_pow(sigma_s, spec.a1);
  Eigen::ArrayXd wc = c2.values().abs() * bracket_pow(sigma_s, spec.a2);

  Eigen::ArrayXd space(n);
  switch (spec.style) {
    case DenominatorStyle::bracket_xi:
    case DenominatorStyle::bracket_xi2:
      space = (1.0 + g.xi_squared()).pow(-spec.m / 2);
      break;
    case DenominatorStyle::homogeneous_xi2:
      space = g.xi_abs().pow(-spec.m);
      space[0] = 0.0;
      break;
  }
  Eigen::ArrayXd& target = spec.style == DenominatorStyle::bracket_xi ? wa : wc;
  for (int j = 0; j < c.n_time(); ++j) target.segment(j * n, n) *= space;

  const detail::FftPlanPair<double> plans(shape);
  CValues A = scatter(wa, c);
  CValues C = scatter(wc, c);
  plans.forward({A.data(), static_cast<std::size_t>(A.size())});
  plans.forward({C.data(), static_cast<std::size_t>(C.size())});
  A *= C;
  plans.backward({A.data(), static_cast<std::size_t>(A.size())});
  A /= static_cast<double>(padded);
  // (A * C)(p1) = sum_{p2} A(p1 - p2) C(p2); rounding can leave tiny negative entries
  const Eigen::ArrayXd conv = gather(A, c).max(0.0);
  return (wb * conv).sum();
}

}  // namespace mzak
