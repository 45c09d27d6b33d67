#include "mzak/dynamics/first_order.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mzak/spectral/multiplier.hpp"
#include "mzak/spectral/operators.hpp"

namespace mzak {

namespace {

using Complex = std::complex<double>;

void require_real_mean_zero(const Fieldd& f, const char* name) {
  const Fieldd p = to_physical(f);
  const double scale = std::max(p.values().abs().maxCoeff(), std::numeric_limits<double>::min());
  if (p.values().imag().abs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(name) + " must be real-valued");
  const double mean = std::abs(to_spectral(f).values()[0]);
  if (mean > 1e-12 * scale)
    throw ZeroModeError(std::string(name) + " must have zero mean (mean = " +
                        std::to_string(mean) + ")");
}

}  // namespace

std::pair<Fieldd, Fieldd> to_first_order(const Fieldd& chi0, const Fieldd& chi1) {
  require_real_mean_zero(chi0, "chi0");
  require_real_mean_zero(chi1, "chi1");
  const Fieldd c0 = project_mean_zero(chi0);
  const Fieldd inv_b_c1 = apply_multiplier(project_mean_zero(chi1), MultiplierSpec::riesz(-1));
  const Fieldd shifted = Complex(0, 1) * inv_b_c1;
  return {c0 + shifted, c0 - shifted};
}

double conjugacy_defect(const Fieldd& chi_plus, const Fieldd& chi_minus) {
  const Fieldd p = to_physical(chi_plus);
  const Fieldd m = to_physical(chi_minus);
  const double scale = std::max(p.values().abs().maxCoeff(), std::numeric_limits<double>::min());
  return (m.values() - p.values().conjugate()).abs().maxCoeff() / scale;
}

std::pair<Fieldd, Fieldd> from_first_order(const Fieldd& chi_plus, const Fieldd& chi_minus,
                                           double tolerance) {
  const double defect = conjugacy_defect(chi_plus, chi_minus);
  if (defect > tolerance) {
    std::ostringstream msg;
    msg << "chi_minus is not the conjugate of chi_plus (relative defect " << defect << ")";
    throw StateCorruptionError(msg.str());
  }
  const Fieldd sp = to_spectral(chi_plus);
  const Fieldd sm = to_spectral(chi_minus);
  Fieldd chi = 0.5 * (sp + sm);
  Fieldd chi_t = apply_multiplier(Complex(0, -0.5) * (sp - sm), MultiplierSpec::riesz(1));
  // drop rounding-level imaginary parts so both outputs are exactly real in x
  return {to_spectral(real_part(chi)), to_spectral(real_part(chi_t))};
}

Fieldd::Values propagator_symbol(const Grid<double>& grid, double t, PropagatorKind kind) {
  const auto& freq = kind == PropagatorKind::schrodinger ? grid.xi_squared() : grid.xi_abs();
  const double sign = kind == PropagatorKind::wave_minus ? 1.0 : -1.0;
  const Eigen::ArrayXd phase = sign * t * freq;
  Fieldd::Values out(phase.size());
  out.real() = phase.cos();
  out.imag() = phase.sin();
  return out;
}

Fieldd linear_propagator(const Fieldd& field, double t, PropagatorKind kind) {
  Fieldd s = to_spectral(field);
  if (t == 0.0) return s;
  s.values() *= propagator_symbol(s.grid(), t, kind);
  return s;
}

}  // namespace mzak
