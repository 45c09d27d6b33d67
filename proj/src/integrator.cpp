#include "mzak/dynamics/integrator.hpp"

#include <cmath>
#include <sstream>

#include "mzak/dynamics/first_order.hpp"
#include "mzak/dynamics/nonlinearity.hpp"
#include "mzak/spectral/operators.hpp"

namespace mzak {

namespace {

using Values = Fieldd::Values;
using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

// Spectral coefficient arrays of (phi, chi_+, chi_-).
struct Triple {
  Values phi, plus, minus;
};

// a + s b
Triple axpy(const Triple& a, double s, const Triple& b) {
  return {a.phi + s * b.phi, a.plus + s * b.plus, a.minus + s * b.minus};
}

// Classical RK4 combination u + h/6 (k1 + 2 k2 + 2 k3 + k4).
Triple rk4_combine(const Triple& u, double h, const Triple& k1, const Triple& k2,
                   const Triple& k3, const Triple& k4) {
  const double w = h / 6;
  return {u.phi + w * (k1.phi + 2 * (k2.phi + k3.phi) + k4.phi),
          u.plus + w * (k1.plus + 2 * (k2.plus + k3.plus) + k4.plus),
          u.minus + w * (k1.minus + 2 * (k2.minus + k3.minus) + k4.minus)};
}

Triple unpack(const State& s) {
  return {to_spectral(s.phi).values(), to_spectral(s.chi_plus).values(),
          to_spectral(s.chi_minus).values()};
}

State pack(const Grid<double>& grid, Triple u, double t, const Geometry& geometry) {
  return {t, Fieldd(grid, Representation::spectral, std::move(u.phi)),
          Fieldd(grid, Representation::spectral, std::move(u.plus)),
          Fieldd(grid, Representation::spectral, std::move(u.minus)), geometry};
}

bool finite(const Values& v) { return v.real().allFinite() && v.imag().allFinite(); }

}  // namespace

std::string_view to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::strang: return "strang";
    case Integrator::interaction_rk4: return "interaction_rk4";
    case Integrator::reference_rk4_second_order: return "reference_rk4_second_order";
  }
  return "unknown";
}

Integrator integrator_from_string(std::string_view name) {
  if (name == "strang") return Integrator::strang;
  if (name == "interaction_rk4") return Integrator::interaction_rk4;
  if (name == "reference_rk4_second_order") return Integrator::reference_rk4_second_order;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "'");
}

void SimConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be >= 0");
  if (checkpoint_stride == 0) throw std::invalid_argument("checkpoint_stride must be >= 1");
  if (!e.allFinite()) throw std::invalid_argument("e must be finite");
}

bool all_finite(const State& state) {
  return finite(state.phi.values()) && finite(state.chi_plus.values()) &&
         finite(state.chi_minus.values());
}

State make_state(const Fieldd& phi0, const Fieldd& chi0, const Fieldd& chi1,
                 const Geometry& geometry, bool dealias_data, double t) {
  if (phi0.grid().dimension() != geometry.dimension)
    throw DimensionError("initial data dimension does not match geometry");
  auto prepare = [&](const Fieldd& f) {
    Fieldd s = zero_nyquist(project_mean_zero(f));
    return dealias_data ? dealias(s) : s;
  };
  // chi data may carry a mean; only the mean-zero part takes part in the dynamics
  const Fieldd c0 = to_physical(prepare(real_part(chi0)));
  const Fieldd c1 = to_physical(prepare(real_part(chi1)));
  auto [plus, minus] = to_first_order(real_part(c0), real_part(c1));
  return {t, prepare(phi0), prepare(plus), prepare(minus), geometry};
}

struct Stepper::Impl {
  Grid<double> grid;
  SimConfig config;
  NonlinearityOptions options;
  Values xi2, xi_abs;
  Values inv_xi2, inv_xi_abs;
  // phase factors for half and full step: phi, chi_+, chi_-
  Values half_phi, half_plus, half_minus;
  Values full_phi, full_plus, full_minus;

  Impl(const Grid<double>& g, const SimConfig& c) : grid(g), config(c) {
    options.dealias = config.dealias;
    xi2 = g.xi_squared().cast<Complex>();
    xi_abs = g.xi_abs().cast<Complex>();
    inv_xi2 = (g.xi_squared() > 0).select(g.xi_squared().inverse(), 0.0).cast<Complex>();
    inv_xi_abs = (g.xi_abs() > 0).select(g.xi_abs().inverse(), 0.0).cast<Complex>();
    const double h = config.dt;
    half_phi = propagator_symbol(g, h / 2, PropagatorKind::schrodinger);
    half_plus = propagator_symbol(g, h / 2, PropagatorKind::wave_plus);
    half_minus = propagator_symbol(g, h / 2, PropagatorKind::wave_minus);
    full_phi = propagator_symbol(g, h, PropagatorKind::schrodinger);
    full_plus = propagator_symbol(g, h, PropagatorKind::wave_plus);
    full_minus = propagator_symbol(g, h, PropagatorKind::wave_minus);
  }

  Triple half(const Triple& u) const {
    return {u.phi * half_phi, u.plus * half_plus, u.minus * half_minus};
  }
  Triple full(const Triple& u) const {
    return {u.phi * full_phi, u.plus * full_plus, u.minus * full_minus};
  }

  Triple linear_rates(const Triple& u) const {
    return {-kI * xi2 * u.phi, -kI * xi_abs * u.plus, kI * xi_abs * u.minus};
  }

  // Nonlinear part of the first-order rates.
  Triple nonlinear_rates(const Triple& u, const Geometry& geometry) const {
    const Eigen::Index n = u.phi.size();
    if (!config.nonlinearity_enabled)
      return {Values::Zero(n), Values::Zero(n), Values::Zero(n)};
    const Fieldd phi(grid, Representation::spectral, u.phi);
    const Fieldd chi(grid, Representation::spectral, 0.5 * (u.plus + u.minus));
    const auto terms = nonlinear_terms(phi, chi, geometry, options);
    Values forcing = kI * terms.wave.values() * inv_xi_abs;
    return {-kI * terms.schrodinger.values() * inv_xi2, forcing, -forcing};
  }

  Triple strang(const Triple& u0, const Geometry& geometry) const {
    Triple u = half(u0);
    if (config.nonlinearity_enabled) {
      const double h = config.dt;
      const Triple k1 = nonlinear_rates(u, geometry);
      const Triple k2 = nonlinear_rates(axpy(u, h / 2, k1), geometry);
      const Triple k3 = nonlinear_rates(axpy(u, h / 2, k2), geometry);
      const Triple k4 = nonlinear_rates(axpy(u, h, k3), geometry);
      u = rk4_combine(u, h, k1, k2, k3, k4);
    }
    return half(u);
  }

  // Lawson (integrating factor) RK4 on v = e^{-tL} u.
  Triple interaction_rk4(const Triple& u, const Geometry& geometry) const {
    const double h = config.dt;
    const Triple k1 = nonlinear_rates(u, geometry);
    const Triple k2 = nonlinear_rates(half(axpy(u, h / 2, k1)), geometry);
    const Triple k3 = nonlinear_rates(axpy(half(u), h / 2, k2), geometry);
    const Triple k4 = nonlinear_rates(axpy(full(u), h, half(k3)), geometry);
    const double w = h / 6;
    const Triple mid = half({k2.phi + k3.phi, k2.plus + k3.plus, k2.minus + k3.minus});
    const Triple e1 = full(axpy(u, w, k1));
    return {e1.phi + w * (2 * mid.phi + k4.phi), e1.plus + w * (2 * mid.plus + k4.plus),
            e1.minus + w * (2 * mid.minus + k4.minus)};
  }

  // Classical RK4 on (phi, chi, chi_t) for the second-order system.
  Triple reference_rk4(const Triple& u, const Geometry& geometry) const {
    struct Second {
      Values phi, chi, chi_t;
    };
    auto rates = [&](const Second& s) {
      Second r;
      r.phi = -kI * xi2 * s.phi;
      r.chi = s.chi_t;
      r.chi_t = -xi2 * s.chi;
      if (config.nonlinearity_enabled) {
        const Fieldd phi(grid, Representation::spectral, s.phi);
        const Fieldd chi(grid, Representation::spectral, s.chi);
        const auto terms = nonlinear_terms(phi, chi, geometry, options);
        r.phi -= kI * terms.schrodinger.values() * inv_xi2;
        r.chi_t += terms.wave.values();
      }
      return r;
    };
    auto axpy = [](const Second& a, double s, const Second& b) {
      return Second{a.phi + s * b.phi, a.chi + s * b.chi, a.chi_t + s * b.chi_t};
    };
    const Second s0{u.phi, 0.5 * (u.plus + u.minus), -0.5 * kI * xi_abs * (u.plus - u.minus)};
    const double h = config.dt;
    const Second k1 = rates(s0);
    const Second k2 = rates(axpy(s0, h / 2, k1));
    const Second k3 = rates(axpy(s0, h / 2, k2));
    const Second k4 = rates(axpy(s0, h, k3));
    const Second s1{s0.phi + (h / 6) * (k1.phi + 2.0 * (k2.phi + k3.phi) + k4.phi),
                    s0.chi + (h / 6) * (k1.chi + 2.0 * (k2.chi + k3.chi) + k4.chi),
                    s0.chi_t + (h / 6) * (k1.chi_t + 2.0 * (k2.chi_t + k3.chi_t) + k4.chi_t)};
    const Values shift = kI * s1.chi_t * inv_xi_abs;
    return {s1.phi, s1.chi + shift, s1.chi - shift};
  }
};

Stepper::Stepper(const Grid<double>& grid, const SimConfig& config)
    : impl_(std::make_shared<const Impl>(grid, config)), config_(config) {
  config.validate();
}

State Stepper::advance(const State& state) const {
  if (!(state.grid() == impl_->grid)) throw std::invalid_argument("state grid differs from stepper grid");
  const Triple u = unpack(state);
  Triple next;
  switch (config_.integrator) {
    case Integrator::strang: next = impl_->strang(u, state.geometry); break;
    case Integrator::interaction_rk4: next = impl_->interaction_rk4(u, state.geometry); break;
    case Integrator::reference_rk4_second_order:
      next = impl_->reference_rk4(u, state.geometry);
      break;
  }
  State out = pack(impl_->grid, std::move(next), state.t + config_.dt, state.geometry);
  if (!all_finite(out)) {
    std::ostringstream msg;
    msg << "non-finite values after step to t = " << out.t << " (" << to_string(config_.integrator)
        << ", dt = " << config_.dt << ")";
    throw BlowUpError(msg.str(), out.t);
  }
  return out;
}

State step(const State& state, const SimConfig& config) {
  return Stepper(state.grid(), config).advance(state);
}

Rates rhs_first_order(const State& state, const SimConfig& config) {
  const Stepper::Impl impl(state.grid(), config);
  const Triple u = unpack(state);
  const Triple r = axpy(impl.linear_rates(u), 1.0, impl.nonlinear_rates(u, state.geometry));
  const auto& g = state.grid();
  return {Fieldd(g, Representation::spectral, r.phi), Fieldd(g, Representation::spectral, r.plus),
          Fieldd(g, Representation::spectral, r.minus)};
}

EvolveResult evolve(State state, const SimConfig& config, const std::vector<Observer>& observers) {
  config.validate();
  const double remaining = config.t_end - state.t;
  const auto steps =
      remaining > 0 ? static_cast<std::size_t>(std::llround(remaining / config.dt)) : std::size_t{0};
  const Stepper stepper(state.grid(), config);
  EvolveResult result{std::move(state), steps, 0};
  auto notify = [&](std::size_t k) {
    for (const auto& obs : observers) obs(k, result.final_state);
    ++result.observer_calls;
  };
  notify(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      result.final_state = stepper.advance(result.final_state);
    } catch (const BlowUpError& err) {
      throw BlowUpError(std::string(err.what()) + " at step " + std::to_string(k), err.time(), k);
    }
    if (k % config.checkpoint_stride == 0) notify(k);
  }
  return result;
}

}  // namespace mzak
