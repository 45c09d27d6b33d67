#include "mzak/bourgain/estimates.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mzak/errors.hpp"
#include "mzak/util/parallel.hpp"
#include "mzak/util/random.hpp"

namespace mzak {

namespace {

using Complex = std::complex<double>;

struct LemmaName {
  LemmaId id;
  const char* name;
  const char* alias;
};

constexpr LemmaName kNames[] = {
    {LemmaId::C, "C", "C"},
    {LemmaId::C_prime, "C'", "Cp"},
    {LemmaId::C_double_prime, "C''", "Cpp"},
    {LemmaId::D, "D", "D"},
    {LemmaId::D_prime, "D'", "Dp"},
    {LemmaId::D_double_prime, "D''", "Dpp"},
    {LemmaId::E, "E", "E"},
    {LemmaId::E_prime, "E'", "Ep"},
    {LemmaId::E_double_prime, "E''", "Epp"},
    {LemmaId::F, "F", "F"},
    {LemmaId::F_tilde, "F~", "Ft"},
    {LemmaId::F_prime, "F'", "Fp"},
    {LemmaId::F_double_prime, "F''", "Fpp"},
};

enum class Family { C, D, E, F };

Family family(LemmaId id) {
  switch (id) {
    case LemmaId::C:
    case LemmaId::C_prime:
    case LemmaId::C_double_prime:
      return Family::C;
    case LemmaId::D:
    case LemmaId::D_prime:
    case LemmaId::D_double_prime:
      return Family::D;
    case LemmaId::E:
    case LemmaId::E_prime:
    case LemmaId::E_double_prime:
      return Family::E;
    default:
      return Family::F;
  }
}

// 0 for the unprimed (and tilde) form, 1 for ', 2 for ''.
int variant(LemmaId id) {
  switch (id) {
    case LemmaId::C_prime:
    case LemmaId::D_prime:
    case LemmaId::E_prime:
    case LemmaId::F_prime:
      return 1;
    case LemmaId::C_double_prime:
    case LemmaId::D_double_prime:
    case LemmaId::E_double_prime:
    case LemmaId::F_double_prime:
      return 2;
    default:
      return 0;
  }
}

[[noreturn]] void inadmissible(LemmaId id, const LemmaParams& p, const std::string& constraint) {
  std::ostringstream msg;
  msg << "lemma " << to_string(id) << " is not stated for (k,l)=(" << p.k << "," << p.l
      << ")";
  if (family(id) == Family::E || family(id) == Family::F)
    msg << ", epsilon=" << p.epsilon << ", delta=" << p.delta;
  msg << ": requires " << constraint;
  throw InadmissibleParameters(msg.str());
}

Eigen::ArrayXd riesz_symbol(const Grid<double>& g, double s) {
  Eigen::ArrayXd sym = g.xi_abs().pow(s);
  sym[0] = 0.0;
  return sym;
}

SpaceTimeField riesz(const SpaceTimeField& f, double s) {
  if (s == 0.0) return f;
  return apply_spatial_symbol(f, riesz_symbol(f.grid(), s));
}

SpaceTimeField drop_zero_mode(const SpaceTimeField& f) {
  Eigen::ArrayXd sym = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(f.slice_size()));
  sym[0] = 0.0;
  return apply_spatial_symbol(f, sym);
}

Dispersion wave(const LemmaParams& p) {
  return p.sign > 0 ? Dispersion::wave_plus : Dispersion::wave_minus;
}

NormSpec schr(double k, double b) { return {k, b, Dispersion::schrodinger, WeightStyle::inhomogeneous}; }

}  // namespace

std::string to_string(LemmaId id) {
  for (const auto& n : kNames)
    if (n.id == id) return n.name;
  return "?";
}

LemmaId lemma_from_string(std::string_view name) {
  for (const auto& n : kNames)
    if (name == n.name || name == n.alias) return n.id;
  throw std::invalid_argument("unknown lemma '" + std::string(name) + "'");
}

int lemma_dimension(LemmaId id) {
  const Family f = family(id);
  return f == Family::C || f == Family::D ? 3 : 2;
}

bool lemma_pairs_with_wave(LemmaId id) {
  const Family f = family(id);
  return f == Family::C || f == Family::E;
}

void check_admissible(LemmaId id, const LemmaParams& p) {
  const double k = p.k, l = p.l;
  if (!std::isfinite(k) || !std::isfinite(l)) inadmissible(id, p, "finite k and l");
  if (p.sign != 1 && p.sign != -1) throw InadmissibleParameters("sign must be +1 or -1");
  if (!(p.plus > 0 && p.plus < 0.5)) throw InadmissibleParameters("plus must lie in (0, 1/2)");
  if (l < -1) inadmissible(id, p, "l >= -1");
  const Family f = family(id);
  const int v = variant(id);
  if (f == Family::C || f == Family::E) {
    if (k < l + 1) inadmissible(id, p, "l+1 <= k");
    if (v == 0) {
      if (!(k < l + 2)) inadmissible(id, p, "k < l+2");
      if (k == 0 && l == -1) inadmissible(id, p, "(k,l) != (0,-1)");
    } else if (f == Family::E && v == 2) {
      if (k != l + 2) inadmissible(id, p, "k = l+2");
    } else if (k > l + 2) {
      inadmissible(id, p, "k <= l+2");
    }
  } else {
    if (k < (l + 2) / 2) inadmissible(id, p, "k >= (l+2)/2");
    const bool tilde = id == LemmaId::F_tilde;
    if (v == 0 || tilde) {
      if (!(k > l + 1)) inadmissible(id, p, "k > l+1");
    } else if (k != l + 1) {
      inadmissible(id, p, "k = l+1");
    }
  }
  if (f == Family::E || f == Family::F) {
    if (!(p.epsilon > 0 && p.epsilon < 1)) inadmissible(id, p, "0 < epsilon < 1");
    if (f == Family::E && !(p.delta > 0)) inadmissible(id, p, "delta > 0");
    if (f == Family::F && id != LemmaId::F_tilde && !(p.delta > 0 && p.delta < 1))
      inadmissible(id, p, "0 < delta < 1");
  }
}

bool is_admissible(LemmaId id, const LemmaParams& p) {
  try {
    check_admissible(id, p);
    return true;
  } catch (const InadmissibleParameters&) {
    return false;
  }
}

std::vector<LemmaId> admissible_lemmas(int dimension, const LemmaParams& p) {
  std::vector<LemmaId> out;
  for (const auto& n : kNames)
    if (lemma_dimension(n.id) == dimension && is_admissible(n.id, p)) out.push_back(n.id);
  return out;
}

RatioTerms bilinear_terms(const SpaceTimeField& phi, const SpaceTimeField& second, LemmaId id,
                          const LemmaParams& p) {
  check_admissible(id, p);
  if (phi.grid().dimension() != lemma_dimension(id))
    throw DimensionError("lemma " + to_string(id) + " is stated in dimension " +
                         std::to_string(lemma_dimension(id)));
  const Family f = family(id);
  const int v = variant(id);
  const int axis = p.derivative_axis;
  const double lhs_b = v == 1 ? -0.5 : -0.5 + p.plus;
  const Dispersion w = wave(p);

  const SpaceTimeField dphi = partial(phi, axis);
  RatioTerms r;
  switch (f) {
    case Family::C:
    case Family::E: {
      const SpaceTimeField dchi = partial(second, axis);
      const double eps = f == Family::E ? p.epsilon : 0.0;
      const double del = f == Family::E ? p.delta : 0.0;
      const SpaceTimeField G = riesz(pointwise_product(dphi, dchi), -1.0 + eps);
      r.lhs = v == 2 ? yk_norm(G, schr(p.k - eps, 0.0)) : xkb_norm(G, schr(p.k - eps, lhs_b));
      r.rhs = xkb_norm(riesz(dphi, eps), schr(p.k - eps, 0.5)) *
              xkb_norm(riesz(dchi, -del), {p.l + del, 0.5, w, WeightStyle::inhomogeneous});
      break;
    }
    case Family::D: {
      const SpaceTimeField dphi2 = partial(second, axis);
      const SpaceTimeField G = pointwise_product(dphi, dphi2, true);
      const NormSpec lhs{p.l + 2, lhs_b, w, WeightStyle::inhomogeneous};
      r.lhs = v == 2 ? yk_norm(G, lhs) : xkb_norm(G, lhs);
      const double b = v == 0 ? 0.5 : 0.5 + p.plus;
      r.rhs = xkb_norm(dphi, schr(p.k, b)) * xkb_norm(dphi2, schr(p.k, b));
      break;
    }
    case Family::F: {
      const SpaceTimeField G = pointwise_product(dphi, dphi, true);
      if (id == LemmaId::F_tilde) {
        r.lhs = xkb_norm(drop_zero_mode(G), {p.l + 2, lhs_b, w, WeightStyle::homogeneous});
      } else {
        const SpaceTimeField H = riesz(G, 2.0 - p.delta);
        const NormSpec lhs{p.l + p.delta, lhs_b, w, WeightStyle::inhomogeneous};
        r.lhs = v == 2 ? yk_norm(H, lhs) : xkb_norm(H, lhs);
      }
      const double n = xkb_norm(riesz(dphi, p.epsilon), schr(p.k - p.epsilon, 0.5));
      r.rhs = n * n;
      break;
    }
  }
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

double bilinear_ratio(const SpaceTimeField& phi, const SpaceTimeField& second, LemmaId id,
                      const LemmaParams& params) {
  return bilinear_terms(phi, second, id, params).ratio;
}

EnsembleSpec EnsembleSpec::refined() const {
  EnsembleSpec r = *this;
  r.points *= 2;
  r.n_time *= 2;
  return r;
}

double ensemble_dt(const EnsembleSpec& spec, double T) { return 5.0 * T / spec.n_time; }

EnsembleMember ensemble_member(const EnsembleSpec& spec, std::size_t j, double T,
                               Dispersion second_dispersion) {
  if (!(T > 0 && T <= 1)) throw std::invalid_argument("window T must lie in (0, 1]");
  if (spec.band < 1 || 4 * spec.band > spec.points)
    throw std::invalid_argument("ensemble band must lie in [1, points/4]");
  const Grid<double> grid(spec.dimension, spec.points, spec.period);
  const int d = spec.dimension;
  const int B = spec.band;
  std::mt19937_64 rng(splitmix64(spec.seed + j));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  auto draw = [&](Dispersion disp) {
    struct Mode {
      std::size_t flat;
      Complex c;
      double omega;
    };
    std::vector<Mode> modes;
    for (int m0 = -B; m0 <= B; ++m0)
      for (int m1 = -B; m1 <= B; ++m1)
        for (int m2 = (d == 3 ? -B : 0); m2 <= (d == 3 ? B : 0); ++m2) {
          const Complex c(normal(rng), normal(rng));
          if (m0 == 0 && m1 == 0 && m2 == 0) continue;
          const std::size_t flat = grid.flat_of_modes({m0, m1, m2});
          const double xi2 = grid.xi_squared()[static_cast<Eigen::Index>(flat)];
          const double omega = disp == Dispersion::schrodinger ? xi2
                               : disp == Dispersion::wave_plus ? std::sqrt(xi2)
                                                               : -std::sqrt(xi2);
          modes.push_back({flat, c, omega});
        }
    const double nu = unit(rng);
    const double dt = ensemble_dt(spec, T);
    return SpaceTimeField::sample(grid, spec.n_time, dt, [&](double t) {
      Fieldd s(grid, Representation::spectral);
      const double window = bump(t / T);
      if (window != 0.0)
        for (const auto& m : modes) s[m.flat] = window * m.c * std::polar(1.0, (nu - m.omega) * t);
      return s;
    });
  };
  SpaceTimeField phi = draw(Dispersion::schrodinger);
  SpaceTimeField second = draw(second_dispersion);
  return {std::move(phi), std::move(second)};
}

void EstimateReport::add(double T_value, double ratio) {
  if (!std::isfinite(ratio) || ratio < 0)
    throw std::domain_error("estimate ratio is negative or not finite");
  T.push_back(T_value);
  ratios.push_back(ratio);
  ++sample_count;
  max_ratio = std::max(max_ratio, ratio);
  mean_ratio += (ratio - mean_ratio) / static_cast<double>(sample_count);
}

EstimateReport ensemble_ratios(LemmaId id, const LemmaParams& params, const EnsembleSpec& spec,
                               double T) {
  check_admissible(id, params);
  if (spec.members == 0) throw std::invalid_argument("ensemble is empty");
  if (spec.dimension != lemma_dimension(id))
    throw DimensionError("ensemble dimension does not match lemma " + to_string(id));
  const Dispersion second = lemma_pairs_with_wave(id) ? wave(params) : Dispersion::schrodinger;
  std::vector<double> ratios(spec.members);
  parallel_for(spec.members, [&](std::size_t j) {
    const EnsembleMember m = ensemble_member(spec, j, T, second);
    ratios[j] = bilinear_ratio(m.phi, m.second, id, params);
  });
  EstimateReport r;
  r.lemma = id;
  r.params = params;
  r.theta_fit = std::numeric_limits<double>::quiet_NaN();
  for (double x : ratios) r.add(T, x);
  return r;
}

double fit_theta(const std::vector<double>& T, const std::vector<double>& max_ratio) {
  if (T.size() != max_ratio.size()) throw std::invalid_argument("T and ratio counts differ");
  if (T.size() < 3) throw std::invalid_argument("theta fit needs at least 3 T values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(T[i] > 0) || !(max_ratio[i] > 0))
      throw std::domain_error("theta fit needs positive T and ratios");
    const double x = std::log(T[i]), y = std::log(max_ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0) throw std::invalid_argument("theta fit needs distinct T values");
  return (n * sxy - sx * sy) / den;
}

EstimateReport theta_scan(LemmaId id, const LemmaParams& params, const std::vector<double>& T_list,
                          const EnsembleSpec& spec) {
  if (T_list.size() < 3) throw std::invalid_argument("theta_scan needs at least 3 T values");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (!(T_list[i] > 0 && T_list[i] <= 1)) throw std::invalid_argument("T values must lie in (0, 1]");
    if (i > 0 && !(T_list[i] > T_list[i - 1]))
      throw std::invalid_argument("T values must be increasing");
  }
  EstimateReport out;
  out.lemma = id;
  out.params = params;
  std::vector<double> maxima;
  for (double T : T_list) {
    const EstimateReport r = ensemble_ratios(id, params, spec, T);
    for (double x : r.ratios) out.add(T, x);
    maxima.push_back(r.max_ratio);
  }
  out.theta_fit = fit_theta(T_list, maxima);
  return out;
}

std::string summary_line(const EstimateReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "# lemma=%s k=%.17g l=%.17g epsilon=%.17g delta=%.17g plus=%.17g sign=%d "
                "samples=%zu max_ratio=%.17g mean_ratio=%.17g theta_fit=%.17g",
                to_string(r.lemma).c_str(), r.params.k, r.params.l, r.params.epsilon,
                r.params.delta, r.params.plus, r.params.sign, r.sample_count, r.max_ratio,
                r.mean_ratio, r.theta_fit);
  return buf;
}

void write_estimate_csv(std::ostream& out, const EstimateReport& r) {
  out << "sample_id,T,ratio\n";
  char line[96];
  for (std::size_t i = 0; i < r.sample_count; ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, r.T[i], r.ratios[i]);
    out << line;
  }
  out << summary_line(r) << '\n';
}

}  // namespace mzak
