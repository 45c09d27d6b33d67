#include "mzak/bourgain/inequalities.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "mzak/util/random.hpp"

namespace mzak {

namespace {

double bracket(double x) { return std::sqrt(1.0 + x * x); }

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
}

}  // namespace

double dispersive_identity_residual(const Eigen::VectorXd& xi1, const Eigen::VectorXd& xi2,
                                    double tau1, double tau2, int sign) {
  check_sign(sign);
  if (xi1.size() != xi2.size()) throw std::invalid_argument("frequency dimensions differ");
  const Eigen::VectorXd xi = xi1 - xi2;
  const double tau = tau1 - tau2;
  const double sigma1 = tau1 + xi1.squaredNorm();
  const double sigma2 = tau2 + xi2.squaredNorm();
  const double sigma = tau + sign * xi.norm();
  const double lhs = xi1.squaredNorm() - xi2.squaredNorm() - sign * xi.norm();
  return std::abs(lhs - (sigma1 - sigma2 - sigma));
}

bool inequality_check_301(double y1, double y2, double lambda) {
  if (!(lambda > 1)) throw std::invalid_argument("lambda must exceed 1");
  const double z = std::abs(y1 - y2);
  double rhs = lambda * std::abs(y2);
  if (y1 != 0.0) {
    const double ratio = z / std::abs(y1);
    if (lambda / (lambda + 1) <= ratio && ratio <= lambda / (lambda - 1))
      rhs += lambda / (lambda - 1) * std::abs(y1);
  }
  return z <= rhs * (1 + 1e-14);
}

InequalityReport inequality_check_31_33(const std::vector<FrequencySample>& samples,
                                        const InequalityConstants& k, bool keep_flags) {
  InequalityReport r;
  r.constants = k;
  r.samples = samples.size();
  r.first_violation.fill(samples.size());
  if (keep_flags) r.satisfied.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    check_sign(s.sign);
    if (s.xi1.size() != s.xi2.size()) throw std::invalid_argument("frequency dimensions differ");
    const double r1 = s.xi1.norm();
    if (r1 < 2 * s.xi2.norm())
      throw std::invalid_argument("sample " + std::to_string(i) + " lies outside |xi1| >= 2|xi2|");
    const Eigen::VectorXd xi = s.xi1 - s.xi2;
    const double sigma1 = s.tau1 + r1 * r1;
    const double sigma2 = s.tau2 + s.xi2.squaredNorm();
    const double sigma = s.tau1 - s.tau2 + s.sign * xi.norm();
    const double lhs = 1.0 + r1 * r1;
    const double b = bracket(sigma), b1 = bracket(sigma1), b2 = bracket(sigma2);
    const bool ind1 = k.c1 * std::abs(sigma1) <= r1 * r1 && r1 * r1 <= k.c2 * std::abs(sigma1);
    const double x2 = xi.squaredNorm();
    const bool ind = k.c1 * std::abs(sigma) <= x2 && x2 <= k.c2 * std::abs(sigma);
    const std::array<double, 3> base{b + b1 + b2, b + b2 + (ind1 ? b1 : 0.0),
                                     b1 + b2 + (ind ? b : 0.0)};
    std::array<bool, 3> ok{};
    for (int q = 0; q < 3; ++q) {
      const double need = lhs / base[q];
      r.minimal_c[q] = std::max(r.minimal_c[q], need);
      ok[q] = lhs <= k.c * base[q];
      if (!ok[q]) {
        if (r.violations[q] == 0) r.first_violation[q] = i;
        ++r.violations[q];
      }
    }
    if (keep_flags) r.satisfied.push_back(ok);
  }
  return r;
}

std::vector<FrequencySample> sample_region(int dimension, std::size_t count, std::uint64_t seed,
                                           double max_xi) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("dimension must be 2 or 3");
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  auto direction = [&] {
    Eigen::VectorXd v(dimension);
    do {
      for (int a = 0; a < dimension; ++a) v[a] = normal(rng);
    } while (v.norm() < 1e-12);
    return Eigen::VectorXd(v / v.norm());
  };
  const double lo = std::log(1e-2), hi = std::log(max_xi);
  std::vector<FrequencySample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    FrequencySample s;
    const double r1 = std::exp(lo + (hi - lo) * unit(rng));
    s.xi1 = r1 * direction();
    s.xi2 = 0.5 * r1 * unit(rng) * direction();
    s.sign = unit(rng) < 0.5 ? 1 : -1;
    const double spread = r1 * r1 + 1.0;
    const double j1 = spread * (2 * unit(rng) - 1) * std::pow(10.0, -4 * unit(rng));
    const double j2 = spread * (2 * unit(rng) - 1) * std::pow(10.0, -4 * unit(rng));
    switch (i % 3) {
      case 0:  // both on the Schrodinger surfaces, up to small jitter
        s.tau1 = -r1 * r1 + j1;
        s.tau2 = -s.xi2.squaredNorm() + j2;
        break;
      case 1: {  // sigma on the wave surface, sigma2 small
        s.tau2 = -s.xi2.squaredNorm() + j2;
        s.tau1 = s.tau2 - s.sign * (s.xi1 - s.xi2).norm() + j1;
        break;
      }
      default:
        s.tau1 = 3 * spread * (2 * unit(rng) - 1);
        s.tau2 = 3 * spread * (2 * unit(rng) - 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mzak
