#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

#include "mzak/bourgain/estimates.hpp"
#include "mzak/bourgain/inequalities.hpp"
#include "mzak/bourgain/trilinear.hpp"
#include "mzak/dynamics/first_order.hpp"
#include "mzak/harness/run.hpp"
#include "mzak/invariants/invariants.hpp"
#include "mzak/spectral/operators.hpp"
#include "mzak/util/allocator.hpp"
#include "oracles.hpp"

using namespace mzak;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

SimConfig sim(double dt, double t_end, Integrator integ = Integrator::strang, std::size_t stride = 1) {
  SimConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.integrator = integ;
  c.checkpoint_stride = stride;
  return c;
}

double l2(const State& s) {
  return std::sqrt(s.phi.values().abs2().sum() + s.chi_plus.values().abs2().sum() +
                   s.chi_minus.values().abs2().sum());
}

double l2_diff(const State& a, const State& b) {
  return std::sqrt((a.phi.values() - b.phi.values()).abs2().sum() +
                   (a.chi_plus.values() - b.chi_plus.values()).abs2().sum() +
                   (a.chi_minus.values() - b.chi_minus.values()).abs2().sum());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mzak_acceptance" / name;
  fs::remove_all(p);
  return p;
}

// Gaussian packet scaled so that E_tilde is half the trap threshold 1/(4 c0).
struct Trapped {
  State state;
  double c0 = 0;
};

Trapped trapped_state(int dimension, int points, const Eigen::Vector3d& e = Eigen::Vector3d(0, 0, 1)) {
  RunConfig c;
  c.grid = {dimension, points, 2 * std::numbers::pi};
  c.sim.e = e;
  c.initial.energy_fraction = 0.5;
  if (dimension == 3) c.initial.mode = {2, 1, 1};
  const Grid<double> g(dimension, points, c.grid.period);
  const Geometry geo = dimension == 2 ? Geometry::dim2() : Geometry::dim3(e);
  const double c0 = estimate_c0(g, geo, 100, c.seed).c0;
  return {initial_state(c, c0), c0};
}

struct ConservationRun {
  int dimension = 2;
  double c0 = 0;
  double E_tilde = 0;
  InvariantSeries coarse, fine;
};

// T = 1 strang runs at dt and dt/2.
ConservationRun conservation_run(int dimension, int points, const Eigen::Vector3d& e) {
  const Trapped t = trapped_state(dimension, points, e);
  ConservationRun r{dimension, t.c0, energy_tilde(t.state), {}, {}};
  SimConfig a = sim(1e-3, 1.0, Integrator::strang, 10);
  a.e = e;
  evolve(t.state, a, {invariant_recorder(r.coarse)});
  a.dt /= 2;
  a.checkpoint_stride *= 2;
  evolve(t.state, a, {invariant_recorder(r.fine)});
  return r;
}

}  // namespace

int main() {
  tune_allocator();

  criterion(1, "linear exactness", [] {
    const Grid<double> g(2, 32, 2 * std::numbers::pi);
    const Fieldd phi0 = Fieldd::sample(g, [](const auto& x) { return std::polar(1.0, 3 * x[0] - x[1]); });
    const Fieldd chi0 = Fieldd::sample(g, [](const auto& x) { return std::cos(2 * x[1]); });
    const State s0 = make_state(phi0, chi0, Fieldd(g, Representation::physical), Geometry::dim2(), true);
    double worst = 0;
    for (auto integ : {Integrator::strang, Integrator::interaction_rk4}) {
      SimConfig c = sim(1e-3, 1.0, integ);
      c.nonlinearity_enabled = false;
      const EvolveResult r = evolve(s0, c);
      if (r.steps != 1000) return Verdict{false, "step count " + std::to_string(r.steps)};
      const double t = 1000 * 1e-3;
      const Fieldd phi_exact = Fieldd::sample(g, [&](const auto& x) { return std::polar(1.0, 3 * x[0] - x[1] - 10 * t); });
      const Fieldd chi_exact = Fieldd::sample(g, [&](const auto& x) { return std::cos(2 * x[1]) * std::cos(2 * t); });
      const State& s = r.final_state;
      worst = std::max({worst, max_abs_difference(to_physical(s.phi), phi_exact),
                        max_abs_difference(to_physical(0.5 * (s.chi_plus + s.chi_minus)), chi_exact)});
    }
    return Verdict{worst <= 1e-10, fmt("max pointwise error %.3g over 1000 steps", worst)};
  });

  std::vector<ConservationRun> runs;

  auto drift_verdict = [&](bool use_I1, double tol) {
    if (runs.size() != 2) throw std::runtime_error("conservation runs unavailable");
    bool ok = true;
    std::string detail;
    for (const ConservationRun* r : {&runs[0], &runs[1]}) {
      const double d = relative_drift(use_I1 ? r->coarse.I1 : r->coarse.I2);
      const double d_fine = relative_drift(use_I1 ? r->fine.I1 : r->fine.I2);
      const double ratio = relative_drift(r->coarse.I2) / relative_drift(r->fine.I2);
      const bool small = r->E_tilde < 1 / (4 * r->c0);
      ok = ok && small && d <= tol && d_fine <= tol && ratio >= 3.5;
      detail += fmt("%gD drift %.3g (dt/2: %.3g), I2 refinement x%.2f", r->dimension, d, d_fine, ratio);
      detail += r == &runs[0] ? "; " : "";
    }
    return Verdict{ok, detail};
  };

  criterion(2, "I1 conservation", [&] {
    runs.push_back(conservation_run(2, 64, Eigen::Vector3d(0, 0, 1)));
    runs.push_back(conservation_run(3, 32, Eigen::Vector3d(1, 2, 2) / 3.0));
    return drift_verdict(true, 1e-6);
  });
  criterion(3, "I2 conservation", [&] { return drift_verdict(false, 1e-4); });

  criterion(4, "energy trap", [&] {
    if (runs.size() != 2) throw std::runtime_error("conservation runs unavailable");
    bool ok = true;
    std::string detail;
    for (const ConservationRun* r : {&runs[0], &runs[1]}) {
      const TrapReport t = trap_check(r->coarse, r->c0);
      double worst = 0;
      for (double m : r->coarse.m) worst = std::max(worst, m / t.m1);
      bool below = true;
      for (bool b : t.below_m0) below = below && b;
      ok = ok && t.smallness_met && t.all_satisfied() && below && t.initially_consistent();
      detail += fmt("%gD c0 %.3g, max m/m1 %.9f, m1/m0 %.3f", r->dimension, t.c0, worst, t.m1 / t.m0);
      detail += r == &runs[0] ? "; " : "";
    }
    return Verdict{ok, detail};
  });

  criterion(5, "reformulation equivalence", [] {
    const Grid<double> g(2, 32, 2 * std::numbers::pi);
    const State s0 = trapped_state(2, 32).state;
    auto discrepancy = [&](double dt) {
      const State a = evolve(s0, sim(dt, 0.5)).final_state;
      const State b = evolve(s0, sim(dt, 0.5, Integrator::reference_rk4_second_order)).final_state;
      return l2_diff(a, b) / l2(b);
    };
    const double d1 = discrepancy(1e-3), d2 = discrepancy(5e-4);
    const double order = std::log2(d1 / d2);
    return Verdict{d2 <= 1e-4 && order >= 1.8,
                   fmt("relative L2 %.3g at dt=5e-4, %.3g at dt=1e-3, observed order %.2f", d2, d1, order)};
  });

  criterion(6, "dimensional reduction", [] {
    const Grid<double> g2(2, 16, 2 * std::numbers::pi), g3(3, 16, 2 * std::numbers::pi);
    auto lift = [&](const Fieldd& f) {
      Fieldd out(g3, Representation::physical);
      for (std::size_t k = 0; k < g3.size(); ++k) {
        const auto idx = g3.unflatten(k);
        out.values()[static_cast<Eigen::Index>(k)] = f.values()[static_cast<Eigen::Index>(g2.flatten({idx[0], idx[1], 0}))];
      }
      return out;
    };
    const Fieldd phi = 0.5 * oracle::smooth_field(g2, 601, 3, false);
    const Fieldd chi0 = 0.5 * oracle::smooth_field(g2, 602, 3, true);
    const Fieldd chi1 = 0.5 * oracle::smooth_field(g2, 603, 3, true);
    const State s2 = make_state(phi, chi0, chi1, Geometry::dim2(), true);
    const State s3 = make_state(lift(phi), lift(chi0), lift(chi1), Geometry::dim3(Eigen::Vector3d(0, 0, 1)), true);
    const State a = evolve(s2, sim(1e-3, 0.25)).final_state;
    SimConfig c3 = sim(1e-3, 0.25);
    const State b = evolve(s3, c3).final_state;
    const double err = std::max({max_abs_difference(lift(to_physical(a.phi)), to_physical(b.phi)),
                                 max_abs_difference(lift(to_physical(a.chi_plus)), to_physical(b.chi_plus)),
                                 max_abs_difference(lift(to_physical(a.chi_minus)), to_physical(b.chi_minus))});
    return Verdict{err <= 1e-10, fmt("max slice difference %.3g at T=0.25", err)};
  });

  criterion(7, "structure preservation", [] {
    double reality = 0, conjugacy = 0, gauge = 0;
    std::size_t samples = 0;
    const Observer audit = [&](std::size_t, const State& s) {
      ++samples;
      conjugacy = std::max(conjugacy, conjugacy_defect(s.chi_plus, s.chi_minus));
      const auto [chi, chi_t] = from_first_order(s.chi_plus, s.chi_minus);
      const Fieldd x = to_physical(chi), xt = to_physical(chi_t);
      reality = std::max({reality, max_imaginary(x) / std::max(x.values().abs().maxCoeff(), 1e-300),
                          max_imaginary(xt) / std::max(xt.values().abs().maxCoeff(), 1e-300)});
    };
    const State cases[] = {trapped_state(2, 32).state,
                           trapped_state(3, 16, Eigen::Vector3d(0.3, -0.5, 0.8).normalized()).state};
    const std::complex<double> rot = std::polar(1.0, 1.1);
    for (const State& s0 : cases) {
      SimConfig c = sim(1e-3, 1.0, Integrator::strang, 10);
      c.e = s0.geometry.e;
      const State a = evolve(s0, c, {audit}).final_state;
      State r0 = s0;
      r0.phi = rot * s0.phi;
      const State b = evolve(r0, c).final_state;
      const double scale = std::max(a.phi.values().abs().maxCoeff(), a.chi_plus.values().abs().maxCoeff());
      gauge = std::max({gauge, (b.phi.values() - rot * a.phi.values()).abs().maxCoeff() / scale,
                        (b.chi_plus.values() - a.chi_plus.values()).abs().maxCoeff() / scale,
                        (b.chi_minus.values() - a.chi_minus.values()).abs().maxCoeff() / scale});
    }
    return Verdict{reality <= 1e-10 && conjugacy <= 1e-10 && gauge <= 1e-8,
                   fmt("%g samples, reality %.3g, conjugacy %.3g, gauge %.3g", double(samples), reality,
                       conjugacy, gauge)};
  });

  criterion(8, "dispersive identity", [] {
    std::mt19937_64 rng(801);
    std::uniform_real_distribution<double> u(-10, 10), tu(-100, 100);
    double worst = 0;
    std::size_t count = 0;
    for (int d : {2, 3})
      for (int sign : {1, -1})
        for (int i = 0; i < 100000; ++i, ++count) {
          Eigen::VectorXd a(d), b(d);
          for (int q = 0; q < d; ++q) {
            a[q] = u(rng);
            b[q] = u(rng);
          }
          worst = std::max(worst, dispersive_identity_residual(a, b, tu(rng), tu(rng), sign));
        }
    return Verdict{worst <= 1e-12, fmt("%g samples, max residual %.3g", double(count), worst)};
  });

  criterion(9, "modulation inequalities", [] {
    bool ok = true;
    std::string detail;
    for (int d : {2, 3}) {
      const auto samples = sample_region(d, 500000, 900 + d);
      const InequalityReport shipped = inequality_check_31_33(samples);
      InequalityConstants tiny;
      tiny.c *= 1e-6;
      const InequalityReport broken = inequality_check_31_33(samples, tiny);
      bool caught = true;
      for (auto v : broken.violations) caught = caught && v > 0;
      ok = ok && shipped.all_satisfied() && caught;
      detail += fmt("%gD: minimal c %.3g/%.3g/%.3g", d, shipped.minimal_c[0], shipped.minimal_c[1],
                    shipped.minimal_c[2]);
      detail += fmt(", c*1e-6 violations %g/%g/%g", double(broken.violations[0]),
                    double(broken.violations[1]), double(broken.violations[2]));
      detail += d == 2 ? "; " : "";
    }
    return Verdict{ok, "1e6 samples (shipped c=9, c1=0.1, c2=12), " + detail};
  });

  criterion(10, "trilinear oracle", [] {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> expo(-0.75, 0.75), mexp(-1.5, 1.5), dtu(0.05, 0.3),
        Lu(1.0, 7.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const Grid<double> g(2, 8, Lu(rng));
      const double dt = dtu(rng);
      TrilinearSpec s;
      s.a = expo(rng);
      s.a1 = expo(rng);
      s.a2 = expo(rng);
      s.m = mexp(rng);
      s.dispersion = static_cast<Dispersion>(i % 3);
      s.style = static_cast<DenominatorStyle>((i / 3) % 3);
      const unsigned seed = 1010 + 3 * static_cast<unsigned>(i);
      const auto v = oracle::random_spacetime(g, 8, dt, seed);
      const auto v1 = oracle::random_spacetime(g, 8, dt, seed + 1);
      const auto v2 = oracle::random_spacetime(g, 8, dt, seed + 2);
      const double expect = oracle::trilinear(v, v1, v2, s);
      worst = std::max(worst, std::abs(trilinear_integral(v, v1, v2, s) - expect) / expect);
    }
    return Verdict{worst <= 1e-10, fmt("20 configurations, max relative difference %.3g", worst)};
  });

  criterion(11, "bilinear estimate consistency", [] {
    const std::vector<double> T_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const LemmaParams params;
    bool ok = true;
    std::string detail;
    for (LemmaId id : {LemmaId::C_prime, LemmaId::C_double_prime, LemmaId::D, LemmaId::E_prime,
                       LemmaId::E_double_prime, LemmaId::F, LemmaId::F_tilde}) {
      check_admissible(id, params);
      EnsembleSpec spec;
      spec.dimension = lemma_dimension(id);
      spec.members = 100;
      const EstimateReport scan = theta_scan(id, params, T_list, spec);
      bool finite = true;
      double base = 0;
      for (std::size_t i = 0; i < scan.sample_count; ++i) {
        finite = finite && std::isfinite(scan.ratios[i]) && scan.ratios[i] > 0;
        if (scan.T[i] == 1.0) base = std::max(base, scan.ratios[i]);
      }
      const double refined = ensemble_ratios(id, params, spec.refined(), 1.0).max_ratio;
      const double factor = std::max(base / refined, refined / base);
      ok = ok && finite && factor < 2 && scan.theta_fit > -0.05;
      detail += to_string(id) + fmt(" theta %.3f refine x%.3f", scan.theta_fit, factor) + "; ";
    }
    return Verdict{ok, detail + "consistency evidence, not verification"};
  });

  criterion(12, "determinism", [] {
    bool ok = true;
    std::string detail;
    auto twice = [&](const std::string& name, RunConfig c, const std::vector<std::string>& files) {
      std::string bytes[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path dir = scratch(name + std::to_string(k));
        c.output.dir = dir.string();
        const RunOutcome o = run(c);
        if (o.exit_code != exit_ok) throw std::runtime_error(name + " exit " + std::to_string(o.exit_code));
        for (const auto& f : files) bytes[k] += slurp(dir / f);
      }
      const bool same = bytes[0] == bytes[1];
      ok = ok && same;
      detail += name + (same ? " identical" : " differs") + fmt(" (%g bytes); ", double(bytes[0].size()));
    };

    RunConfig trap;
    trap.mode = RunMode::trap_check;
    trap.grid.points = 64;
    trap.sim.checkpoint_stride = 10;
    trap.initial.energy_fraction = 0.5;
    twice("trap", trap, {"trap.csv", "invariants.csv", "summary.txt"});

    RunConfig inv = trap;
    inv.mode = RunMode::simulate;
    inv.grid = {3, 16, 2 * std::numbers::pi};
    inv.sim.t_end = 0.25;
    inv.output.checkpoint_every = 100;
    twice("simulate", inv, {"invariants.csv", "summary.txt", "checkpoint_00000100.mzcp", "checkpoint_final.mzcp"});

    RunConfig est;
    est.mode = RunMode::bourgain_check;
    est.bourgain.lemmas = {"E''", "F~"};
    twice("bourgain", est, {"estimate_Epp.csv", "estimate_Ft.csv", "summary.txt"});

    const auto samples = sample_region(3, 200000, 1201);
    const auto again = sample_region(3, 200000, 1201);
    const InequalityReport a = inequality_check_31_33(samples), b = inequality_check_31_33(again);
    const bool same = a.violations == b.violations &&
                      std::memcmp(a.minimal_c.data(), b.minimal_c.data(), sizeof a.minimal_c) == 0;
    ok = ok && same;
    detail += std::string("inequality samples ") + (same ? "identical" : "differ");
    return Verdict{ok, detail};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures ? 1 : 0;
}
