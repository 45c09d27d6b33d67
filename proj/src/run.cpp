#include "mzak/harness/run.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "mzak/bourgain/estimates.hpp"
#include "mzak/dynamics/checkpoint.hpp"
#include "mzak/dynamics/first_order.hpp"
#include "mzak/dynamics/integrator.hpp"
#include "mzak/errors.hpp"

namespace mzak {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Geometry geometry_of(const RunConfig& c) {
  return c.grid.dimension == 2 ? Geometry::dim2() : Geometry::dim3(c.sim.e);
}

Grid<double> grid_of(const RunConfig& c) {
  return Grid<double>(c.grid.dimension, c.grid.points, c.grid.period);
}

// Periodic offset of x from c, folded into [-L/2, L/2).
double wrap(double dx, double L) { return dx - L * std::floor(dx / L + 0.5); }

struct RawData {
  Fieldd phi0, chi0, chi1;
};

RawData raw_data(const RunConfig& c) {
  const Grid<double> g = grid_of(c);
  const InitialData& d = c.initial;
  const int dim = c.grid.dimension;
  const double L = c.grid.period;
  const double k0 = g.wavenumber_unit();
  auto phase = [&](const std::array<double, 3>& x, const std::array<int, 3>& m) {
    double p = 0.0;
    for (int a = 0; a < dim; ++a) p += k0 * m[a] * x[a];
    return p;
  };
  auto gauss = [&](const std::array<double, 3>& x, const std::array<double, 3>& center, double w) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double dx = wrap(x[a] - center[a] * L, L);
      r2 += dx * dx;
    }
    return std::exp(-r2 / (2 * w * w * L * L));
  };
  RawData r{Fieldd(g, Representation::physical), Fieldd(g, Representation::physical),
            Fieldd(g, Representation::physical)};
  if (d.recipe == Recipe::gaussian_packet) {
    r.phi0 = Fieldd::sample(g, [&](const auto& x) {
      return d.amplitude * gauss(x, d.center, d.width) * std::polar(1.0, phase(x, d.mode));
    });
    r.chi0 = Fieldd::sample(g, [&](const auto& x) {
      return std::complex<double>(d.chi_amplitude * gauss(x, d.chi_center, d.chi_width));
    });
  } else {
    r.phi0 = Fieldd::sample(g, [&](const auto& x) { return d.amplitude * std::polar(1.0, phase(x, d.mode)); });
    r.chi0 = Fieldd::sample(g, [&](const auto& x) {
      return std::complex<double>(d.chi_amplitude * std::cos(phase(x, d.chi_mode)));
    });
  }
  return r;
}

double estimate_config_c0(const RunConfig& c) {
  const Grid<double> g = grid_of(c);
  return estimate_c0(c0_ensemble(g, c.trap.c0_ensemble, c.seed), geometry_of(c),
                     c.trap.safety_factor)
      .c0;
}

double relative_difference(const State& a, const State& b) {
  const double num = l2_norm_squared(a.phi - b.phi) + l2_norm_squared(a.chi_plus - b.chi_plus);
  const double den = l2_norm_squared(b.phi) + l2_norm_squared(b.chi_plus);
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::string checkpoint_name(std::size_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "checkpoint_%08zu.mzcp", step);
  return buf;
}

struct Trajectory {
  EvolveResult result;
  InvariantSeries series;
  std::size_t start_step = 0;
};

Trajectory integrate(const RunConfig& c, std::optional<double> c0, RunOutcome* outcome,
                     bool checkpoints) {
  std::size_t start_step = 0;
  State initial = initial_state(c, c0, &start_step);
  InvariantSeries series;
  const fs::path dir = c.output.dir;
  const std::uint64_t hash = config_hash(c);
  std::vector<Observer> observers{invariant_recorder(series)};
  if (checkpoints && c.output.checkpoint_every > 0) {
    observers.push_back([&, hash](std::size_t step, const State& s) {
      const std::size_t global = start_step + step;
      if (step % c.output.checkpoint_every != 0) return;
      const fs::path p = dir / checkpoint_name(global);
      write_checkpoint(p, {s, global, hash});
      outcome->artifacts.push_back(p);
    });
  }
  Trajectory tr{evolve(std::move(initial), c.sim, observers), std::move(series), start_step};
  if (checkpoints) {
    const fs::path p = dir / "checkpoint_final.mzcp";
    write_checkpoint(p, {tr.result.final_state, tr.start_step + tr.result.steps, hash});
    outcome->artifacts.push_back(p);
  }
  return tr;
}

void write_invariants(const Trajectory& tr, const fs::path& dir, RunOutcome& outcome) {
  const fs::path p = dir / "invariants.csv";
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  write_invariants_csv(out, tr.series);
  outcome.artifacts.push_back(p);
}

Report base_summary(const RunConfig& c) {
  Report r;
  r.name = "summary";
  r.summary = provenance(c);
  return r;
}

void add_trajectory_summary(Report& r, const Trajectory& tr) {
  r.set("start_step", static_cast<double>(tr.start_step));
  r.set("steps", static_cast<double>(tr.result.steps));
  r.set("t_final", tr.result.final_state.t);
  r.set("samples", static_cast<double>(tr.series.size()));
  r.set("I1_drift", relative_drift(tr.series.I1));
  r.set("I2_drift", relative_drift(tr.series.I2));
  r.set("conjugacy_defect",
        conjugacy_defect(tr.result.final_state.chi_plus, tr.result.final_state.chi_minus));
}

RunOutcome run_simulate(const RunConfig& c, bool check_drift) {
  RunOutcome outcome;
  const fs::path dir = c.output.dir;
  std::optional<double> c0;
  if (c.initial.energy_fraction > 0 && c.initial.recipe != Recipe::from_file)
    c0 = estimate_config_c0(c);
  const Trajectory tr = integrate(c, c0, &outcome, !check_drift);
  write_invariants(tr, dir, outcome);
  Report summary = base_summary(c);
  add_trajectory_summary(summary, tr);
  if (c0) summary.set("c0", *c0);
  if (check_drift) {
    const double d1 = relative_drift(tr.series.I1);
    const double d2 = relative_drift(tr.series.I2);
    const bool ok = d1 <= c.invariants.I1_tolerance && d2 <= c.invariants.I2_tolerance;
    summary.set("I1_tolerance", c.invariants.I1_tolerance);
    summary.set("I2_tolerance", c.invariants.I2_tolerance);
    summary.set("conserved", ok ? "true" : "false");
    if (!ok) {
      outcome.exit_code = exit_violation;
      outcome.message = "invariant drift exceeds tolerance";
    }
  }
  outcome.artifacts.push_back(emit_report(summary, ReportFormat::summary_text, dir));
  return outcome;
}

RunOutcome run_trap(const RunConfig& c) {
  RunOutcome outcome;
  const fs::path dir = c.output.dir;
  const double c0 = estimate_config_c0(c);
  const Trajectory tr = integrate(c, c0, &outcome, false);
  write_invariants(tr, dir, outcome);
  const TrapReport t = trap_check(tr.series, c0);
  Report table;
  table.name = "trap";
  table.columns = {"t", "m", "m1", "m0", "satisfied", "below_m0"};
  for (std::size_t i = 0; i < tr.series.size(); ++i) {
    const bool sat = t.smallness_met && t.satisfied[i];
    const bool below = t.smallness_met && t.below_m0[i];
    table.rows.push_back({tr.series.times[i], tr.series.m[i], t.m1, t.m0, sat ? 1.0 : 0.0,
                          below ? 1.0 : 0.0});
  }
  outcome.artifacts.push_back(emit_report(table, ReportFormat::csv, dir));
  Report summary = base_summary(c);
  add_trajectory_summary(summary, tr);
  summary.set("c0", t.c0);
  summary.set("E_tilde", t.E_tilde);
  summary.set("m0", t.m0);
  summary.set("m1", t.m1);
  summary.set("smallness_met", t.smallness_met ? "true" : "false");
  summary.set("trap_holds", t.all_satisfied() ? "true" : "false");
  summary.set("message", t.message);
  outcome.artifacts.push_back(emit_report(summary, ReportFormat::summary_text, dir));
  outcome.message = t.message;
  if (t.smallness_met && (!t.all_satisfied() || !t.initially_consistent()))
    outcome.exit_code = exit_violation;
  return outcome;
}

RunOutcome run_convergence(const RunConfig& c) {
  RunOutcome outcome;
  const fs::path dir = c.output.dir;
  std::optional<double> c0;
  if (c.initial.energy_fraction > 0 && c.initial.recipe != Recipe::from_file)
    c0 = estimate_config_c0(c);
  const State s0 = initial_state(c, c0);
  std::vector<State> finals;
  std::vector<double> dts, d1, d2, ref;
  for (int level = 0; level < c.convergence.levels; ++level) {
    SimConfig sim = c.sim;
    sim.dt = c.sim.dt / std::ldexp(1.0, level);
    sim.checkpoint_stride = c.sim.checkpoint_stride << level;
    InvariantSeries series;
    finals.push_back(evolve(s0, sim, {invariant_recorder(series)}).final_state);
    dts.push_back(sim.dt);
    d1.push_back(relative_drift(series.I1));
    d2.push_back(relative_drift(series.I2));
    if (c.convergence.compare_reference) {
      SimConfig rsim = sim;
      rsim.integrator = Integrator::reference_rk4_second_order;
      ref.push_back(relative_difference(finals.back(), evolve(s0, rsim).final_state));
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> diff(dts.size(), nan), order(dts.size(), nan);
  for (std::size_t i = 0; i + 1 < finals.size(); ++i)
    diff[i] = relative_difference(finals[i], finals[i + 1]);
  for (std::size_t i = 0; i + 2 < finals.size(); ++i) order[i] = std::log2(diff[i] / diff[i + 1]);
  Report table;
  table.name = "convergence";
  table.columns = {"dt", "difference_to_next", "observed_order", "I1_drift", "I2_drift"};
  if (c.convergence.compare_reference) table.columns.push_back("reference_difference");
  for (std::size_t i = 0; i < dts.size(); ++i) {
    table.rows.push_back({dts[i], diff[i], order[i], d1[i], d2[i]});
    if (c.convergence.compare_reference) table.rows.back().push_back(ref[i]);
  }
  outcome.artifacts.push_back(emit_report(table, ReportFormat::csv, dir));
  Report summary = base_summary(c);
  summary.set("integrator", std::string(to_string(c.sim.integrator)));
  summary.set("levels", static_cast<double>(c.convergence.levels));
  if (finals.size() >= 3) summary.set("observed_order", order[0]);
  outcome.artifacts.push_back(emit_report(summary, ReportFormat::summary_text, dir));
  return outcome;
}

std::string file_stem(LemmaId id) {
  std::string s = to_string(id);
  std::string out;
  for (char ch : s) out += ch == '\'' ? std::string("p") : ch == '~' ? std::string("t") : std::string(1, ch);
  return out;
}

RunOutcome run_bourgain(const RunConfig& c) {
  RunOutcome outcome;
  const fs::path dir = c.output.dir;
  const auto& b = c.bourgain;
  Report summary = base_summary(c);
  summary.set("note", "torus consistency evidence, not verification");
  bool ok = true;
  for (const auto& name : b.lemmas) {
    const LemmaId id = lemma_from_string(name);
    const EstimateReport scan = theta_scan(id, b.params, b.T_list, b.ensemble);
    const fs::path p = dir / ("estimate_" + file_stem(id) + ".csv");
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    write_estimate_csv(out, scan);
    outcome.artifacts.push_back(p);
    const std::string key = "lemma_" + file_stem(id) + ".";
    summary.set(key + "max_ratio", scan.max_ratio);
    summary.set(key + "mean_ratio", scan.mean_ratio);
    summary.set(key + "theta_fit", scan.theta_fit);
    ok = ok && scan.theta_fit > b.theta_min;
    if (b.refinement) {
      const double T = b.T_list.back();
      double base = 0.0;
      for (std::size_t i = 0; i < scan.sample_count; ++i)
        if (scan.T[i] == T) base = std::max(base, scan.ratios[i]);
      const double fine = ensemble_ratios(id, b.params, b.ensemble.refined(), T).max_ratio;
      const double factor = base > 0 && fine > 0 ? std::max(base / fine, fine / base)
                                                 : std::numeric_limits<double>::infinity();
      summary.set(key + "refined_max_ratio", fine);
      summary.set(key + "refinement_factor", factor);
      ok = ok && factor < b.refinement_limit;
    }
  }
  summary.set("consistent", ok ? "true" : "false");
  outcome.artifacts.push_back(emit_report(summary, ReportFormat::summary_text, dir));
  if (!ok) {
    outcome.exit_code = exit_violation;
    outcome.message = "estimate ratios not consistent with the stated bounds";
  }
  return outcome;
}

}  // namespace

void Report::set(const std::string& key, const std::string& value) {
  for (auto& kv : summary)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  summary.emplace_back(key, value);
}

void Report::set(const std::string& key, double value) { set(key, format_double(value)); }

fs::path emit_report(const Report& report, ReportFormat format, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path p = dir / (report.name + (format == ReportFormat::csv ? ".csv" : ".txt"));
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report to " + p.string());
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < report.columns.size(); ++i)
      out << (i ? "," : "") << report.columns[i];
    out << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
      out << '\n';
    }
  } else {
    for (const auto& [k, v] : report.summary) out << k << '=' << v << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + p.string());
  return p;
}

std::vector<std::pair<std::string, std::string>> provenance(const RunConfig& c) {
  return {{"mzak_version", kVersion},
          {"config_hash", hex(config_hash(c))},
          {"seed", std::to_string(c.seed)},
          {"mode", std::string(to_string(c.mode))},
          {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
          {"fftw_version", fftw_version}};
}

double scale_to_energy(const Fieldd& phi0, const Fieldd& chi0, const Fieldd& chi1,
                       const Geometry& geometry, bool dealias, double target) {
  if (!(target > 0)) throw std::domain_error("target energy must be positive");
  auto energy = [&](double s) {
    return energy_tilde(make_state(s * phi0, s * chi0, s * chi1, geometry, dealias));
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; energy(hi) < target; ++i) {
    if (i == 200) throw std::domain_error("initial data cannot reach the target energy");
    lo = hi;
    hi *= 2;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (energy(mid) < target ? lo : hi) = mid;
  }
  return lo;
}

State initial_state(const RunConfig& c, std::optional<double> c0, std::size_t* start_step) {
  if (start_step) *start_step = 0;
  if (c.initial.recipe == Recipe::from_file) {
    Checkpoint cp = read_checkpoint(fs::path(c.initial.path));
    const auto& g = cp.state.grid();
    if (g.dimension() != c.grid.dimension || g.points_per_axis() != c.grid.points ||
        g.period() != c.grid.period)
      throw ConfigError("checkpoint grid does not match the grid section");
    if (!(cp.state.geometry == geometry_of(c)))
      throw ConfigError("checkpoint geometry does not match sim.e");
    if (start_step) *start_step = cp.step;
    return std::move(cp.state);
  }
  const RawData raw = raw_data(c);
  const Geometry geo = geometry_of(c);
  double s = 1.0;
  if (c.initial.energy_fraction > 0) {
    if (!c0) throw std::invalid_argument("energy_fraction scaling needs c0");
    s = scale_to_energy(raw.phi0, raw.chi0, raw.chi1, geo, c.sim.dealias,
                        c.initial.energy_fraction / (4 * *c0));
  }
  return make_state(s * raw.phi0, s * raw.chi0, s * raw.chi1, geo, c.sim.dealias);
}

fs::path write_error_record(const fs::path& dir, int exit_code, const std::string& kind,
                            const std::string& message) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path p = dir / "error.json";
  nlohmann::json j{{"exit_code", exit_code}, {"error", kind}, {"message", message}};
  std::ofstream out(p, std::ios::trunc);
  out << j.dump(2) << '\n';
  return p;
}

RunOutcome run(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  auto failure = [&](int code, const std::string& kind, const std::string& message) {
    RunOutcome o;
    o.exit_code = code;
    o.message = message;
    o.artifacts.push_back(write_error_record(dir, code, kind, message));
    return o;
  };
  try {
    validate(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
    switch (config.mode) {
      case RunMode::simulate:
        return run_simulate(config, false);
      case RunMode::invariants:
        return run_simulate(config, true);
      case RunMode::trap_check:
        return run_trap(config);
      case RunMode::convergence:
        return run_convergence(config);
      case RunMode::bourgain_check:
        return run_bourgain(config);
    }
    return failure(exit_other, "internal", "unknown mode");
  } catch (const ConfigError& e) {
    return failure(exit_config, "config", e.what());
  } catch (const InadmissibleParameters& e) {
    return failure(exit_config, "config", e.what());
  } catch (const BlowUpError& e) {
    std::ostringstream msg;
    msg << e.what() << " (t=" << e.time() << ", step=" << e.step_index() << ")";
    return failure(exit_blow_up, "blow_up", msg.str());
  } catch (const std::exception& e) {
    return failure(exit_other, "error", e.what());
  }
}

}  // namespace mzak
