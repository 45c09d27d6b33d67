#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "mzak/dynamics/checkpoint.hpp"
#include "mzak/errors.hpp"
#include "mzak/harness/run.hpp"
#include "mzak/invariants/invariants.hpp"

using namespace mzak;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mzak_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

RunConfig small_simulation(const fs::path& dir) {
  RunConfig c = parse_config(R"({"schema_version": 1, "mode": "simulate",
      "grid": {"points": 16}, "sim": {"dt": 0.001, "t_end": 0.02, "checkpoint_stride": 5}})");
  c.output.dir = dir.string();
  return c;
}

}  // namespace

TEST(Config, MinimalGetsDefaults) {
  const RunConfig c = parse_config(R"({"schema_version": 1, "mode": "simulate"})");
  EXPECT_EQ(c, RunConfig{});
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.mode = RunMode::bourgain_check;
  c.seed = 123456789012345ULL;
  c.grid = {3, 16, 1.5};
  c.sim.e = Eigen::Vector3d(0.1, -0.2, 0.3);
  c.sim.integrator = Integrator::interaction_rk4;
  c.sim.dt = 0.3e-3;
  c.initial.recipe = Recipe::single_mode;
  c.initial.mode = {1, -2, 3};
  c.bourgain.lemmas = {"C'", "D"};
  c.bourgain.ensemble.dimension = 3;
  c.bourgain.ensemble.seed = c.seed;
  c.bourgain.T_list = {0.25, 0.5, 1.0};
  c.output.checkpoint_every = 10;
  const RunConfig r = parse_config(serialize_config(c));
  EXPECT_EQ(r, c);
  EXPECT_EQ(serialize_config(r), serialize_config(c));
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config(R"({"schema_version": 1, "mode": "simulate", "sim": {"dtt": 0.1}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sim.dtt"), std::string::npos);
  }
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config(R"({"mode": "simulate"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 2, "mode": "simulate"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "mode": "simulate", "sim": {"dt": "x"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "mode": "simulate", "sim": {"dt": 1e-3,}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "mode": "fly"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "mode": "simulate", "grid": {"points": 9}})"), ConfigError);
}

TEST(Config, InadmissiblePairRejected) {
  try {
    parse_config(R"({"schema_version": 1, "mode": "bourgain_check",
                     "bourgain": {"lemmas": ["C"], "k": 0, "l": -1}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("(k,l)=(0,-1)"), std::string::npos);
  }
}

TEST(Config, HashIgnoresOutput) {
  RunConfig a, b;
  b.output.dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Report, CsvShapes) {
  const fs::path dir = scratch("report");
  Report r;
  r.name = "table";
  r.columns = {"a", "b"};
  emit_report(r, ReportFormat::csv, dir);
  EXPECT_EQ(slurp(dir / "table.csv"), "a,b\n");
  r.rows.push_back({1.0, 0.1});
  emit_report(r, ReportFormat::csv, dir);
  const std::string once = slurp(dir / "table.csv");
  EXPECT_EQ(once, "a,b\n1,0.10000000000000001\n");
  emit_report(r, ReportFormat::csv, dir);
  EXPECT_EQ(slurp(dir / "table.csv"), once);
}

TEST(Report, UnwritableDirectory) {
  Report r;
  r.name = "x";
  EXPECT_THROW(emit_report(r, ReportFormat::csv, "/proc/mzak_no_such_dir"), std::runtime_error);
}

TEST(Run, ZeroDurationWritesInitialSnapshotOnly) {
  const fs::path dir = scratch("t0");
  RunConfig c = small_simulation(dir);
  c.sim.t_end = 0;
  const RunOutcome o = run(c);
  ASSERT_EQ(o.exit_code, 0) << o.message;
  EXPECT_EQ(lines(dir / "invariants.csv"), 2u);
  EXPECT_EQ(read_checkpoint(dir / "checkpoint_final.mzcp").step, 0u);
  const std::string summary = slurp(dir / "summary.txt");
  EXPECT_NE(summary.find("config_hash="), std::string::npos);
  EXPECT_NE(summary.find("seed=1"), std::string::npos);
  EXPECT_NE(summary.find("mzak_version="), std::string::npos);
}

TEST(Run, SameSeedSameBytes) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    RunConfig c = parse_config(R"({"schema_version": 1, "mode": "bourgain_check",
        "bourgain": {"lemmas": ["F"], "members": 5, "T": [0.25, 0.5, 1.0]}})");
    c.output.dir = dir.string();
    ASSERT_EQ(run(c).exit_code, 0);
    c.mode = RunMode::trap_check;
    c.sim.t_end = 0.02;
    c.grid.points = 16;
    c.initial.energy_fraction = 0.5;
    ASSERT_EQ(run(c).exit_code, 0);
  }
  for (const char* f : {"estimate_F.csv", "trap.csv", "invariants.csv", "summary.txt"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Run, ResumeMatchesUninterrupted) {
  const fs::path whole = scratch("whole"), part = scratch("part");
  RunConfig c = small_simulation(whole);
  c.output.checkpoint_every = 10;
  ASSERT_EQ(run(c).exit_code, 0);
  RunConfig r = small_simulation(part);
  r.initial.recipe = Recipe::from_file;
  r.initial.path = (whole / "checkpoint_00000010.mzcp").string();
  ASSERT_EQ(run(r).exit_code, 0);
  const Checkpoint x = read_checkpoint(whole / "checkpoint_final.mzcp");
  const Checkpoint y = read_checkpoint(part / "checkpoint_final.mzcp");
  EXPECT_EQ(x.step, y.step);
  EXPECT_EQ(x.state.t, y.state.t);
  EXPECT_TRUE((x.state.phi.values() == y.state.phi.values()).all());
  EXPECT_TRUE((x.state.chi_plus.values() == y.state.chi_plus.values()).all());
  EXPECT_TRUE((x.state.chi_minus.values() == y.state.chi_minus.values()).all());
}

TEST(Run, ErrorRecords) {
  const fs::path dir = scratch("err");
  RunConfig c = small_simulation(dir);
  c.initial.recipe = Recipe::from_file;
  c.initial.path = (dir / "missing.mzcp").string();
  const RunOutcome o = run(c);
  EXPECT_EQ(o.exit_code, exit_other);
  EXPECT_NE(slurp(dir / "error.json").find("\"exit_code\": 1"), std::string::npos);

  c.bourgain.params.k = 0;
  c.bourgain.params.l = -1;
  c.bourgain.lemmas = {"E"};
  EXPECT_EQ(run(c).exit_code, exit_config);
}

TEST(Run, ScaleToEnergy) {
  RunConfig c = small_simulation(scratch("scale"));
  c.initial.energy_fraction = 0.5;
  const double c0 = 0.02;
  const State s = initial_state(c, c0);
  EXPECT_NEAR(energy_tilde(s), 0.5 / (4 * c0), 1e-9);
}

TEST(Run, ConvergenceTable) {
  const fs::path dir = scratch("conv");
  RunConfig c = small_simulation(dir);
  c.mode = RunMode::convergence;
  c.initial.amplitude = 0.2;
  c.initial.chi_amplitude = 0.2;
  c.sim.dt = 0.004;
  c.sim.t_end = 0.08;
  c.sim.checkpoint_stride = 1;
  c.convergence.levels = 3;
  ASSERT_EQ(run(c).exit_code, 0);
  EXPECT_EQ(lines(dir / "convergence.csv"), 4u);
}
