#include "mzak/harness/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mzak/errors.hpp"

namespace mzak {

namespace {

using json = nlohmann::json;

struct ModeName {
  RunMode mode;
  const char* name;
};

constexpr ModeName kModes[] = {{RunMode::simulate, "simulate"},
                               {RunMode::invariants, "invariants"},
                               {RunMode::bourgain_check, "bourgain_check"},
                               {RunMode::convergence, "convergence"},
                               {RunMode::trap_check, "trap_check"}};

// Reads one JSON object, remembering which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + name() + "' must be an object");
  }

  void read(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) mismatch(key, "a number");
      out = v->get<double>();
    }
  }
  void read(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) mismatch(key, "an integer");
      out = v->get<int>();
    }
  }
  void read(const char* key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) mismatch(key, "a nonnegative integer");
      out = v->get<std::size_t>();
    }
  }
  void read_u64(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) mismatch(key, "a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) mismatch(key, "a boolean");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) mismatch(key, "a string");
      out = v->get<std::string>();
    }
  }
  template <typename T, std::size_t K>
  void read(const char* key, std::array<T, K>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != K) mismatch(key, "an array of " + std::to_string(K));
      for (std::size_t i = 0; i < K; ++i) {
        const json& x = (*v)[i];
        if (std::is_integral_v<T> ? !x.is_number_integer() : !x.is_number())
          mismatch(key, std::is_integral_v<T> ? "integers" : "numbers");
        out[i] = x.get<T>();
      }
    }
  }
  void read(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) mismatch(key, "an array of numbers");
      out.clear();
      for (const json& x : *v) {
        if (!x.is_number()) mismatch(key, "an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }
  void read(const char* key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) mismatch(key, "an array of strings");
      out.clear();
      for (const json& x : *v) {
        if (!x.is_string()) mismatch(key, "an array of strings");
        out.push_back(x.get<std::string>());
      }
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  void require(const char* key) const {
    if (!j_.contains(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
  }

  Section child(const char* key) {
    known_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, qualified(key));
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!known_.count(item.key()))
        throw ConfigError("unknown key '" + qualified(item.key().c_str()) + "'");
  }

 private:
  const json* find(const char* key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  [[noreturn]] void mismatch(const char* key, const std::string& expected) const {
    throw ConfigError("key '" + qualified(key) + "' must be " + expected);
  }
  std::string qualified(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }
  std::string name() const { return path_.empty() ? std::string("config") : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

template <typename Fn>
auto as_config_error(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = std::string(to_string(c.mode));
  j["seed"] = c.seed;
  j["grid"] = {{"dimension", c.grid.dimension}, {"points", c.grid.points}, {"period", c.grid.period}};
  j["sim"] = {{"dt", c.sim.dt},
              {"t_end", c.sim.t_end},
              {"integrator", std::string(to_string(c.sim.integrator))},
              {"dealias", c.sim.dealias},
              {"nonlinearity", c.sim.nonlinearity_enabled},
              {"e", {c.sim.e[0], c.sim.e[1], c.sim.e[2]}},
              {"checkpoint_stride", c.sim.checkpoint_stride}};
  const auto& d = c.initial;
  j["initial_data"] = {{"recipe", std::string(to_string(d.recipe))},
                       {"center", d.center},
                       {"width", d.width},
                       {"amplitude", d.amplitude},
                       {"mode", d.mode},
                       {"chi_center", d.chi_center},
                       {"chi_width", d.chi_width},
                       {"chi_amplitude", d.chi_amplitude},
                       {"chi_mode", d.chi_mode},
                       {"path", d.path},
                       {"energy_fraction", d.energy_fraction}};
  j["invariants"] = {{"I1_tolerance", c.invariants.I1_tolerance},
                     {"I2_tolerance", c.invariants.I2_tolerance}};
  j["trap"] = {{"c0_ensemble", c.trap.c0_ensemble}, {"safety_factor", c.trap.safety_factor}};
  const auto& b = c.bourgain;
  j["bourgain"] = {{"lemmas", b.lemmas},
                   {"k", b.params.k},
                   {"l", b.params.l},
                   {"epsilon", b.params.epsilon},
                   {"delta", b.params.delta},
                   {"plus", b.params.plus},
                   {"sign", b.params.sign},
                   {"derivative_axis", b.params.derivative_axis},
                   {"points", b.ensemble.points},
                   {"n_time", b.ensemble.n_time},
                   {"period", b.ensemble.period},
                   {"band", b.ensemble.band},
                   {"members", b.ensemble.members},
                   {"T", b.T_list},
                   {"refinement", b.refinement},
                   {"theta_min", b.theta_min},
                   {"refinement_limit", b.refinement_limit}};
  j["convergence"] = {{"levels", c.convergence.levels},
                      {"compare_reference", c.convergence.compare_reference}};
  j["output"] = {{"dir", c.output.dir}, {"checkpoint_every", c.output.checkpoint_every}};
  return j;
}

}  // namespace

std::string_view to_string(RunMode mode) {
  for (const auto& m : kModes)
    if (m.mode == mode) return m.name;
  return "?";
}

RunMode run_mode_from_string(std::string_view name) {
  for (const auto& m : kModes)
    if (name == m.name) return m.mode;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Recipe recipe) {
  switch (recipe) {
    case Recipe::gaussian_packet:
      return "gaussian_packet";
    case Recipe::single_mode:
      return "single_mode";
    case Recipe::from_file:
      return "from_file";
  }
  return "?";
}

Recipe recipe_from_string(std::string_view name) {
  if (name == "gaussian_packet") return Recipe::gaussian_packet;
  if (name == "single_mode") return Recipe::single_mode;
  if (name == "from_file") return Recipe::from_file;
  throw std::invalid_argument("unknown recipe '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig c;
  Section root(j, "");
  root.require("schema_version");
  root.require("mode");
  root.read("schema_version", c.schema_version);
  if (c.schema_version != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
  std::string mode;
  root.read("mode", mode);
  c.mode = as_config_error("mode", [&] { return run_mode_from_string(mode); });
  root.read_u64("seed", c.seed);

  Section grid = root.child("grid");
  grid.read("dimension", c.grid.dimension);
  grid.read("points", c.grid.points);
  grid.read("period", c.grid.period);
  grid.finish();

  Section sim = root.child("sim");
  sim.read("dt", c.sim.dt);
  sim.read("t_end", c.sim.t_end);
  std::string integrator(to_string(c.sim.integrator));
  sim.read("integrator", integrator);
  c.sim.integrator =
      as_config_error("sim.integrator", [&] { return integrator_from_string(integrator); });
  sim.read("dealias", c.sim.dealias);
  sim.read("nonlinearity", c.sim.nonlinearity_enabled);
  std::array<double, 3> e{c.sim.e[0], c.sim.e[1], c.sim.e[2]};
  sim.read("e", e);
  c.sim.e = Eigen::Vector3d(e[0], e[1], e[2]);
  sim.read("checkpoint_stride", c.sim.checkpoint_stride);
  sim.finish();

  Section init = root.child("initial_data");
  auto& d = c.initial;
  std::string recipe(to_string(d.recipe));
  init.read("recipe", recipe);
  d.recipe = as_config_error("initial_data.recipe", [&] { return recipe_from_string(recipe); });
  init.read("center", d.center);
  init.read("width", d.width);
  init.read("amplitude", d.amplitude);
  init.read("mode", d.mode);
  init.read("chi_center", d.chi_center);
  init.read("chi_width", d.chi_width);
  init.read("chi_amplitude", d.chi_amplitude);
  init.read("chi_mode", d.chi_mode);
  init.read("path", d.path);
  init.read("energy_fraction", d.energy_fraction);
  init.finish();

  Section inv = root.child("invariants");
  inv.read("I1_tolerance", c.invariants.I1_tolerance);
  inv.read("I2_tolerance", c.invariants.I2_tolerance);
  inv.finish();

  Section trap = root.child("trap");
  trap.read("c0_ensemble", c.trap.c0_ensemble);
  trap.read("safety_factor", c.trap.safety_factor);
  trap.finish();

  Section bg = root.child("bourgain");
  auto& b = c.bourgain;
  bg.read("lemmas", b.lemmas);
  bg.read("k", b.params.k);
  bg.read("l", b.params.l);
  bg.read("epsilon", b.params.epsilon);
  bg.read("delta", b.params.delta);
  bg.read("plus", b.params.plus);
  bg.read("sign", b.params.sign);
  bg.read("derivative_axis", b.params.derivative_axis);
  bg.read("points", b.ensemble.points);
  bg.read("n_time", b.ensemble.n_time);
  bg.read("period", b.ensemble.period);
  bg.read("band", b.ensemble.band);
  bg.read("members", b.ensemble.members);
  bg.read("T", b.T_list);
  bg.read("refinement", b.refinement);
  bg.read("theta_min", b.theta_min);
  bg.read("refinement_limit", b.refinement_limit);
  bg.finish();

  Section conv = root.child("convergence");
  conv.read("levels", c.convergence.levels);
  conv.read("compare_reference", c.convergence.compare_reference);
  conv.finish();

  Section out = root.child("output");
  out.read("dir", c.output.dir);
  out.read("checkpoint_every", c.output.checkpoint_every);
  out.finish();

  root.finish();
  c.bourgain.ensemble.seed = c.seed;
  if (!c.bourgain.lemmas.empty()) {
    const LemmaId first = as_config_error(
        "bourgain.lemmas", [&] { return lemma_from_string(c.bourgain.lemmas.front()); });
    c.bourgain.ensemble.dimension = lemma_dimension(first);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

void validate(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("key '" + key + "': " + why);
  };
  if (c.grid.dimension != 2 && c.grid.dimension != 3) fail("grid.dimension", "must be 2 or 3");
  if (c.grid.points < 8 || c.grid.points % 2 != 0) fail("grid.points", "must be even and >= 8");
  if (!(c.grid.period > 0) || !std::isfinite(c.grid.period)) fail("grid.period", "must be positive");
  as_config_error("sim", [&] {
    c.sim.validate();
    return 0;
  });

  const auto& d = c.initial;
  if (!(d.width > 0)) fail("initial_data.width", "must be positive");
  if (!(d.chi_width > 0)) fail("initial_data.chi_width", "must be positive");
  if (!(d.energy_fraction >= 0 && d.energy_fraction < 1))
    fail("initial_data.energy_fraction", "must lie in [0, 1)");
  if (d.recipe == Recipe::from_file && d.path.empty())
    fail("initial_data.path", "from_file needs a checkpoint path");
  if (c.grid.dimension == 2 && (d.mode[2] != 0 || d.chi_mode[2] != 0))
    fail("initial_data.mode", "third mode component must be 0 in 2D");

  if (!(c.invariants.I1_tolerance > 0) || !(c.invariants.I2_tolerance > 0))
    fail("invariants", "tolerances must be positive");
  if (c.trap.c0_ensemble < 100) fail("trap.c0_ensemble", "must be >= 100");
  if (!(c.trap.safety_factor >= 1)) fail("trap.safety_factor", "must be >= 1");

  const auto& b = c.bourgain;
  if (b.lemmas.empty()) fail("bourgain.lemmas", "must name at least one lemma");
  for (const auto& name : b.lemmas) {
    const LemmaId id = as_config_error("bourgain.lemmas", [&] { return lemma_from_string(name); });
    if (lemma_dimension(id) != b.ensemble.dimension)
      fail("bourgain.lemmas", "all lemmas must share one dimension");
    try {
      check_admissible(id, b.params);
    } catch (const InadmissibleParameters& e) {
      fail("bourgain", e.what());
    }
  }
  if (b.params.derivative_axis < 0 || b.params.derivative_axis >= b.ensemble.dimension)
    fail("bourgain.derivative_axis", "out of range");
  if (b.ensemble.points < 8 || b.ensemble.points % 2 != 0)
    fail("bourgain.points", "must be even and >= 8");
  if (b.ensemble.n_time < 16 || b.ensemble.n_time % 2 != 0)
    fail("bourgain.n_time", "must be even and >= 16");
  if (b.ensemble.band < 1 || 4 * b.ensemble.band > b.ensemble.points)
    fail("bourgain.band", "must lie in [1, points/4]");
  if (b.ensemble.members == 0) fail("bourgain.members", "ensemble is empty");
  if (b.T_list.size() < 3) fail("bourgain.T", "needs at least 3 values");
  for (std::size_t i = 0; i < b.T_list.size(); ++i) {
    if (!(b.T_list[i] > 0 && b.T_list[i] <= 1)) fail("bourgain.T", "values must lie in (0, 1]");
    if (i > 0 && !(b.T_list[i] > b.T_list[i - 1])) fail("bourgain.T", "values must increase");
  }
  if (!(b.refinement_limit > 1)) fail("bourgain.refinement_limit", "must exceed 1");
  if (c.convergence.levels < 2) fail("convergence.levels", "must be >= 2");
  if (c.output.dir.empty()) fail("output.dir", "must not be empty");
  if (c.output.checkpoint_every % c.sim.checkpoint_stride != 0)
    fail("output.checkpoint_every", "must be a multiple of sim.checkpoint_stride");
}

std::uint64_t config_hash(const RunConfig& config) {
  json j = to_json(config);
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mzak
