#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mzak/bourgain/estimates.hpp"
#include "mzak/dynamics/state.hpp"

namespace mzak {

inline constexpr int kConfigSchemaVersion = 1;

enum class RunMode { simulate, invariants, bourgain_check, convergence, trap_check };

std::string_view to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view name);

struct GridConfig {
  int dimension = 2;
  int points = 64;
  double period = 6.283185307179586;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

enum class Recipe { gaussian_packet, single_mode, from_file };

std::string_view to_string(Recipe recipe);
Recipe recipe_from_string(std::string_view name);

/// Initial data. Lengths are in units of the period L, wave vectors in integer modes.
///   gaussian_packet: phi = amplitude exp(-|x - center|^2 / (2 width^2)) e^{i xi_c . x},
///                    chi0 = chi_amplitude exp(-|x - chi_center|^2 / (2 chi_width^2)),
///                    chi1 = 0; distances are periodic.
///   single_mode:     phi = amplitude e^{i xi_0 . x}, chi0 = chi_amplitude cos(xi_chi . x).
///   from_file:       a checkpoint; the run continues from its time and step.
/// With energy_fraction > 0 the data (phi, chi0) is rescaled by a common factor so that
/// the trap energy equals energy_fraction / (4 c0).
struct InitialData {
  Recipe recipe = Recipe::gaussian_packet;
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double width = 0.1;
  double amplitude = 1.0;
  std::array<int, 3> mode{2, 1, 0};
  std::array<double, 3> chi_center{0.45, 0.45, 0.45};
  double chi_width = 0.13;
  double chi_amplitude = 1.0;
  std::array<int, 3> chi_mode{1, 0, 0};
  std::string path;
  double energy_fraction = 0.0;

  friend bool operator==(const InitialData&, const InitialData&) = default;
};

struct InvariantsConfig {
  double I1_tolerance = 1e-6;
  double I2_tolerance = 1e-4;

  friend bool operator==(const InvariantsConfig&, const InvariantsConfig&) = default;
};

struct TrapConfig {
  std::size_t c0_ensemble = 100;
  double safety_factor = 2.0;

  friend bool operator==(const TrapConfig&, const TrapConfig&) = default;
};

struct BourgainConfig {
  std::vector<std::string> lemmas{"E'"};
  LemmaParams params;
  EnsembleSpec ensemble;
  std::vector<double> T_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  bool refinement = true;
  double theta_min = -0.05;
  double refinement_limit = 2.0;

  friend bool operator==(const BourgainConfig&, const BourgainConfig&) = default;
};

struct ConvergenceConfig {
  int levels = 3;
  bool compare_reference = false;

  friend bool operator==(const ConvergenceConfig&, const ConvergenceConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  /// Checkpoint every this many steps; 0 writes only the final state.
  std::size_t checkpoint_every = 0;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  RunMode mode = RunMode::simulate;
  std::uint64_t seed = 1;
  GridConfig grid;
  SimConfig sim;
  InitialData initial;
  InvariantsConfig invariants;
  TrapConfig trap;
  BourgainConfig bourgain;
  ConvergenceConfig convergence;
  OutputConfig output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the JSON config. `schema_version` and `mode` are required; other keys take
/// the defaults above. Throws ConfigError naming the offending key for unknown keys,
/// type mismatches, malformed text, invalid values and inadmissible lemma parameters.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Complete JSON document with every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Checks cross-field consistency; throws ConfigError.
void validate(const RunConfig& config);

/// FNV-1a over the serialized config with the output section removed.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace mzak
