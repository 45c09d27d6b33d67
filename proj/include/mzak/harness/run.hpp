#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mzak/dynamics/state.hpp"
#include "mzak/harness/config.hpp"
#include "mzak/invariants/invariants.hpp"

namespace mzak {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  exit_ok = 0,
  exit_other = 1,
  exit_config = 2,
  exit_blow_up = 3,
  exit_violation = 4,
};

/// Tabular result plus key-value summary. Numbers are written with %.17g.
struct Report {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> summary;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
};

enum class ReportFormat { csv, summary_text };

/// Writes <dir>/<name>.csv (header line even with no rows) or <dir>/<name>.txt
/// (one key=value per line). Throws std::runtime_error on an unwritable directory.
std::filesystem::path emit_report(const Report& report, ReportFormat format,
                                  const std::filesystem::path& dir);

/// Header lines shared by every summary: version, config hash, seed, mode, libraries.
std::vector<std::pair<std::string, std::string>> provenance(const RunConfig& config);

/// Builds the t = 0 state from the recipe; from_file returns the checkpoint state and
/// sets *start_step. Scaling to energy_fraction uses c0 when given.
State initial_state(const RunConfig& config, std::optional<double> c0 = std::nullopt,
                    std::size_t* start_step = nullptr);

/// Bisection on the common amplitude s of (s phi0, s chi0, s chi1) so that the trap
/// energy equals target. Throws std::domain_error if target is not reached.
double scale_to_energy(const Fieldd& phi0, const Fieldd& chi0, const Fieldd& chi1,
                       const Geometry& geometry, bool dealias, double target);

struct RunOutcome {
  int exit_code = exit_ok;
  std::string message;
  std::vector<std::filesystem::path> artifacts;
};

/// Mode-dispatched execution writing into config.output.dir. Module failures are
/// turned into a nonzero exit code and an error.json record rather than exceptions.
RunOutcome run(const RunConfig& config);

/// Machine-readable failure record {"exit_code", "error", "message"} in dir/error.json.
std::filesystem::path write_error_record(const std::filesystem::path& dir, int exit_code,
                                         const std::string& kind, const std::string& message);

}  // namespace mzak
