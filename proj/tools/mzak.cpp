#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mzak/errors.hpp"
#include "mzak/harness/run.hpp"
#include "mzak/util/allocator.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> lemmas;
  std::optional<double> k, l, epsilon, delta;
  std::optional<int> sign;
};

int execute(mzak::RunMode mode, const Options& opt) {
  using namespace mzak;
  std::string out_dir;
  if (opt.out) {
    out_dir = *opt.out;
  } else if (const char* env = std::getenv("MZAK_OUT"); env && *env) {
    out_dir = env;
  }
  RunConfig config;
  try {
    config = load_config(opt.config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    write_error_record(out_dir.empty() ? "." : out_dir, exit_config, "config", e.what());
    return exit_config;
  }
  // the subcommand decides the mode
  config.mode = mode;
  if (opt.seed) {
    config.seed = *opt.seed;
    config.bourgain.ensemble.seed = *opt.seed;
  }
  if (!out_dir.empty()) config.output.dir = out_dir;
  auto& b = config.bourgain;
  if (!opt.lemmas.empty()) b.lemmas = opt.lemmas;
  if (opt.k) b.params.k = *opt.k;
  if (opt.l) b.params.l = *opt.l;
  if (opt.epsilon) b.params.epsilon = *opt.epsilon;
  if (opt.delta) b.params.delta = *opt.delta;
  if (opt.sign) b.params.sign = *opt.sign;

  const RunOutcome outcome = run(config);
  if (outcome.exit_code != exit_ok) std::cerr << "mzak: " << outcome.message << '\n';
  for (const auto& p : outcome.artifacts) std::cout << p.string() << '\n';
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  mzak::tune_allocator();
  CLI::App app{"Pseudospectral modified Zakharov simulator and estimate checks"};
  app.set_version_flag("--version", std::string(mzak::kVersion));
  app.require_subcommand(1);

  Options opt;
  std::optional<mzak::RunMode> chosen;
  const std::pair<const char*, mzak::RunMode> commands[] = {
      {"simulate", mzak::RunMode::simulate},
      {"invariants", mzak::RunMode::invariants},
      {"bourgain-check", mzak::RunMode::bourgain_check},
      {"convergence", mzak::RunMode::convergence},
      {"trap-check", mzak::RunMode::trap_check},
  };
  for (const auto& [name, mode] : commands) {
    CLI::App* sub = app.add_subcommand(name, std::string("run in ") + name + " mode");
    sub->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "seed for every randomized ensemble");
    sub->add_option("--out", opt.out, "output directory (overrides MZAK_OUT)");
    if (mode == mzak::RunMode::bourgain_check) {
      sub->add_option("--lemma", opt.lemmas, "lemma to check, repeatable (C', C'', D, E', E'', F, F~, ...)");
      sub->add_option("--k", opt.k, "spatial exponent k");
      sub->add_option("--l", opt.l, "wave exponent l");
      sub->add_option("--epsilon", opt.epsilon, "epsilon of the E and F families");
      sub->add_option("--delta", opt.delta, "delta of the E and F families");
      sub->add_option("--sign", opt.sign, "wave dispersion sign")->check(CLI::IsMember({-1, 1}));
    }
    sub->callback([&chosen, m = mode] { chosen = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mzak::exit_config;
  }
  return execute(*chosen, opt);
}
