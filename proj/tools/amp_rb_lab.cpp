#include <algorithm>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "amprb/config.hpp"
#include "amprb/harness.hpp"

namespace {

constexpr int kValidationError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned rigid-body FSI model problems: exact solutions, runs, convergence and stability studies"};
  app.require_subcommand(1, 1);

  std::string configPath, outDir;
  int threads = -1;
  long long seed = -1;
  const std::pair<const char*, const char*> commands[] = {
      {"exact", "sample an exact solution over time and space"},
      {"simulate", "run one grid and compare against the exact solution"},
      {"converge", "errors and fitted rates over a grid sequence"},
      {"probe", "time-domain stability probe, optionally bisecting a threshold"},
      {"sweep", "theory and probe verdicts over a parameter lattice"},
      {"boundary", "trace stability boundaries of the amplification-factor constraint"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", configPath, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outDir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::Range(0, 1024));
    sub->add_option("--seed", seed, "seed for probe perturbations")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    amprb::ExperimentConfig config = amprb::load_config(configPath);
    const amprb::ExperimentKind kind = amprb::experiment_kind_from_string(command);
    if (config.experiment != kind && std::find(config.defaults_used.begin(), config.defaults_used.end(),
                                               "experiment") == config.defaults_used.end())
      throw amprb::ConfigError("config.experiment: \"" + amprb::to_string(config.experiment) +
                               "\" does not match the command \"" + command + "\"");
    config.experiment = kind;
    // Re-validate the command-specific constraints.
    const auto defaults = config.defaults_used;
    config = amprb::parse_config(amprb::dump_config(config));
    config.defaults_used = defaults;
    if (!outDir.empty()) config.out_dir = outDir;
    if (threads >= 0) config.threads = threads;
    if (seed >= 0) {
      config.seed = static_cast<std::uint64_t>(seed);
      config.probe.settings.seed = config.seed;
    }
    for (const auto& f : amprb::run_experiment(config).files) std::cout << f << "\n";
    return 0;
  } catch (const amprb::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kValidationError;
  } catch (const amprb::DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
