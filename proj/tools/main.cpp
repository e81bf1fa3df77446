#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "config.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hyrad - joint waveform/receiver design experiments for "
               "co-channel hybrid active-passive radar"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::string out;
    std::int64_t seed = -1;
    bool seed_set = false;
  };

  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"design", "run one design and emit the point, profile and trace"},
      {"convergence", "emit MM and WS convergence traces"},
      {"contour", "output-SINR grid over the channel SNR plane (K = 0)"},
      {"ksweep", "output SINR versus the timing uncertainty bound"},
      {"robustness", "designs at K in {0,3} evaluated over true delays"},
      {"detect", "Monte Carlo missing-probability curves"}};

  std::map<std::string, Flags> flags;
  for (const auto& [name, desc] : kinds) {
    CLI::App* sub = app.add_subcommand(name, desc);
    Flags& f = flags[name];
    sub->add_option("--config", f.config, "config file (key = value sections)");
    sub->add_option("--out", f.out, "output directory (default: out)");
    sub->add_option("--seed", f.seed, "seed override")
        ->each([&f](const std::string&) { f.seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);

  const std::string kind = app.get_subcommands().front()->get_name();
  const Flags& f = flags[kind];

  hyrad::cli::ExperimentConfig cfg;
  try {
    if (!f.config.empty()) {
      cfg = hyrad::cli::parse_config_file(f.config);
    }
    cfg.kind = kind;
    if (!f.out.empty()) cfg.out = f.out;
    // seed precedence: flag > config > default 42
    if (f.seed_set) cfg.algorithm.seed = static_cast<std::uint64_t>(f.seed);
  } catch (const hyrad::cli::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    return hyrad::cli::run_experiment(cfg);
  } catch (const hyrad::cli::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
