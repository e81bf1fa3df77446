#pragma once

#include <string>
#include <utility>

#include "config.hpp"
#include "hyrad/design_common.hpp"
#include "hyrad/signal_model.hpp"

namespace hyrad::cli {

/// Scenario + waveform model from a parsed config (dB values to linear).
std::pair<Scenario, CommWaveformModel> instantiate(const ScenarioSection& s);

DesignConfig design_config(const AlgorithmSection& a);

/// Runs one experiment, writing the metadata record and CSV tables into
/// cfg.out. Returns 0 on success; throws ConfigError for schema problems
/// (exit 2) and std::runtime_error for numerical failures (exit 3).
int run_experiment(const ExperimentConfig& cfg);

}  // namespace hyrad::cli
