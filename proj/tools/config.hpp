#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyrad::cli {

/// Schema violation in a config file; carries enough context for the
/// line/field diagnostic demanded by exit code 2.
struct ConfigError : std::runtime_error {
  ConfigError(int line, const std::string& field, const std::string& what)
      : std::runtime_error("config error at line " + std::to_string(line) +
                           (field.empty() ? "" : " (" + field + ")") + ": " +
                           what),
        line_number(line),
        field(field) {}
  int line_number;
  std::string field;
};

struct ScenarioSection {
  int n = 16;
  int l = 10;
  int p = 8;
  int i = 2;
  double rolloff = 0.22;
  double gamma_r_db = 25.0;
  double gamma_c_db = 25.0;
  double sigma2 = 1.0;
  int k = 0;
  double p_r = 1.0;
  std::vector<double> weights;  // empty = all ones
};

struct AlgorithmSection {
  std::string mode = "WS";  // MM | WS | SYNC | HYBRID_RX
  double epsilon = 0.01;
  int q = 200;
  int max_outer = 50;
  std::uint64_t seed = 42;
  bool seed_from_config = false;
};

struct DetectionSection {
  double p_f = 1e-4;
  long long trials_h0 = 1000000;
  long long trials_h1 = 100000;
  double snr_min_db = 0.0;
  double snr_max_db = 30.0;
  double snr_step_db = 2.5;
};

struct ExperimentConfig {
  ScenarioSection scenario;
  AlgorithmSection algorithm;
  DetectionSection detection;
  std::string kind;       // design | contour | ksweep | robustness | detect | convergence
  std::string out = "out";
};

/// Parses the flat-section key=value format. Unknown sections or keys and
/// malformed values raise ConfigError with the offending line.
ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base = {});
ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base = {});

}  // namespace hyrad::cli
