#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hyrad::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(int line, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected a number, got '" + v + "'");
  }
}

long long parse_int(int line, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(int line, const std::string& key,
                               const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(line, key, trim(item)));
  }
  if (out.empty()) throw ConfigError(line, key, "empty list");
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line_no, "", "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "algorithm" &&
          section != "detection" && section != "experiment") {
        throw ConfigError(line_no, section, "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_no, "", "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(line_no, key, "key outside any section");
    }

    if (section == "scenario") {
      auto& s = cfg.scenario;
      if (key == "n") {
        s.n = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "l") {
        s.l = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "p") {
        s.p = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "i") {
        s.i = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "rolloff") {
        s.rolloff = parse_double(line_no, key, value);
      } else if (key == "gamma_r_db") {
        s.gamma_r_db = parse_double(line_no, key, value);
      } else if (key == "gamma_c_db") {
        s.gamma_c_db = parse_double(line_no, key, value);
      } else if (key == "sigma2") {
        s.sigma2 = parse_double(line_no, key, value);
      } else if (key == "k") {
        s.k = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "p_r") {
        s.p_r = parse_double(line_no, key, value);
      } else if (key == "weights") {
        s.weights = parse_list(line_no, key, value);
      } else {
        throw ConfigError(line_no, key, "unknown key in [scenario]");
      }
    } else if (section == "algorithm") {
      auto& a = cfg.algorithm;
      if (key == "mode") {
        if (value != "MM" && value != "WS" && value != "SYNC" &&
            value != "HYBRID_RX") {
          throw ConfigError(line_no, key,
                            "mode must be MM, WS, SYNC, or HYBRID_RX");
        }
        a.mode = value;
      } else if (key == "epsilon") {
        a.epsilon = parse_double(line_no, key, value);
      } else if (key == "q") {
        a.q = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "max_outer") {
        a.max_outer = static_cast<int>(parse_int(line_no, key, value));
      } else if (key == "seed") {
        a.seed = static_cast<std::uint64_t>(parse_int(line_no, key, value));
        a.seed_from_config = true;
      } else {
        throw ConfigError(line_no, key, "unknown key in [algorithm]");
      }
    } else if (section == "detection") {
      auto& d = cfg.detection;
      if (key == "p_f") {
        d.p_f = parse_double(line_no, key, value);
      } else if (key == "trials_h0") {
        d.trials_h0 = parse_int(line_no, key, value);
      } else if (key == "trials_h1") {
        d.trials_h1 = parse_int(line_no, key, value);
      } else if (key == "snr_min_db") {
        d.snr_min_db = parse_double(line_no, key, value);
      } else if (key == "snr_max_db") {
        d.snr_max_db = parse_double(line_no, key, value);
      } else if (key == "snr_step_db") {
        d.snr_step_db = parse_double(line_no, key, value);
      } else {
        throw ConfigError(line_no, key, "unknown key in [detection]");
      }
    } else {  // experiment
      if (key == "kind") {
        cfg.kind = value;
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw ConfigError(line_no, key, "unknown key in [experiment]");
      }
    }
  }

  // semantic schema checks
  const auto& s = cfg.scenario;
  if (s.n < 1 || s.l < 1 || s.p < 1 || s.i < 1) {
    throw ConfigError(0, "scenario", "n, l, p, i must be positive");
  }
  if (s.rolloff < 0.0 || s.rolloff > 1.0) {
    throw ConfigError(0, "rolloff", "must be in [0, 1]");
  }
  if (!(s.sigma2 > 0.0)) throw ConfigError(0, "sigma2", "must be positive");
  if (s.k < 0) throw ConfigError(0, "k", "must be nonnegative");
  if (!(s.p_r > 0.0)) throw ConfigError(0, "p_r", "must be positive");
  if (!s.weights.empty() &&
      s.weights.size() != static_cast<std::size_t>(2 * s.k + 1)) {
    throw ConfigError(0, "weights", "length must be 2k+1");
  }
  if (!(cfg.algorithm.epsilon > 0.0)) {
    throw ConfigError(0, "epsilon", "must be positive");
  }
  if (cfg.algorithm.q < 1) throw ConfigError(0, "q", "must be >= 1");
  if (cfg.algorithm.max_outer < 1) {
    throw ConfigError(0, "max_outer", "must be >= 1");
  }
  if (!(cfg.detection.p_f > 0.0 && cfg.detection.p_f < 1.0)) {
    throw ConfigError(0, "p_f", "must be in (0, 1)");
  }
  if (cfg.detection.trials_h0 < 1 || cfg.detection.trials_h1 < 1) {
    throw ConfigError(0, "detection", "trial counts must be positive");
  }
  if (!(cfg.detection.snr_step_db > 0.0)) {
    throw ConfigError(0, "snr_step_db", "must be positive");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), base);
}

}  // namespace hyrad::cli
