#include "experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "csv.hpp"
#include "hyrad/design_mm.hpp"
#include "hyrad/design_sync.hpp"
#include "hyrad/design_ws.hpp"
#include "hyrad/detection.hpp"
#include "hyrad/rng.hpp"

namespace fs = std::filesystem;

namespace hyrad::cli {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

class Metadata {
 public:
  void set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, const char* value) {
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double v) { set(key, format_double(v)); }
  void set(const std::string& key, long long v) { set(key, std::to_string(v)); }
  void set(const std::string& key, int v) { set(key, std::to_string(v)); }
  void set(const std::string& key, bool v) { set(key, v ? "true" : "false"); }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

Metadata base_metadata(const ExperimentConfig& cfg) {
  Metadata md;
  md.set("version", "0.1.0");
  md.set("experiment", cfg.kind);
  md.set("scenario.n", cfg.scenario.n);
  md.set("scenario.l", cfg.scenario.l);
  md.set("scenario.p", cfg.scenario.p);
  md.set("scenario.i", cfg.scenario.i);
  md.set("scenario.rolloff", cfg.scenario.rolloff);
  md.set("scenario.gamma_r_db", cfg.scenario.gamma_r_db);
  md.set("scenario.gamma_c_db", cfg.scenario.gamma_c_db);
  md.set("scenario.sigma2", cfg.scenario.sigma2);
  md.set("scenario.k", cfg.scenario.k);
  md.set("scenario.p_r", cfg.scenario.p_r);
  if (cfg.scenario.weights.empty()) {
    md.set("scenario.weights", "ones");
  } else {
    std::string w;
    for (std::size_t i = 0; i < cfg.scenario.weights.size(); ++i) {
      if (i) w += ',';
      w += format_double(cfg.scenario.weights[i]);
    }
    md.set("scenario.weights", w);
  }
  md.set("algorithm.mode", cfg.algorithm.mode);
  md.set("algorithm.epsilon", cfg.algorithm.epsilon);
  md.set("algorithm.q", cfg.algorithm.q);
  md.set("algorithm.max_outer", cfg.algorithm.max_outer);
  md.set("algorithm.seed", static_cast<long long>(cfg.algorithm.seed));
  // model conventions surfaced for reproducibility
  md.set("h_matrix_normalization", "raw_taps");
  md.set("filter_trace_budget", 1.0);
  return md;
}

void write_convergence_csv(const fs::path& path, const DesignReport& report) {
  CsvWriter csv(path.string(),
                {"outer_iter", "objective_linear", "objective_db"});
  for (std::size_t i = 0; i < report.objective_trace.size(); ++i) {
    const double lin = report.objective_trace[i];
    csv.row({cell(static_cast<int>(i + 1)), cell(lin), cell(linear_to_db(lin))});
  }
}

void write_design_point_csv(const fs::path& path, const DesignPoint& dp) {
  CsvWriter csv(path.string(), {"component", "index", "re", "im"});
  const auto dump = [&](const std::string& name, const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      csv.row({name, cell(static_cast<int>(i)), cell(v[i].real()),
               cell(v[i].imag())});
    }
  };
  dump("s_r", dp.s_r);
  dump("w_r", dp.w_r);
  dump("w_c", dp.w_c);
}

void write_profile_csv(const fs::path& path, const DesignReport& report,
                       int k_bound) {
  CsvWriter csv(path.string(), {"k", "sinr_linear", "sinr_db"});
  for (int k = -k_bound; k <= k_bound; ++k) {
    const double lin =
        report.sinr_profile[static_cast<std::size_t>(k + k_bound)];
    csv.row({cell(k), cell(lin), cell(linear_to_db(lin))});
  }
}

Vec random_binary_waveform(const Scenario& sc, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xB1AA));
  return (std::sqrt(sc.power_budget / sc.n) * rng.rademacher(sc.n))
      .cast<cdouble>();
}

double weight_total(const Scenario& sc) {
  double wsum = 0.0;
  for (int k = -sc.k_bound; k <= sc.k_bound; ++k) wsum += sc.weight(k);
  return wsum;
}

/// Comparable per-design "output SINR": the worst case for max-min designs,
/// the weighted mean for weighted-sum designs.
double normalized_objective(const DesignReport& report, const Scenario& sc,
                            bool weighted) {
  return weighted ? report.objective / weight_total(sc) : report.objective;
}

int run_design(const ExperimentConfig& cfg) {
  auto [sc, model] = instantiate(cfg.scenario);
  const DesignConfig dcfg = design_config(cfg.algorithm);
  const DesignPoint init = make_initial_point(sc, model, dcfg.seed);

  DesignReport report;
  bool weighted = false;
  if (cfg.algorithm.mode == "MM") {
    report = mm_design(sc, model, init, dcfg);
  } else if (cfg.algorithm.mode == "WS") {
    report = ws_design(sc, model, init, dcfg);
    weighted = true;
  } else if (cfg.algorithm.mode == "SYNC") {
    if (sc.k_bound != 0) throw ConfigError(0, "mode", "SYNC requires k = 0");
    report = sync_design(sc, model, init, dcfg);
  } else {  // HYBRID_RX: receiver-only run on the weighted-sum machinery
    report = hybrid_rx_design(sc, model, random_binary_waveform(sc, dcfg.seed),
                              dcfg, DesignMode::WeightedSum);
    weighted = true;
  }

  const fs::path out(cfg.out);
  write_design_point_csv(out / "design_point.csv", report.point);
  write_profile_csv(out / "sinr_profile.csv", report, sc.k_bound);
  write_convergence_csv(out / "convergence.csv", report);

  Metadata md = base_metadata(cfg);
  md.set("converged.design", report.converged);
  md.set("outer_iterations", report.outer_iterations);
  md.set("objective_linear", report.objective);
  md.set("objective_db", linear_to_db(report.objective));
  md.set("objective_normalized_db",
         linear_to_db(normalized_objective(report, sc, weighted)));
  md.write(out / "run_metadata.txt");
  return 0;
}

int run_convergence(const ExperimentConfig& cfg) {
  auto [sc, model] = instantiate(cfg.scenario);
  const DesignConfig dcfg = design_config(cfg.algorithm);
  const DesignPoint init = make_initial_point(sc, model, dcfg.seed);

  const DesignReport mm = mm_design(sc, model, init, dcfg);
  const DesignReport ws = ws_design(sc, model, init, dcfg);

  const fs::path out(cfg.out);
  write_convergence_csv(out / "convergence_mm.csv", mm);
  write_convergence_csv(out / "convergence_ws.csv", ws);

  Metadata md = base_metadata(cfg);
  md.set("converged.mm", mm.converged);
  md.set("converged.ws", ws.converged);
  md.set("outer_iterations.mm", mm.outer_iterations);
  md.set("outer_iterations.ws", ws.outer_iterations);
  md.write(out / "run_metadata.txt");
  return 0;
}

int run_contour(const ExperimentConfig& cfg) {
  ScenarioSection base = cfg.scenario;
  base.k = 0;
  base.weights.clear();
  const DesignConfig dcfg = design_config(cfg.algorithm);

  std::vector<double> grid;
  for (double db = 0.0; db <= 40.0 + 1e-9; db += 2.5) grid.push_back(db);
  const int g = static_cast<int>(grid.size());

  struct PointResult {
    double txrx = 0, rx = 0, active = 0, passive = 0;
    bool converged = false;
  };
  std::vector<PointResult> results(static_cast<std::size_t>(g) * g);

  const auto worker = [&](int row_begin, int row_end) {
    for (int ir = row_begin; ir < row_end; ++ir) {
      for (int ic = 0; ic < g; ++ic) {
        ScenarioSection ss = base;
        ss.gamma_r_db = grid[static_cast<std::size_t>(ir)];
        ss.gamma_c_db = grid[static_cast<std::size_t>(ic)];
        auto [sc, model] = instantiate(ss);
        DesignConfig local = dcfg;
        local.seed =
            derive_seed(dcfg.seed, static_cast<std::uint64_t>(ir * g + ic));
        const DesignPoint init = make_initial_point(sc, model, local.seed);
        const DesignReport txrx = sync_design(sc, model, init, local);
        const DesignReport rx =
            hybrid_rx_design(sc, model, random_binary_waveform(sc, local.seed),
                             local, DesignMode::WeightedSum);
        PointResult& r = results[static_cast<std::size_t>(ir) * g + ic];
        r.txrx = txrx.objective;
        r.rx = rx.objective;
        r.active = baseline_sinr(BaselineKind::ActiveOnly, sc, model);
        r.passive = baseline_sinr(BaselineKind::PassiveOnly, sc, model);
        r.converged = txrx.converged && rx.converged;
      }
    }
  };

  int threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, g));
  std::vector<std::thread> pool;
  const int rows_per = (g + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * rows_per;
    const int end = std::min(g, begin + rows_per);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();

  const fs::path out(cfg.out);
  CsvWriter csv((out / "contour.csv").string(),
                {"gamma_r_db", "gamma_c_db", "config", "sinr_db"});
  bool all_converged = true;
  for (int ir = 0; ir < g; ++ir) {
    for (int ic = 0; ic < g; ++ic) {
      const PointResult& r = results[static_cast<std::size_t>(ir) * g + ic];
      all_converged = all_converged && r.converged;
      const std::string gr = cell(grid[static_cast<std::size_t>(ir)]);
      const std::string gc = cell(grid[static_cast<std::size_t>(ic)]);
      csv.row({gr, gc, "hybrid_txrx", cell(linear_to_db(r.txrx))});
      csv.row({gr, gc, "hybrid_rx", cell(linear_to_db(r.rx))});
      csv.row({gr, gc, "active_only", cell(linear_to_db(r.active))});
      csv.row({gr, gc, "passive_only", cell(linear_to_db(r.passive))});
    }
  }

  Metadata md = base_metadata(cfg);
  md.set("converged.all", all_converged);
  md.write(out / "run_metadata.txt");
  return 0;
}

int run_ksweep(const ExperimentConfig& cfg) {
  const DesignConfig dcfg = design_config(cfg.algorithm);
  const fs::path out(cfg.out);
  CsvWriter csv((out / "ksweep.csv").string(), {"K", "mode", "sinr_db"});
  Metadata md = base_metadata(cfg);

  for (int K = 0; K <= 6; ++K) {
    ScenarioSection ss = cfg.scenario;
    ss.k = K;
    ss.weights.clear();
    auto [sc, model] = instantiate(ss);
    const DesignPoint init = make_initial_point(sc, model, dcfg.seed);
    const Vec fixed = random_binary_waveform(sc, dcfg.seed);

    const DesignReport mm = mm_design(sc, model, init, dcfg);
    const DesignReport ws = ws_design(sc, model, init, dcfg);
    const DesignReport rx_mm =
        hybrid_rx_design(sc, model, fixed, dcfg, DesignMode::MaxMin);
    const DesignReport rx_ws =
        hybrid_rx_design(sc, model, fixed, dcfg, DesignMode::WeightedSum);

    csv.row({cell(K), "MM", cell(linear_to_db(mm.objective))});
    csv.row({cell(K), "WS",
             cell(linear_to_db(normalized_objective(ws, sc, true)))});
    csv.row({cell(K), "RX_MM", cell(linear_to_db(rx_mm.objective))});
    csv.row({cell(K), "RX_WS",
             cell(linear_to_db(normalized_objective(rx_ws, sc, true)))});
    md.set("converged.K" + std::to_string(K),
           mm.converged && ws.converged && rx_mm.converged && rx_ws.converged);
  }
  md.write(out / "run_metadata.txt");
  return 0;
}

int run_robustness(const ExperimentConfig& cfg) {
  const DesignConfig dcfg = design_config(cfg.algorithm);
  const fs::path out(cfg.out);
  CsvWriter csv((out / "robustness.csv").string(),
                {"design_K", "mode", "k", "sinr_db"});
  Metadata md = base_metadata(cfg);

  for (int design_k : {0, 3}) {
    ScenarioSection ss = cfg.scenario;
    ss.k = design_k;
    ss.weights.clear();
    auto [sc, model] = instantiate(ss);
    const DesignPoint init = make_initial_point(sc, model, dcfg.seed);
    for (const std::string mode : {"MM", "WS"}) {
      const DesignReport report = mode == "MM" ? mm_design(sc, model, init, dcfg)
                                               : ws_design(sc, model, init, dcfg);
      for (int k = -6; k <= 6; ++k) {
        const double lin = sinr_k(sc, report.point, model, k);
        csv.row({cell(design_k), mode, cell(k), cell(linear_to_db(lin))});
      }
      md.set("converged.K" + std::to_string(design_k) + "." + mode,
             report.converged);
    }
  }
  md.write(out / "run_metadata.txt");
  return 0;
}

int run_detect(const ExperimentConfig& cfg) {
  const DesignConfig dcfg = design_config(cfg.algorithm);
  const fs::path out(cfg.out);
  Metadata md = base_metadata(cfg);

  // designs at the (fixed, hypothetical) configured channel SNR
  ScenarioSection ss0 = cfg.scenario;
  ss0.k = 0;
  ss0.weights.clear();
  auto [sc0, model] = instantiate(ss0);
  ScenarioSection ss4 = ss0;
  ss4.k = 4;
  auto [sc4, model4] = instantiate(ss4);

  const DesignPoint init0 = make_initial_point(sc0, model, dcfg.seed);
  const DesignPoint init4 = make_initial_point(sc4, model, dcfg.seed);
  const DesignReport mm0 = mm_design(sc0, model, init0, dcfg);
  const DesignReport ws0 = ws_design(sc0, model, init0, dcfg);
  const DesignReport mm4 = mm_design(sc4, model, init4, dcfg);
  const DesignReport ws4 = ws_design(sc4, model, init4, dcfg);
  md.set("converged.mm_k0", mm0.converged);
  md.set("converged.ws_k0", ws0.converged);
  md.set("converged.mm_k4", mm4.converged);
  md.set("converged.ws_k4", ws4.converged);

  const int n = sc0.n;
  const Vec zero = Vec::Zero(n);
  const Vec active_wave = random_binary_waveform(sc0, dcfg.seed);
  const Vec active_filter = active_wave / active_wave.norm();
  const auto [lmax, passive_filter] =
      detail::leading_eigenpair(comm_covariance(model, 0, n));
  (void)lmax;

  std::vector<DetectorSetup> setups;
  setups.push_back({"active_only", active_wave, active_filter, zero, true, false});
  setups.push_back({"passive_only", zero, zero, passive_filter, false, true});
  setups.push_back({"hybrid_mm_k0", mm0.point.s_r, mm0.point.w_r, mm0.point.w_c,
                    true, true});
  setups.push_back({"hybrid_ws_k0", ws0.point.s_r, ws0.point.w_r, ws0.point.w_c,
                    true, true});
  setups.push_back({"hybrid_mm_k4", mm4.point.s_r, mm4.point.w_r, mm4.point.w_c,
                    true, true});
  setups.push_back({"hybrid_ws_k4", ws4.point.s_r, ws4.point.w_r, ws4.point.w_c,
                    true, true});

  DetectionConfig det;
  det.p_f = cfg.detection.p_f;
  det.trials_h0 = cfg.detection.trials_h0;
  det.trials_h1 = cfg.detection.trials_h1;
  det.seed = dcfg.seed;
  std::vector<double> grid;
  for (double db = cfg.detection.snr_min_db;
       db <= cfg.detection.snr_max_db + 1e-9; db += cfg.detection.snr_step_db) {
    grid.push_back(db);
  }
  det.snr_grid_db =
      Eigen::Map<const RealVec>(grid.data(), static_cast<Eigen::Index>(grid.size()));

  const auto curves = detection_curves(setups, model, sc0.sigma2, det);

  CsvWriter csv((out / "detect.csv").string(),
                {"config", "snr_db", "pm", "pm_half_width_95", "zeta"});
  for (const auto& curve : curves) {
    md.set("zeta." + curve.name, curve.zeta);
    for (Eigen::Index i = 0; i < curve.snr_db.size(); ++i) {
      csv.row({curve.name, cell(curve.snr_db[i]), cell(curve.pm[i]),
               cell(curve.half_width[i]), cell(curve.zeta)});
    }
  }
  md.set("detection.p_f", det.p_f);
  md.set("detection.trials_h0", det.trials_h0);
  md.set("detection.trials_h1", det.trials_h1);
  md.write(out / "run_metadata.txt");
  return 0;
}

}  // namespace

std::pair<Scenario, CommWaveformModel> instantiate(const ScenarioSection& s) {
  const PulseShape shape = raised_cosine_taps(s.rolloff, s.p, s.i);
  CommWaveformModel model = build_waveform_matrix(shape, s.l);
  Scenario sc;
  sc.gamma_r = db_to_linear(s.gamma_r_db);
  sc.gamma_c = db_to_linear(s.gamma_c_db);
  sc.sigma2 = s.sigma2;
  sc.n = s.n;
  sc.k_bound = s.k;
  sc.power_budget = s.p_r;
  if (!s.weights.empty()) {
    sc.weights = Eigen::Map<const RealVec>(
        s.weights.data(), static_cast<Eigen::Index>(s.weights.size()));
  }
  try {
    sc.validate_with(model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "scenario", e.what());
  }
  return {std::move(sc), std::move(model)};
}

DesignConfig design_config(const AlgorithmSection& a) {
  DesignConfig d;
  d.epsilon = a.epsilon;
  d.randomization_trials = a.q;
  d.max_outer = a.max_outer;
  d.seed = a.seed;
  return d;
}

int run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind.empty()) throw ConfigError(0, "kind", "experiment kind not set");
  fs::create_directories(cfg.out);
  if (cfg.kind == "design") return run_design(cfg);
  if (cfg.kind == "convergence") return run_convergence(cfg);
  if (cfg.kind == "contour") return run_contour(cfg);
  if (cfg.kind == "ksweep") return run_ksweep(cfg);
  if (cfg.kind == "robustness") return run_robustness(cfg);
  if (cfg.kind == "detect") return run_detect(cfg);
  throw ConfigError(0, "kind", "unknown experiment kind '" + cfg.kind + "'");
}

}  // namespace hyrad::cli
