#include <benchmark/benchmark.h>

#include "hyrad/rng.hpp"
#include "hyrad/signal_model.hpp"

using namespace hyrad;

namespace {

struct Fixture {
  CommWaveformModel model;
  Scenario sc;
  DesignPoint dp;
  DelayCovariances cov;

  explicit Fixture(int k_bound) {
    model = build_waveform_matrix(raised_cosine_taps(0.22, 8, 2), 10);
    sc.gamma_r = 316.23;
    sc.gamma_c = 316.23;
    sc.n = 16;
    sc.k_bound = k_bound;
    Rng rng(1);
    dp.s_r = rng.cnormal_vec(16);
    dp.s_r /= dp.s_r.norm();
    dp.w_r = rng.cnormal_vec(16);
    dp.w_c = rng.cnormal_vec(16);
    cov = DelayCovariances(model, sc.n, sc.k_bound);
  }
};

}  // namespace

static void CovarianceBuild(benchmark::State& state) {
  const auto model = build_waveform_matrix(raised_cosine_taps(0.22, 8, 2), 10);
  for (auto _ : state) {
    auto sigma = comm_covariance(model, 0, 16);
    benchmark::DoNotOptimize(sigma);
  }
}
BENCHMARK(CovarianceBuild);

static void WorstCaseSinr(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_sinr(f.sc, f.dp, f.cov));
  }
}
BENCHMARK(WorstCaseSinr)->Arg(0)->Arg(3)->Arg(6);
