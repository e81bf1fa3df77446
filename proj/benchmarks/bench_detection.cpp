#include <benchmark/benchmark.h>

#include "hyrad/detection.hpp"
#include "hyrad/rng.hpp"

using namespace hyrad;

static void MissProbabilityTrials(benchmark::State& state) {
  const auto model = build_waveform_matrix(raised_cosine_taps(0.22, 8, 2), 10);
  Rng rng(11);
  DetectorSetup setup;
  setup.name = "bench";
  setup.s_r = rng.cnormal_vec(16);
  setup.s_r /= setup.s_r.norm();
  setup.w_r = setup.s_r;
  setup.w_c = rng.cnormal_vec(16).normalized();
  const long long trials = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(missing_probability(setup, model, 1.0, 11.75,
                                                 20.0, trials, ++seed,
                                                 /*threads=*/1));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(MissProbabilityTrials)->Arg(10000);
