#include <benchmark/benchmark.h>

#include "hyrad/fractional.hpp"
#include "hyrad/rng.hpp"
#include "hyrad/sdp_kernel.hpp"

using namespace hyrad;

namespace {

Mat random_hermitian(Rng& rng, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return hermitian_part(a);
}

Mat random_psd(Rng& rng, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return a * a.adjoint() / n;
}

}  // namespace

static void MaxMinAffineSolve(benchmark::State& state) {
  const int n = 16;
  const int m = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<AffineForm> forms;
  for (int k = 0; k < m; ++k) forms.emplace_back(0.0, random_hermitian(rng, n));
  const PsdProgram prog = PsdProgram::max_min(forms, 1.0);
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_maxmin_affine(prog, cfg));
  }
}
BENCHMARK(MaxMinAffineSolve)->Arg(1)->Arg(7)->Arg(13);

static void DinkelbachFilterStep(benchmark::State& state) {
  const int n = 16;
  const int m = static_cast<int>(state.range(0));
  Rng rng(5);
  RatioFamily fam;
  const Mat num = random_psd(rng, n);
  for (int k = 0; k < m; ++k) {
    fam.numerators.emplace_back(0.0, num);
    fam.denominators.emplace_back(0.0,
                                  random_psd(rng, n) + Mat::Identity(n, n));
    fam.offsets.push_back(0.5);
  }
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dinkelbach_maxmin(fam, 1.0, 0.01, cfg));
  }
}
BENCHMARK(DinkelbachFilterStep)->Arg(7);

static void RandomizationRounding(benchmark::State& state) {
  const int n = 16;
  Rng rng(7);
  const Mat w = random_psd(rng, n);
  const auto score = [](const Vec& v) { return -v.squaredNorm(); };
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(randomize_rank_one(w, 200, score, ++seed));
  }
}
BENCHMARK(RandomizationRounding);
