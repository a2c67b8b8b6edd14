// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "shiftk/experiments.hpp"
#include "shiftk/kernels.hpp"
#include "shiftk/verify.hpp"

namespace {

using namespace shiftk;

FilterParams bench_params(std::size_t S) {
  std::mt19937_64 rng(17);
  return random_params(rng, S, 0.99, 0.0);
}

const Dataset& bench_data() {
  static const Dataset data = [] {
    ARDatasetSpec spec;
    spec.rho = 0.7;
    spec.num_samples = 2000;
    return gen_ar1(spec);
  }();
  return data;
}

std::vector<cplx> bench_error(std::size_t n) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::vector<cplx> e(n);
  for (auto& z : e) z = {n01(rng), n01(rng)};
  return e;
}

template <auto Fn>
void BM_FreqLoss(benchmark::State& state) {
  const auto p = bench_params(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.a(), p.b(), 500, 0.5, 65536));
}

template <auto Fn>
void BM_DoubleSum(benchmark::State& state) {
  const auto e = bench_error(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(e, 0.7));
}

template <auto Fn>
void BM_Predict(benchmark::State& state) {
  const auto p = bench_params(33);
  const auto& data = bench_data();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.a(), p.b(), data.view()));
}

template <auto Fn>
void BM_Gradient(benchmark::State& state) {
  const auto p = bench_params(33);
  const auto& data = bench_data();
  std::vector<std::size_t> rows(static_cast<std::size_t>(state.range(0)));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.a(), p.b(), data.view(), rows));
}

}  // namespace

BENCHMARK(BM_FreqLoss<kernels::serial::freq_loss>)->Name("freq_loss/serial")->Arg(51)->Arg(251);
BENCHMARK(BM_FreqLoss<kernels::omp::freq_loss>)->Name("freq_loss/omp")->Arg(51)->Arg(251);
BENCHMARK(BM_DoubleSum<kernels::serial::weighted_double_sum>)->Name("double_sum/serial")->Arg(4096);
BENCHMARK(BM_DoubleSum<kernels::omp::weighted_double_sum>)->Name("double_sum/omp")->Arg(4096);
BENCHMARK(BM_Predict<kernels::serial::predict>)->Name("predict/serial");
BENCHMARK(BM_Predict<kernels::omp::predict>)->Name("predict/omp");
BENCHMARK(BM_Gradient<kernels::serial::batch_gradient>)->Name("batch_gradient/serial")->Arg(50)->Arg(2000);
BENCHMARK(BM_Gradient<kernels::omp::batch_gradient>)->Name("batch_gradient/omp")->Arg(50)->Arg(2000);

BENCHMARK_MAIN();
