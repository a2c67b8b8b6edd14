#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "shiftk/experiments.hpp"
#include "shiftk/kernels.hpp"
#include "shiftk/verify.hpp"

using namespace shiftk;

// The OpenMP kernels reduce over fixed blocks, so their results must not
// depend on the thread count and must match the serial versions closely.

namespace {

std::vector<cplx> noise(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> n01;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {n01(rng), n01(rng)};
  return v;
}

}  // namespace

TEST(Kernels, FreqLossSerialVsParallel) {
  std::mt19937_64 rng(1);
  const auto p = random_params(rng, 7, 0.9, 0.05);
  for (double rho : {0.0, 0.5}) {
    const double s = kernels::serial::freq_loss(p.a(), p.b(), 13, rho, 5000);
    const double o = kernels::omp::freq_loss(p.a(), p.b(), 13, rho, 5000);
    EXPECT_NEAR(s, o, 1e-12 * std::max(1.0, s));
  }
}

TEST(Kernels, WeightedDoubleSumSerialVsParallel) {
  std::mt19937_64 rng(2);
  const auto e = noise(rng, 700);
  for (double rho : {0.0, 0.3, 0.9}) {
    const cplx s = kernels::serial::weighted_double_sum(e, rho);
    const cplx o = kernels::omp::weighted_double_sum(e, rho);
    EXPECT_LT(std::abs(s - o), 1e-10 * std::abs(s));
  }
}

TEST(Kernels, WeightedDoubleSumSmallCase) {
  const std::vector<cplx> e{cplx{1.0, 0.0}, cplx{0.0, 1.0}};
  // |1|^2 + |i|^2 + 2 Re(1 * conj(i)) rho = 2.
  EXPECT_NEAR(kernels::serial::weighted_double_sum(e, 0.5).real(), 2.0, 1e-15);
  const std::vector<cplx> f{cplx{1.0, 0.0}, cplx{2.0, 0.0}};
  EXPECT_NEAR(kernels::serial::weighted_double_sum(f, 0.5).real(), 1.0 + 4.0 + 2.0 * 2.0 * 0.5, 1e-15);
}

TEST(Kernels, PredictAndGradientSerialVsParallel) {
  std::mt19937_64 rng(3);
  const auto p = random_params(rng, 5, 0.95, 0.05);
  ARDatasetSpec spec;
  spec.N = 90;
  spec.t_star = 30;
  spec.rho = 0.4;
  spec.num_samples = 300;
  const auto data = gen_ar1(spec);
  const auto ys = kernels::serial::predict(p.a(), p.b(), data.view());
  const auto yo = kernels::omp::predict(p.a(), p.b(), data.view());
  EXPECT_EQ(ys, yo);

  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto gs = kernels::serial::batch_gradient(p.a(), p.b(), data.view(), rows);
  const auto go = kernels::omp::batch_gradient(p.a(), p.b(), data.view(), rows);
  EXPECT_NEAR(gs.mse, go.mse, 1e-12 * gs.mse);
  for (std::size_t s = 0; s < p.size(); ++s) {
    EXPECT_LT(std::abs(gs.grad_a[s] - go.grad_a[s]), 1e-10 * (1.0 + std::abs(gs.grad_a[s])));
    EXPECT_LT(std::abs(gs.grad_b[s] - go.grad_b[s]), 1e-10 * (1.0 + std::abs(gs.grad_b[s])));
  }
}

TEST(Kernels, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(4);
  const auto p = random_params(rng, 9, 0.9, 0.05);
  const auto e = noise(rng, 2000);
  kernels::set_threads(1);
  const double f1 = kernels::omp::freq_loss(p.a(), p.b(), 40, 0.3, 20000);
  const cplx w1 = kernels::omp::weighted_double_sum(e, 0.6);
  kernels::set_threads(4);
  const double f4 = kernels::omp::freq_loss(p.a(), p.b(), 40, 0.3, 20000);
  const cplx w4 = kernels::omp::weighted_double_sum(e, 0.6);
  kernels::set_threads(0);
  EXPECT_EQ(f1, f4);
  EXPECT_EQ(w1, w4);
  EXPECT_GE(kernels::max_threads(), 1);
}
