#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shiftk/errors.hpp"
#include "shiftk/signal.hpp"

using namespace shiftk;
using std::numbers::pi;

TEST(ComplexSeq, RejectsNonFinite) {
  EXPECT_THROW(ComplexSeq({cplx{1.0, 0.0}, cplx{std::nan(""), 0.0}}), ValidationError);
  EXPECT_THROW(ComplexSeq({cplx{INFINITY, 0.0}}), ValidationError);
}

TEST(ComplexSeq, DeltaHasSingleUnitEntry) {
  const auto d = ComplexSeq::delta(3, 6);
  ASSERT_EQ(d.size(), 6u);
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_EQ(d[j], cplx(j == 3 ? 1.0 : 0.0, 0.0));
}

TEST(FreqGrid, EndpointCoversHalfOpenInterval) {
  const auto g = FreqGrid::uniform_endpoint(8);
  EXPECT_DOUBLE_EQ(g[0], -pi);
  EXPECT_LT(g[7], pi);
  const auto m = FreqGrid::uniform_midpoint(8);
  EXPECT_DOUBLE_EQ(m[0], -pi + pi / 8.0);
}

TEST(Ipow, MatchesRepeatedMultiplication) {
  const cplx z{0.3, -0.7};
  cplx acc{1.0, 0.0};
  for (long n = 0; n < 40; ++n) {
    EXPECT_LT(std::abs(ipow(z, n) - acc), 1e-15);
    acc *= z;
  }
  EXPECT_EQ(ipow(cplx{0.0, 0.0}, 0), cplx(1.0, 0.0));
  EXPECT_EQ(ipow(cplx{0.0, 0.0}, 5), cplx(0.0, 0.0));
}

TEST(Dtft, DelayedDeltaIsPurePhase) {
  const auto grid = FreqGrid::uniform_midpoint(64);
  const auto X = dtft_eval(ComplexSeq::delta(5, 8), grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_LT(std::abs(X[j] - std::polar(1.0, -5.0 * grid[j])), 1e-14);
  }
}

TEST(Dtft, OffsetShiftsPhase) {
  const auto grid = FreqGrid::uniform_midpoint(16);
  const auto X = dtft_eval(ComplexSeq({cplx{1.0, 0.0}}, -2), grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_LT(std::abs(X[j] - std::polar(1.0, 2.0 * grid[j])), 1e-14);
  }
}

TEST(Dtft, ParsevalOnRandomSequences) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  const auto grid = FreqGrid::uniform_midpoint(4096);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> v(1 + rng() % 100);
    double energy = 0.0;
    for (auto& z : v) {
      z = {n01(rng), n01(rng)};
      energy += std::norm(z);
    }
    const auto X = dtft_eval(ComplexSeq(v), grid);
    std::vector<double> mag(X.size());
    for (std::size_t j = 0; j < X.size(); ++j) mag[j] = std::norm(X[j]);
    EXPECT_NEAR(weighted_quadrature(mag, grid), energy, 1e-9 * energy);
  }
}

TEST(Spectrum, KnownValues) {
  EXPECT_DOUBLE_EQ(autocorr_spectrum(NoiseModel(0.0), 1.3), 1.0);
  EXPECT_NEAR(autocorr_spectrum(NoiseModel(0.5), 0.0), 3.0, 1e-15);
  EXPECT_NEAR(autocorr_spectrum(NoiseModel(0.5), pi), 1.0 / 3.0, 1e-15);
}

TEST(Spectrum, NormalizedAndPositive) {
  const auto grid = FreqGrid::uniform_midpoint(8192);
  for (double rho : {0.0, 0.3, 0.7, 0.95}) {
    const NoiseModel model(rho);
    std::vector<double> g(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      g[j] = autocorr_spectrum(model, grid[j]);
      ASSERT_GT(g[j], 0.0);
    }
    EXPECT_NEAR(weighted_quadrature(g, grid), 1.0, 1e-10) << "rho = " << rho;
  }
}

TEST(Spectrum, FourierCoefficientsAreAutocorrelation) {
  const NoiseModel model(0.6);
  const auto grid = FreqGrid::uniform_midpoint(4096);
  for (long k : {0L, 1L, 3L, 10L}) {
    std::vector<double> g(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      g[j] = autocorr_spectrum(model, grid[j]) * std::cos(k * grid[j]);
    }
    EXPECT_NEAR(weighted_quadrature(g, grid), model.gamma(k), 1e-12);
  }
  EXPECT_DOUBLE_EQ(model.gamma(-2), model.gamma(2));
}

TEST(NoiseModel, RejectsOutOfRange) {
  EXPECT_THROW(NoiseModel(1.0), ValidationError);
  EXPECT_THROW(NoiseModel(-0.1), ValidationError);
}

TEST(Quadrature, LengthMismatchThrows) {
  const auto grid = FreqGrid::uniform_midpoint(8);
  std::vector<double> v(7, 1.0);
  EXPECT_THROW(weighted_quadrature(v, grid), ValidationError);
}

TEST(Spectrum, WindowMassGrowsWithWidth) {
  const NoiseModel model(0.7);
  double last = 0.0;
  for (double w : {0.1, 0.5, 1.0, 2.0, pi}) {
    const double m = spectrum_window_mass(model, w, 4096);
    EXPECT_GT(m, last);
    last = m;
  }
  EXPECT_NEAR(last, 1.0, 1e-9);
}

TEST(TailBound, DecreasesGeometrically) {
  const double t10 = geometric_tail_bound(0.5, 1.0, 10);
  const double t11 = geometric_tail_bound(0.5, 1.0, 11);
  EXPECT_NEAR(t11 / t10, 0.5, 1e-12);
  EXPECT_EQ(geometric_tail_bound(0.0, 1.0, 3), 0.0);
}
