#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shiftk/errors.hpp"
#include "shiftk/filter.hpp"
#include "shiftk/verify.hpp"

using namespace shiftk;
using std::numbers::pi;

TEST(FilterParams, Validation) {
  EXPECT_THROW(FilterParams({cplx{0.5, 0.0}}, {}), ValidationError);
  EXPECT_THROW(FilterParams({cplx{1.0, 0.0}}, {cplx{1.0, 0.0}}), StabilityError);
  EXPECT_THROW(FilterParams({cplx{0.1, 0.0}, cplx{0.2, 0.0}}, {cplx{1.0, 0.0}, cplx{1.0, 0.0}},
                            IndexConvention::symmetric_T),
               ValidationError);
  EXPECT_NO_THROW(FilterParams({cplx{0.999999, 0.0}}, {cplx{1.0, 0.0}}));
}

TEST(FilterParams, LogicalIndex) {
  const FilterParams sym({0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}, IndexConvention::symmetric_T);
  EXPECT_EQ(sym.logical_index(0), -1);
  EXPECT_EQ(sym.logical_index(2), 1);
  const FilterParams one({0.1, 0.2}, {1.0, 1.0});
  EXPECT_EQ(one.logical_index(0), 1);
}

TEST(ShiftKInit, FrozenEntries) {
  const auto p = shiftk_init({51, 500, 0.0, 1.0});
  ASSERT_EQ(p.size(), 51u);
  const double r = std::exp(-1.0 / 500.0);
  const double mag = std::exp(-1.0) * (std::exp(2.0) - std::exp(-2.0)) / 1000.0;
  EXPECT_NEAR(std::abs(p.a()[25] - r), 0.0, 1e-16);
  EXPECT_LT(std::abs(p.a()[26] - std::polar(r, pi / 500.0)), 1e-16);
  EXPECT_NEAR(p.b()[25].real(), mag, 1e-18);
  EXPECT_NEAR(p.b()[26].real(), -mag, 1e-18);
  EXPECT_NEAR(p.b()[0].real(), -mag, 1e-18);
  EXPECT_DOUBLE_EQ(shiftk_weight_magnitude(500, 1.0), mag);
}

TEST(ShiftKInit, ConjugateSymmetricAndRealKernel) {
  const auto p = shiftk_init({33, 250, 0.0, 0.7});
  EXPECT_TRUE(p.conjugate_symmetric(0.0));
  const auto c = impulse_response(p, 600);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LT(std::abs(c[k].imag()), 1e-13);
}

TEST(ShiftKInit, RejectsEvenOrZero) {
  EXPECT_THROW(shiftk_init({50, 500, 0.0, 1.0}), ValidationError);
  EXPECT_THROW(shiftk_init({51, 0, 0.0, 1.0}), ValidationError);
  EXPECT_THROW(shiftk_init({51, 500, 0.0, 0.0}), ValidationError);
}

TEST(ImpulseResponse, PowerSums) {
  const FilterParams p({cplx{0.5, 0.0}, cplx{-0.3, 0.4}}, {cplx{1.0, 0.0}, cplx{0.0, 0.5}});
  const auto c = impulse_response(p, 10);
  for (long k = 0; k <= 10; ++k) {
    const cplx expect = ipow(p.a()[0], k) * p.b()[0] + ipow(p.a()[1], k) * p.b()[1];
    EXPECT_LT(std::abs(c[static_cast<std::size_t>(k)] - expect), 1e-15);
  }
}

TEST(TransferFunction, MatchesDtftOfImpulseResponse) {
  std::mt19937_64 rng(3);
  const auto p = random_params(rng, 5, 0.8, 0.05);
  const auto c = impulse_response(p, 400);
  const auto grid = FreqGrid::uniform_midpoint(32);
  const auto X = dtft_eval(c, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_LT(std::abs(X[j] - transfer_function(p, grid[j])), 1e-10);
  }
}

TEST(Rollout, MatchesConvolutionWithKernel) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(rng, 1 + rng() % 6, 0.95, 0.0);
    std::vector<cplx> u(1 + rng() % 200);
    for (auto& z : u) z = {n01(rng), n01(rng)};
    const auto y = rnn_rollout(p, ComplexSeq(u));
    const auto c = impulse_response(p, u.size() - 1);
    const auto ref = causal_convolve(c.values(), u);
    for (std::size_t n = 0; n < u.size(); ++n) EXPECT_LT(std::abs(y[n] - ref[n]), 1e-10);
  }
}

TEST(Rollout, ImpulseInputGivesKernel) {
  const auto p = shiftk_init({5, 10, 0.0, 1.0});
  const auto y = rnn_rollout(p, ComplexSeq::delta(0, 30));
  const auto c = impulse_response(p, 29);
  for (std::size_t k = 0; k < 30; ++k) EXPECT_LT(std::abs(y[k] - c[k]), 1e-15);
}

TEST(Json, RoundTrip) {
  const auto p = shiftk_init({7, 20, 0.0, 1.0});
  nlohmann::json j = p;
  const auto q = filter_params_from_json(j);
  EXPECT_EQ(q.convention(), IndexConvention::symmetric_T);
  ASSERT_EQ(q.size(), p.size());
  for (std::size_t s = 0; s < p.size(); ++s) {
    EXPECT_EQ(q.a()[s], p.a()[s]);
    EXPECT_EQ(q.b()[s], p.b()[s]);
  }
}

TEST(Json, RejectsUnknownKeysAndBadShapes) {
  EXPECT_THROW(filter_params_from_json({{"a", {{0.1, 0.0}}}, {"b", {{1.0, 0.0}}}, {"x", 1}}),
               ValidationError);
  EXPECT_THROW(filter_params_from_json({{"a", {{0.1, 0.0, 3.0}}}, {"b", {{1.0, 0.0}}}}),
               ValidationError);
  EXPECT_THROW(
      filter_params_from_json({{"convention", "weird"}, {"a", {{0.1, 0.0}}}, {"b", {{1.0, 0.0}}}}),
      ValidationError);
}
