#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "shiftk/errors.hpp"
#include "shiftk/experiments.hpp"
#include "shiftk/verify.hpp"

using namespace shiftk;

namespace {

ARDatasetSpec small_spec(double rho, std::uint64_t seed) {
  ARDatasetSpec s;
  s.N = 60;
  s.t_star = 20;
  s.rho = rho;
  s.num_samples = 400;
  s.seed = seed;
  return s;
}

TrainConfig small_config(InitScheme scheme) {
  TrainConfig c;
  c.init_scheme = scheme;
  c.S = 9;
  c.K_init = 40;
  c.epochs = 3;
  c.batch_size = 20;
  return c;
}

}  // namespace

TEST(GenAr1, DeterministicAndSeedSensitive) {
  const auto a = gen_ar1(small_spec(0.5, 1));
  const auto b = gen_ar1(small_spec(0.5, 1));
  const auto c = gen_ar1(small_spec(0.5, 2));
  EXPECT_EQ(a.inputs, b.inputs);
  EXPECT_EQ(a.targets, b.targets);
  EXPECT_NE(a.inputs, c.inputs);
}

TEST(GenAr1, TargetsAreTheMarkedStep) {
  const auto d = gen_ar1(small_spec(0.3, 4));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.targets[i], d.sequence(i)[19]);
}

TEST(GenAr1, FirstValueUniformAndLaterMomentsStationary) {
  ARDatasetSpec s = small_spec(0.7, 9);
  s.num_samples = 20000;
  s.N = 80;
  const auto d = gen_ar1(s);
  double first_min = 1.0, first_max = 0.0;
  double m = 0.0, v = 0.0, lag = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.sequence(i);
    first_min = std::min(first_min, x[0]);
    first_max = std::max(first_max, x[0]);
    m += x[79];
    v += x[79] * x[79];
    lag += x[79] * x[78];
  }
  const double n = static_cast<double>(d.size());
  EXPECT_GE(first_min, 0.0);
  EXPECT_LT(first_max, 1.0);
  EXPECT_NEAR(m / n, 0.0, 0.03);
  EXPECT_NEAR(v / n, 1.0, 0.05);
  EXPECT_NEAR(lag / n, 0.7, 0.05);
}

TEST(GenAr1, BurnInDiscardsLeadingSteps) {
  ARDatasetSpec s = small_spec(0.5, 3);
  s.burn_in = 100;
  const auto d = gen_ar1(s);
  int outside = 0;
  for (std::size_t i = 0; i < d.size(); ++i) outside += d.sequence(i)[0] < 0.0 || d.sequence(i)[0] >= 1.0;
  EXPECT_GT(outside, 0);
}

TEST(GenAr1, Validation) {
  ARDatasetSpec s = small_spec(0.5, 0);
  s.t_star = 61;
  EXPECT_THROW(gen_ar1(s), ValidationError);
  s = small_spec(1.0, 0);
  EXPECT_THROW(gen_ar1(s), ValidationError);
}

TEST(InitScheme, GridMatchesShiftKInit) {
  const auto p = init_scheme(small_config(InitScheme::shiftk_grid));
  const auto q = shiftk_init({9, 40, 0.0, 1.0});
  for (std::size_t s = 0; s < 9; ++s) EXPECT_EQ(p.a()[s], q.a()[s]);
}

TEST(InitScheme, RandomPhaseIsConjugateSymmetricWithGridModulus) {
  for (int S : {9, 10}) {
    auto c = small_config(InitScheme::random_phase);
    c.S = S;
    const auto p = init_scheme(c);
    EXPECT_TRUE(p.conjugate_symmetric(0.0));
    for (const auto& z : p.a()) EXPECT_NEAR(std::abs(z), std::exp(-1.0 / 40.0), 1e-15);
  }
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  const auto data = gen_ar1(small_spec(0.6, 5));
  std::vector<std::size_t> rows(32);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_params(rng, 1 + rng() % 4, 0.9, 0.05);
    EXPECT_LT(gradient_check_error(p, data, rows), 1e-5);
  }
}

TEST(Gradient, RejectsBadRows) {
  const auto data = gen_ar1(small_spec(0.0, 1));
  const auto p = init_scheme(small_config(InitScheme::shiftk_grid));
  std::vector<std::size_t> none;
  std::vector<std::size_t> bad{data.size()};
  EXPECT_THROW(loss_gradient(p, data, none), ValidationError);
  EXPECT_THROW(loss_gradient(p, data, bad), ValidationError);
}

TEST(Train, ZeroLearningRateKeepsCurveFlat) {
  auto c = small_config(InitScheme::shiftk_grid);
  c.learning_rate = 0.0;
  const auto run = train(c, small_spec(0.5, 2));
  ASSERT_EQ(run.loss_curve.size(), 3u);
  EXPECT_EQ(run.loss_curve[0], run.loss_curve[2]);
  EXPECT_EQ(run.final_mse, run.loss_curve.back());
}

TEST(Train, ReproducibleAndDecreasing) {
  auto c = small_config(InitScheme::shiftk_grid);
  c.learning_rate = 1e-4;
  c.epochs = 5;
  const auto spec = small_spec(0.5, 2);
  const auto r1 = train(c, spec);
  const auto r2 = train(c, spec);
  EXPECT_EQ(r1.loss_curve, r2.loss_curve);
  EXPECT_LT(r1.loss_curve.back(), empirical_mse(init_scheme(c), gen_ar1(spec)));
  EXPECT_TRUE(r1.final_params.conjugate_symmetric(1e-12));
  EXPECT_LE(r1.final_params.max_pole_modulus(), kPoleClamp);
}

TEST(Train, DivergenceIsReported) {
  auto c = small_config(InitScheme::shiftk_grid);
  c.learning_rate = 50.0;
  try {
    train(c, small_spec(0.5, 2));
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.epoch, 1);
  }
}

TEST(Train, RejectsBadConfig) {
  auto c = small_config(InitScheme::shiftk_grid);
  c.S = 10;
  EXPECT_THROW(train(c, small_spec(0.5, 2)), ValidationError);
  c = small_config(InitScheme::shiftk_grid);
  c.batch_size = 0;
  EXPECT_THROW(train(c, small_spec(0.5, 2)), ValidationError);
}

TEST(Serialization, RunJsonAndCurveCsv) {
  auto c = small_config(InitScheme::random_phase);
  c.epochs = 2;
  const auto run = train(c, small_spec(0.2, 1));
  nlohmann::json j = run;
  EXPECT_EQ(j.at("config").at("init_scheme"), "random_phase");
  EXPECT_EQ(j.at("loss_curve").size(), 2u);
  EXPECT_TRUE(j.at("final_params").contains("a"));
  const auto csv = loss_curve_csv(run);
  EXPECT_EQ(csv.rfind("epoch,mse\n1,", 0), 0u);
  EXPECT_THROW(parse_init_scheme("hippo"), ValidationError);
}
