#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "shiftk/asymptotics.hpp"
#include "shiftk/errors.hpp"
#include "shiftk/loss.hpp"

using namespace shiftk;
using std::numbers::pi;

TEST(UpperBound, FrozenValue) {
  const auto est = upper_bound_asymptotic({51, 500, 0.0, 1.0});
  EXPECT_NEAR(est.value, 0.94993409758332544319, 1e-15);
  EXPECT_FALSE(est.out_of_regime);
  EXPECT_TRUE(upper_bound_asymptotic({51, 40, 0.0, 1.0}).out_of_regime);
}

TEST(UpperBound, TracksGridLoss) {
  for (auto [S, K] : {std::pair{51, 500}, std::pair{101, 1000}, std::pair{51, 1000}}) {
    const TaskSpec spec{S, K, 0.0, 1.0};
    const double loss = loss_white_closed(shiftk_init(spec), K);
    EXPECT_LE(std::abs(loss - upper_bound_asymptotic(spec).value), 0.25 * S / K);
  }
}

TEST(WindowLimit, InteriorAtIntegers) {
  // At integer Omega the interior branch equals (-1)^n (1 + e^{-2 alpha}).
  for (int n = -3; n <= 3; ++n) {
    const cplx v = window_limit(n, 10, 1.0);
    EXPECT_NEAR(v.real(), (n % 2 == 0 ? 1.0 : -1.0) * (1.0 + std::exp(-2.0)), 1e-14);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
  }
}

TEST(WindowLimit, InteriorEnvelope) {
  for (double Omega = -24.9; Omega < 25.0; Omega += 0.173) {
    EXPECT_LE(std::abs(window_limit(Omega, 25, 1.0)), 1.0 + std::exp(-2.0) + 0.05);
  }
}

TEST(WindowLimit, ExteriorIsImaginaryAndDecays) {
  const cplx near = window_limit(30.5, 25, 1.0);
  const cplx far = window_limit(300.5, 25, 1.0);
  EXPECT_EQ(near.real(), 0.0);
  EXPECT_GT(std::abs(near), std::abs(far));
  const double gain = std::exp(-1.0) * (std::exp(2.0) - std::exp(-2.0));
  EXPECT_NEAR(far.imag(), gain / 2.0 * 2.0 * 300.0 / (2.0 * pi * 275.0 * 325.0), 1e-15);
}

TEST(WindowLimit, DomainErrors) {
  EXPECT_THROW(window_limit(25.0, 25, 1.0), DomainError);
  EXPECT_THROW(window_limit(-25.0 + 1e-8, 25, 1.0), DomainError);
  EXPECT_THROW(window_limit(25.5, 25, 1.0), DomainError);
  EXPECT_THROW(window_limit(NAN, 25, 1.0), DomainError);
  EXPECT_NO_THROW(window_limit(-25.5, 25, 1.0));
}

TEST(WindowLimit, ApproachesTransferFunction) {
  const int T = 50;
  const TaskSpec spec{2 * T + 1, 1000, 0.0, 1.0};
  const auto p = shiftk_init(spec);
  for (double Omega : {0.0, 3.3, -12.7, 30.1}) {
    const cplx c = transfer_function(p, pi * Omega / spec.K);
    EXPECT_LT(std::abs(c - window_limit(Omega, T, 1.0)), 0.02) << "Omega = " << Omega;
  }
}

TEST(IdealWindow, FrozenValues) {
  EXPECT_NEAR(ideal_window_loss({51, 500, 0.0, 1.0}), 0.796, 1e-14);
  EXPECT_NEAR(ideal_window_loss({51, 500, 0.5, 1.0}), 0.50139036473994090404, 1e-14);
  EXPECT_THROW(ideal_window_loss({250, 500, 0.0, 1.0}), DomainError);
}

TEST(IdealWindow, DecreasesWithCorrelation) {
  double last = 1.0;
  for (double rho : {0.0, 0.2, 0.5, 0.8, 0.95}) {
    const double v = ideal_window_loss({51, 500, rho, 1.0});
    EXPECT_LT(v, last);
    last = v;
  }
}

TEST(WindowCsv, Layout) {
  EXPECT_EQ(window_csv_header(), "Omega,T,K,alpha,re_limit,im_limit,re_transfer,im_transfer");
  EXPECT_EQ(window_csv_row(0.5, 2, 10, 1.0, {1.0, 0.0}, {0.25, -0.5}), "0.5,2,10,1,1,0,0.25,-0.5");
}
