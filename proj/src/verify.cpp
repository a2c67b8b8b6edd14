#include "shiftk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shiftk/asymptotics.hpp"
#include "shiftk/errors.hpp"
#include "shiftk/kernels.hpp"
#include "shiftk/loss.hpp"

namespace shiftk {

using std::numbers::pi;

PoleVector random_poles(std::mt19937_64& rng, std::size_t S, double max_radius,
                        double min_separation) {
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  std::uniform_real_distribution<double> angle(-pi, pi);
  PoleVector poles;
  int attempts = 0;
  while (poles.size() < S) {
    if (++attempts > 100000) throw ValidationError("random_poles: separation unattainable");
    // sqrt makes the draw uniform over the disk.
    const cplx z = std::polar(max_radius * std::sqrt(radius(rng) / max_radius), angle(rng));
    const bool far = std::all_of(poles.begin(), poles.end(),
                                 [&](cplx p) { return std::abs(p - z) >= min_separation; });
    if (far) poles.push_back(z);
  }
  return poles;
}

FilterParams random_params(std::mt19937_64& rng, std::size_t S, double max_radius,
                           double min_separation) {
  auto a = random_poles(rng, S, max_radius, min_separation);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<cplx> b(S);
  for (auto& z : b) z = {n01(rng), n01(rng)};
  return FilterParams(std::move(a), std::move(b));
}

FilterParams random_symmetric_params(std::mt19937_64& rng, std::size_t S, double max_radius) {
  if (S % 2 == 0) throw ValidationError("random_symmetric_params: S must be odd");
  std::uniform_real_distribution<double> radius(0.05, max_radius);
  std::uniform_real_distribution<double> angle(0.05, pi - 0.05);
  std::normal_distribution<double> n01(0.0, 1.0);
  const std::size_t T = (S - 1) / 2;
  std::vector<cplx> a(S), b(S);
  for (std::size_t u = 1; u <= T; ++u) {
    const cplx z = std::polar(radius(rng), angle(rng));
    const cplx w{n01(rng), n01(rng)};
    a[T + u] = z;
    a[T - u] = std::conj(z);
    b[T + u] = w;
    b[T - u] = std::conj(w);
  }
  a[T] = radius(rng);
  b[T] = n01(rng);
  return FilterParams(std::move(a), std::move(b), IndexConvention::symmetric_T);
}

double gradient_check_error(const FilterParams& p, const Dataset& data,
                            std::span<const std::size_t> rows, double step) {
  std::vector<double> inputs;
  std::vector<double> targets;
  for (std::size_t r : rows) {
    const auto seq = data.sequence(r);
    inputs.insert(inputs.end(), seq.begin(), seq.end());
    targets.push_back(data.targets[r]);
  }
  const kernels::SampleView view{inputs, targets, data.length};
  auto mse = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const auto y = kernels::serial::predict(a, b, view);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - targets[i]) * (y[i] - targets[i]);
    return acc / static_cast<double>(y.size());
  };

  const auto g = loss_gradient(p, data, rows);
  std::vector<cplx> a(p.a().begin(), p.a().end());
  std::vector<cplx> b(p.b().begin(), p.b().end());
  double diff2 = 0.0;
  double ref2 = 0.0;
  auto probe = [&](std::vector<cplx>& v, std::size_t s, cplx dir, double analytic) {
    const cplx saved = v[s];
    v[s] = saved + step * dir;
    const double up = mse(a, b);
    v[s] = saved - step * dir;
    const double down = mse(a, b);
    v[s] = saved;
    const double fd = (up - down) / (2.0 * step);
    diff2 += (analytic - fd) * (analytic - fd);
    ref2 += fd * fd;
  };
  for (std::size_t s = 0; s < a.size(); ++s) {
    probe(a, s, {1.0, 0.0}, g.grad_a[s].real());
    probe(a, s, {0.0, 1.0}, g.grad_a[s].imag());
    probe(b, s, {1.0, 0.0}, g.grad_b[s].real());
    probe(b, s, {0.0, 1.0}, g.grad_b[s].imag());
  }
  if (ref2 == 0.0) return std::sqrt(diff2);
  return std::sqrt(diff2 / ref2);
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

CheckResult below(std::string name, double value, double threshold) {
  return {std::move(name), value <= threshold, value, threshold};
}

std::vector<cplx> random_sequence(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {n01(rng), n01(rng)};
  return v;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> small(1, 8);

  {
    double worst = 0.0;
    const auto grid = FreqGrid::uniform_midpoint(4096);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexSeq x(random_sequence(rng, 1 + rng() % 64));
      double energy = 0.0;
      for (const auto& v : x.values()) energy += std::norm(v);
      auto X = dtft_eval(x, grid);
      std::vector<double> mag(X.size());
      for (std::size_t j = 0; j < X.size(); ++j) mag[j] = std::norm(X[j]);
      worst = std::max(worst, std::abs(weighted_quadrature(mag, grid) - energy) / energy);
    }
    report.checks.push_back(below("parseval", worst, 1e-8));
  }
  {
    double worst = 0.0;
    const auto grid = FreqGrid::uniform_midpoint(4096);
    for (int r = 0; r <= 9; ++r) {
      const NoiseModel model(0.1 * r);
      std::vector<double> g(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) g[j] = autocorr_spectrum(model, grid[j]);
      worst = std::max(worst, std::abs(weighted_quadrature(g, grid) - 1.0));
    }
    report.checks.push_back(below("spectrum_normalization", worst, 1e-6));
  }
  {
    double disp = 0.0, blaschke = 0.0, rational = 0.0, mass = 0.0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t S = 1 + rng() % 32;
      const auto poles = random_poles(rng, S, 0.95, 1e-3);
      auto gram = cauchy_gram(poles);
      if (options.perturb_cauchy != 0.0) gram = gram.perturbed(options.perturb_cauchy);
      disp = std::max(disp, gram.displacement_residual());
      for (int k = 0; k < 100; ++k) {
        const cplx z = std::polar(1.0, (2.0 * unit(rng) - 1.0) * pi);
        blaschke = std::max(blaschke, std::abs(std::abs(blaschke_eval(poles, z)) - 1.0));
      }
      if (S > 10) continue;
      const auto clean = cauchy_gram(random_poles(rng, S, 0.9, 0.1));
      const PoleVector a(clean.poles().begin(), clean.poles().end());
      const auto u = unit_weights(clean);
      cplx prod_conj{1.0, 0.0};
      double prod_mod = 1.0;
      cplx total{0.0, 0.0};
      for (std::size_t s = 0; s < S; ++s) {
        prod_conj *= std::conj(a[s]);
        prod_mod *= std::norm(a[s]);
        total += u[s];
      }
      mass = std::max(mass, std::abs(total - (1.0 - prod_mod)));
      for (int k = 0; k < 20; ++k) {
        const cplx z = std::polar(0.99 * std::sqrt(unit(rng)), (2.0 * unit(rng) - 1.0) * pi);
        cplx lhs{0.0, 0.0};
        for (std::size_t s = 0; s < S; ++s) lhs += u[s] / (1.0 - z * std::conj(a[s]));
        rational = std::max(rational, std::abs(lhs - (1.0 - prod_conj * blaschke_eval(a, z))));
      }
    }
    report.checks.push_back(below("cauchy_displacement", disp, 1e-12));
    report.checks.push_back(below("blaschke_unit_modulus", blaschke, 1e-12));
    report.checks.push_back(below("unit_weights_rational_identity", rational, 1e-8));
    report.checks.push_back(below("unit_weights_mass", mass, 1e-9));
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexSeq w(random_sequence(rng, 32));
      const auto [lhs, rhs] = verify_semi_parseval(w, 1024);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + lhs));
    }
    report.checks.push_back(below("semi_parseval", worst, 1e-8));
  }
  {
    const double r11 = toeplitz_eigen_residual(1.0, 11);
    const double r41 = toeplitz_eigen_residual(1.0, 41);
    const double r161 = toeplitz_eigen_residual(1.0, 161);
    const bool monotone = r161 < r41 && r41 < r11;
    report.checks.push_back({"toeplitz_residual_monotone", monotone, r161, r11});
    report.checks.push_back(
        below("toeplitz_eigenvalue", std::abs(toeplitz_asymptotic_eigenvalue(1.0) - 1.0 / std::sinh(2.0)), 1e-14));
  }
  {
    double worst = 0.0;
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t S = 1 + rng() % 4;
      const auto p = random_params(rng, S, 0.9, 0.05);
      ARDatasetSpec spec{static_cast<int>(2 + rng() % 63), 1, 0.5, 8, rng(), 0};
      spec.t_star = 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.N));
      const auto data = gen_ar1(spec);
      std::vector<std::size_t> rows(data.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      worst = std::max(worst, gradient_check_error(p, data, rows));
    }
    report.checks.push_back(below("gradient_finite_difference", worst, 1e-5));
  }
  {
    double worst = 0.0;
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_params(rng, static_cast<std::size_t>(small(rng)), 0.95, 0.0);
      const std::size_t n = 1 + rng() % 128;
      std::vector<cplx> u(n);
      for (auto& z : u) z = n01(rng);
      const ComplexSeq input(u);
      const auto y = rnn_rollout(p, input);
      const auto c = impulse_response(p, n - 1);
      const auto ref = causal_convolve(c.values(), u);
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(y[k] - ref[k]));
    }
    report.checks.push_back(below("rollout_convolution", worst, 1e-10));
  }
  {
    double freq = 0.0;
    double oracle_excess = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_params(rng, static_cast<std::size_t>(small(rng)), 0.9, 0.01);
      const int K = static_cast<int>(rng() % 51);
      const double rho = 0.3 * static_cast<double>(trial % 3);
      const double closed = rho == 0.0 ? loss_white_closed(p, K) : loss_auto_closed(p, K, rho);
      freq = std::max(freq, std::abs(closed - loss_freq_quadrature(p, K, rho, kDefaultLossNodes)));
      const auto horizon = oracle_horizon(p, K, 1e-10, 20000);
      const auto tr = loss_truncated_oracle(p, K, rho, horizon);
      oracle_excess = std::max(oracle_excess,
                               std::abs(closed - tr.value) - std::max(1e-8, tr.tail_bound));
    }
    report.checks.push_back(below("loss_closed_vs_quadrature", freq, 1e-6));
    report.checks.push_back(below("loss_closed_vs_truncated_excess", oracle_excess, 0.0));
  }
  {
    double worst = -1.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t S = 1 + rng() % 10;
      const int K = 1 + static_cast<int>(rng() % 200);
      const auto a = random_poles(rng, S, 0.9, 0.1);
      const double excess = f_criterion(a, K) - static_cast<double>(S) / (K + 1.0);
      worst = std::max(worst, excess);
    }
    report.checks.push_back(below("f_criterion_bound_excess", worst, 1e-9));
  }
  return report;
}

void to_json(nlohmann::json& j, const CheckResult& c) {
  j = nlohmann::json{
      {"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}};
}

void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = nlohmann::json{{"passed", r.passed()}, {"checks", r.checks}};
}

}  // namespace shiftk
