#include "shiftk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "shiftk/errors.hpp"
#include "shiftk/loss.hpp"

namespace shiftk {

using std::numbers::pi;

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

constexpr std::uint64_t kDataSalt = 0xDA7A;
constexpr std::uint64_t kInitSalt = 0x1417;
constexpr std::uint64_t kShuffleSalt = 0x5AFF;

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void symmetrize(std::vector<cplx>& g) {
  const std::size_t S = g.size();
  for (std::size_t j = 0; j <= (S - 1) / 2; ++j) {
    const std::size_t m = S - 1 - j;
    const cplx avg = 0.5 * (g[j] + std::conj(g[m]));
    g[j] = avg;
    g[m] = std::conj(avg);
  }
}

}  // namespace

void ARDatasetSpec::validate() const {
  if (N < 1) throw ValidationError("ARDatasetSpec: N must be >= 1");
  if (t_star < 1 || t_star > N) throw ValidationError("ARDatasetSpec: t_star must lie in [1, N]");
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("ARDatasetSpec: rho must lie in [0, 1)");
  if (num_samples < 1) throw ValidationError("ARDatasetSpec: num_samples must be >= 1");
  if (burn_in < 0) throw ValidationError("ARDatasetSpec: burn_in must be >= 0");
}

void TrainConfig::validate() const {
  if (S < 1) throw ValidationError("TrainConfig: S must be >= 1");
  if (K_init < 1) throw ValidationError("TrainConfig: K_init must be >= 1");
  if (!(alpha > 0.0)) throw ValidationError("TrainConfig: alpha must be positive");
  if (!(learning_rate >= 0.0)) throw ValidationError("TrainConfig: learning_rate must be >= 0");
  if (!(weight_decay >= 0.0)) throw ValidationError("TrainConfig: weight_decay must be >= 0");
  if (batch_size < 1) throw ValidationError("TrainConfig: batch_size must be >= 1");
  if (epochs < 1) throw ValidationError("TrainConfig: epochs must be >= 1");
  if (init_scheme == InitScheme::shiftk_grid && S % 2 == 0) {
    throw ValidationError("TrainConfig: shiftk_grid needs odd S");
  }
}

Dataset gen_ar1(const ARDatasetSpec& spec) {
  spec.validate();
  Dataset data;
  data.length = static_cast<std::size_t>(spec.N);
  data.t_star = spec.t_star;
  data.inputs.resize(spec.num_samples * data.length);
  data.targets.resize(spec.num_samples);
  const double sigma = std::sqrt(1.0 - spec.rho * spec.rho);
  const std::size_t total = static_cast<std::size_t>(spec.burn_in) + data.length;

#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(spec.num_samples); ++i) {
    auto rng = stream_for(spec.seed, static_cast<std::uint64_t>(i), kDataSalt);
    std::uniform_real_distribution<double> first(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, sigma);
    double* row = data.inputs.data() + static_cast<std::size_t>(i) * data.length;
    double u = first(rng);
    for (std::size_t n = 0; n < total; ++n) {
      if (n > 0) u = spec.rho * u + noise(rng);
      if (n >= static_cast<std::size_t>(spec.burn_in)) row[n - spec.burn_in] = u;
    }
    data.targets[static_cast<std::size_t>(i)] = row[spec.t_star - 1];
  }
  return data;
}

FilterParams init_scheme(const TrainConfig& config) {
  config.validate();
  const double K = static_cast<double>(config.K_init);
  const double radius = std::exp(-config.alpha / K);
  const double mag = shiftk_weight_magnitude(config.K_init, config.alpha);
  const std::size_t S = static_cast<std::size_t>(config.S);

  if (config.init_scheme == InitScheme::shiftk_grid) {
    return shiftk_init(TaskSpec{config.S, config.K_init, 0.0, config.alpha});
  }

  // Phases for one member of each conjugate pair; an odd S gets a real pole
  // in the middle slot.
  auto rng = stream_for(config.seed, 0, kInitSalt);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  const std::size_t pairs = S / 2;
  std::vector<double> phase(pairs);
  for (auto& ph : phase) ph = eps(rng) * pi;

  std::vector<cplx> a(S), b(S);
  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t lo = p;
    const std::size_t hi = S - 1 - p;
    const cplx z = std::polar(radius, phase[p]);
    a[hi] = z;
    a[lo] = std::conj(z);
    // Pair index u counts outward from the middle, matching s = +-u.
    const std::size_t u = pairs - p;
    const double sign = (u % 2 == 0) ? 1.0 : -1.0;
    b[lo] = b[hi] = sign * mag;
  }
  if (S % 2 == 1) {
    a[pairs] = radius;
    b[pairs] = mag;
    return FilterParams(std::move(a), std::move(b), IndexConvention::symmetric_T);
  }
  return FilterParams(std::move(a), std::move(b), IndexConvention::one_to_S);
}

double empirical_mse(const FilterParams& p, const Dataset& data) {
  if (data.length == 0 || data.size() == 0) throw ValidationError("empirical_mse: empty dataset");
  const auto y = kernels::omp::predict(p.a(), p.b(), data.view());
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - data.targets[i];
    acc += r * r;
  }
  return acc / static_cast<double>(y.size());
}

Gradient loss_gradient(const FilterParams& p, const Dataset& data,
                       std::span<const std::size_t> rows) {
  if (rows.empty()) throw ValidationError("loss_gradient: empty batch");
  for (std::size_t r : rows) {
    if (r >= data.size()) throw ValidationError("loss_gradient: row index out of range");
  }
  auto g = kernels::omp::batch_gradient(p.a(), p.b(), data.view(), rows);
  return {std::move(g.grad_a), std::move(g.grad_b), g.mse};
}

TrainRun train(const TrainConfig& config, const ARDatasetSpec& data_spec) {
  return train(config, data_spec, gen_ar1(data_spec));
}

TrainRun train(const TrainConfig& config, const ARDatasetSpec& data_spec, const Dataset& data) {
  config.validate();
  data_spec.validate();
  if (data.size() == 0) throw ValidationError("train: empty dataset");

  const FilterParams initial = init_scheme(config);
  const bool symmetric = initial.conjugate_symmetric();
  std::vector<cplx> a(initial.a().begin(), initial.a().end());
  std::vector<cplx> b(initial.b().begin(), initial.b().end());

  auto rng = stream_for(config.seed, 0, kShuffleSalt);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double lr = config.learning_rate;
  const double wd = config.weight_decay;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t lo = 0; lo < order.size(); lo += batch) {
      const std::size_t hi = std::min(order.size(), lo + batch);
      const std::span<const std::size_t> rows(order.data() + lo, hi - lo);
      auto g = kernels::omp::batch_gradient(a, b, data.view(), rows);
      if (symmetric) {
        symmetrize(g.grad_a);
        symmetrize(g.grad_b);
      }
      for (std::size_t s = 0; s < a.size(); ++s) {
        a[s] = a[s] - lr * g.grad_a[s] - lr * wd * a[s];
        b[s] = b[s] - lr * g.grad_b[s] - lr * wd * b[s];
        const double mod = std::abs(a[s]);
        if (mod > kPoleClamp) a[s] *= kPoleClamp / mod;
      }
      if (!all_finite(a) || !all_finite(b)) {
        throw DivergenceError("train: parameters became non-finite at epoch " +
                                  std::to_string(epoch), epoch);
      }
    }
    const FilterParams current(a, b, initial.convention());
    const double mse = empirical_mse(current, data);
    if (!std::isfinite(mse) || mse > kDivergenceThreshold) {
      throw DivergenceError("train: MSE diverged at epoch " + std::to_string(epoch), epoch);
    }
    curve.push_back(mse);
  }

  FilterParams final_params(std::move(a), std::move(b), initial.convention());
  const double final_mse = curve.back();
  return TrainRun{config, data_spec, std::move(curve), std::move(final_params), final_mse};
}

std::string init_scheme_name(InitScheme scheme) {
  return scheme == InitScheme::shiftk_grid ? "shiftk_grid" : "random_phase";
}

InitScheme parse_init_scheme(const std::string& name) {
  if (name == "shiftk_grid") return InitScheme::shiftk_grid;
  if (name == "random_phase") return InitScheme::random_phase;
  throw ValidationError("unknown init scheme '" + name + "'");
}

void to_json(nlohmann::json& j, const ARDatasetSpec& s) {
  j = nlohmann::json{{"N", s.N},           {"t_star", s.t_star}, {"rho", s.rho},
                     {"num_samples", s.num_samples}, {"seed", s.seed}, {"burn_in", s.burn_in}};
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"init_scheme", init_scheme_name(c.init_scheme)},
                     {"K_init", c.K_init},
                     {"alpha", c.alpha},
                     {"S", c.S},
                     {"learning_rate", c.learning_rate},
                     {"weight_decay", c.weight_decay},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"seed", c.seed}};
}

void to_json(nlohmann::json& j, const TrainRun& r) {
  j = nlohmann::json{{"config", r.config},
                     {"data_spec", r.data_spec},
                     {"loss_curve", r.loss_curve},
                     {"final_mse", r.final_mse},
                     {"final_params", r.final_params}};
}

std::string loss_curve_csv(const TrainRun& run) {
  std::string out = "epoch,mse\n";
  for (std::size_t e = 0; e < run.loss_curve.size(); ++e) {
    out += std::to_string(e + 1) + "," + format_double(run.loss_curve[e]) + "\n";
  }
  return out;
}

}  // namespace shiftk
