#pragma once

/// Synthetic copy task: AR(1) sequences, the two initialization schemes,
/// and minibatch gradient descent on the diagonal linear recurrence.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftk/filter.hpp"
#include "shiftk/kernels.hpp"

namespace shiftk {

struct ARDatasetSpec {
  int N = 300;
  int t_star = 50;
  double rho = 0.0;
  std::size_t num_samples = 2000;
  std::uint64_t seed = 0;
  /// Extra leading steps generated and discarded (0 keeps the u_1 ~ U(0, 1) start).
  int burn_in = 0;

  void validate() const;
  int k_star() const { return N - t_star; }
};

/// Row-major sequences u_1..u_N with target u_{t_star} per row.
struct Dataset {
  std::size_t length = 0;
  int t_star = 1;
  std::vector<double> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
  std::span<const double> sequence(std::size_t i) const {
    return std::span<const double>(inputs).subspan(i * length, length);
  }
  kernels::SampleView view() const { return {inputs, targets, length}; }
};

enum class InitScheme { shiftk_grid, random_phase };

struct TrainConfig {
  InitScheme init_scheme = InitScheme::shiftk_grid;
  int K_init = 250;
  double alpha = 1.0;
  int S = 33;
  double learning_rate = 1e-5;
  double weight_decay = 1e-5;
  int batch_size = 50;
  int epochs = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainRun {
  TrainConfig config;
  ARDatasetSpec data_spec;
  std::vector<double> loss_curve;
  FilterParams final_params;
  double final_mse = 0.0;
};

struct Gradient {
  std::vector<cplx> grad_a;
  std::vector<cplx> grad_b;
  double mse = 0.0;
};

/// u_n = rho u_{n-1} + eps_n, eps_n ~ N(0, 1 - rho^2), u_1 ~ U(0, 1).
/// Sample i draws from its own stream seeded by (seed, i), so the output is
/// bitwise reproducible and independent of the thread count.
Dataset gen_ar1(const ARDatasetSpec& spec);

/// shiftk_grid: a_s = e^{-alpha/K} e^{i pi s / K}. random_phase: the same
/// modulus with phases eps * pi, eps ~ U(-1, 1), drawn for one member of each
/// conjugate pair. Both use b = (-1)^u e^{-alpha}(e^{2 alpha} - e^{-2 alpha}) / (2K).
FilterParams init_scheme(const TrainConfig& config);

/// Mean of (Re(y_N) - u_{t_star})^2 over the dataset.
double empirical_mse(const FilterParams& p, const Dataset& data);

/// Gradients of the empirical MSE over `rows`, packed as dL/dRe + i dL/dIm
/// (= 2 dL/d conj) for each complex a_s and b_s.
Gradient loss_gradient(const FilterParams& p, const Dataset& data,
                       std::span<const std::size_t> rows);

/// Minibatch gradient descent with decoupled weight decay and a radial clamp
/// keeping |a_s| <= 1 - 1e-6. Throws DivergenceError when the epoch MSE
/// exceeds 1e6 or a parameter stops being finite.
TrainRun train(const TrainConfig& config, const ARDatasetSpec& data_spec);
TrainRun train(const TrainConfig& config, const ARDatasetSpec& data_spec, const Dataset& data);

inline constexpr double kPoleClamp = 1.0 - 1e-6;
inline constexpr double kDivergenceThreshold = 1e6;

void to_json(nlohmann::json& j, const ARDatasetSpec& s);
void to_json(nlohmann::json& j, const TrainConfig& c);
void to_json(nlohmann::json& j, const TrainRun& r);

std::string init_scheme_name(InitScheme scheme);
InitScheme parse_init_scheme(const std::string& name);

/// "epoch,mse" rows, epochs counted from 1.
std::string loss_curve_csv(const TrainRun& run);

}  // namespace shiftk
