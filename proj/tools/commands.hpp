#pragma once

// Command implementations behind the `shiftk` executable. Everything here
// takes explicit streams so the tests can drive it in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftk/experiments.hpp"
#include "shiftk/filter.hpp"

namespace shiftk::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool full = false;
};

struct LossConfig {
  std::vector<int> S{51};
  std::vector<int> K{500};
  std::vector<double> rho{0.0};
  std::vector<double> alpha{1.0};
  // "asymptotic" keeps the closed-form grid weights, "optimal" solves for
  // the weights minimizing the white-noise loss on the same poles.
  std::string b_mode = "asymptotic";
  std::optional<std::filesystem::path> params;
  std::size_t nodes = 0;
  double oracle_tol = 1e-10;
  // 0 picks 400000 terms for white inputs and 20000 otherwise (the
  // correlated double sum is quadratic in the horizon).
  std::size_t oracle_max_terms = 0;
};

struct WindowConfig {
  int S = 51;
  int K = 500;
  double alpha = 1.0;
  double omega_min = -50.0;
  double omega_max = 50.0;
  std::size_t points = 800;
};

struct TrainPlan {
  std::string mode = "compare";
  std::vector<double> rho{0.0, 0.2, 0.4, 0.6, 0.8};
  std::vector<int> K_init{125, 250, 500, 1000, 2000, 4000, 8000};
  std::vector<std::uint64_t> seeds{0, 1, 2};
  ARDatasetSpec data;
  TrainConfig train;
  // State size for random_phase runs; 0 reuses train.S.
  int S_random = 0;
};

LossConfig parse_loss_config(const nlohmann::json& j);
WindowConfig parse_window_config(const nlohmann::json& j);
TrainPlan parse_train_plan(const nlohmann::json& j, bool full);

/// CSV text (header plus one row per sweep point, in sweep order).
std::string run_loss(const LossConfig& config);
std::string run_window(const WindowConfig& config);

struct TrainOutput {
  std::vector<TrainRun> runs;
  std::string summary_csv;
  std::string curves_csv;
};
TrainOutput run_train(const TrainPlan& plan);

/// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shiftk::cli
