#pragma once

/// Randomized invariant suite shared by the `verify` CLI command and the
/// tests, plus the random-configuration generators it relies on.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftk/bounds.hpp"
#include "shiftk/experiments.hpp"
#include "shiftk/filter.hpp"

namespace shiftk {

/// S poles with |a| <= max_radius, pairwise at least min_separation apart.
PoleVector random_poles(std::mt19937_64& rng, std::size_t S, double max_radius,
                        double min_separation);

/// Random stable parameters: poles as above, weights with N(0,1) parts.
FilterParams random_params(std::mt19937_64& rng, std::size_t S, double max_radius,
                           double min_separation);

/// Conjugate-symmetric parameters in symmetric_T layout (S odd).
FilterParams random_symmetric_params(std::mt19937_64& rng, std::size_t S, double max_radius);

/// ||g - g_fd|| / ||g_fd|| where g_fd is the central finite difference of the
/// batch MSE over every real coordinate of a and b. The MSE is evaluated with
/// the forward-only serial kernel, independent of the analytic gradient.
double gradient_check_error(const FilterParams& p, const Dataset& data,
                            std::span<const std::size_t> rows, double step = 1e-6);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Added to the off-diagonal Cauchy entries before the displacement check.
  double perturb_cauchy = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verification(const VerifyOptions& options);

void to_json(nlohmann::json& j, const CheckResult& c);
void to_json(nlohmann::json& j, const VerifyReport& r);

}  // namespace shiftk
