#pragma once

/// Approximation error of a diagonal recurrence against the shift-K filter
/// under white (rho = 0) and AR(1) (gamma(k) = rho^|k|) inputs.
///
/// Three independent routes are provided and cross-checked by the tests:
/// closed forms obtained by summing geometric series, midpoint quadrature of
/// the frequency-domain loss, and direct truncation of the time-domain
/// double sum.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "shiftk/filter.hpp"

namespace shiftk {

struct LossReport {
  double time_closed = 0.0;
  double freq_quadrature = 0.0;
  double oracle_truncated = 0.0;
  double oracle_tail_bound = 0.0;
  double lower_bound = 0.0;
  std::optional<double> upper_asymptotic;
};

struct TruncatedLoss {
  double value = 0.0;
  double tail_bound = 0.0;
};

inline constexpr std::size_t kDefaultLossNodes = 8192;

/// 1 + sum_{s,s'} b_s conj(b_s') / (1 - a_s conj(a_s')) - 2 Re(sum_s b_s a_s^K).
double loss_white_closed(const FilterParams& p, int K);

/// AR(1) closed form with w_s = b_s a_s / (a_s - rho) and the extra pole
/// a_{S+1} = rho carrying w_{S+1} = -rho sum_s w_s / a_s.
/// Throws SingularConfigurationError when some a_s is within 1e-9 of rho or 0.
double loss_auto_closed(const FilterParams& p, int K, double rho);

/// Midpoint quadrature of the frequency-domain loss on `nodes` points.
double loss_freq_quadrature(const FilterParams& p, int K, double rho,
                            std::size_t nodes = kDefaultLossNodes);

/// Node count used when the caller does not pick one: 8192 / (1 - rho),
/// capped at 2^20.
std::size_t default_loss_nodes(double rho);

/// default_loss_nodes(rho) raised to 2K + 32 / (1 - max|a_s|) so slowly
/// decaying kernels do not alias; capped at 2^22.
std::size_t adaptive_loss_nodes(const FilterParams& p, int K, double rho);

/// Direct double sum over k, k' <= k_max and a bound on what was dropped.
TruncatedLoss loss_truncated_oracle(const FilterParams& p, int K, double rho, std::size_t k_max);

/// Smallest k_max >= K whose tail bound is below `tol`, or `cap` if none is.
std::size_t oracle_horizon(const FilterParams& p, int K, double tol, std::size_t cap);

void to_json(nlohmann::json& j, const LossReport& r);

/// S,K,rho,alpha,time_closed,freq_quadrature,oracle_truncated,oracle_tail_bound,lower_bound,upper_asymptotic
std::string loss_csv_header();
std::string loss_csv_row(const TaskSpec& spec, const LossReport& r);

/// Locale-independent shortest round-trip formatting with 17 significant digits.
std::string format_double(double v);

}  // namespace shiftk
