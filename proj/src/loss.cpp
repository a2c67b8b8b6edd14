#include "shiftk/loss.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "shiftk/errors.hpp"
#include "shiftk/kernels.hpp"

namespace shiftk {

namespace {

constexpr double kImagTolerance = 1e-10;
constexpr double kSingularDistance = 1e-9;

// `scale` is the sum of term magnitudes, i.e. the size of rounding error
// that cancellation can leave behind.
double checked_real(cplx z, double scale, const char* where) {
  if (std::abs(z.imag()) > kImagTolerance * std::max({1.0, std::abs(z.real()), scale})) {
    throw NumericError(std::string(where) + ": imaginary residue " + std::to_string(z.imag()) +
                       " in a real-valued closed form");
  }
  return z.real();
}

void check_K(int K) {
  if (K < 0) throw ValidationError("loss: K must be >= 0");
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("loss: rho must lie in [0, 1)");
}

/// sum_{s,s'} w_s conj(w_s') / (1 - a_s conj(a_s')).
/// Accumulated in long double: with large, cancelling weights the terms can
/// be many orders of magnitude above the result.
cplx gram_form(std::span<const cplx> a, std::span<const cplx> w, double& scale) {
  using ld = std::complex<long double>;
  ld acc{0.0L, 0.0L};
  long double mag = 0.0L;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const ld as = a[s], ws = w[s];
    for (std::size_t t = 0; t < a.size(); ++t) {
      const ld term = ws * std::conj(ld(w[t])) / (1.0L - as * std::conj(ld(a[t])));
      acc += term;
      mag += std::abs(term);
    }
  }
  scale += static_cast<double>(mag);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

double loss_white_closed(const FilterParams& p, int K) {
  check_K(K);
  const auto a = p.a();
  const auto b = p.b();
  cplx cross{0.0, 0.0};
  for (std::size_t s = 0; s < a.size(); ++s) cross += b[s] * ipow(a[s], K);
  double magnitude = 0.0;
  const cplx total = 1.0 + gram_form(a, b, magnitude) - 2.0 * cross.real();
  return checked_real(total, magnitude, "loss_white_closed");
}

double loss_auto_closed(const FilterParams& p, int K, double rho) {
  check_K(K);
  check_rho(rho);
  const auto a = p.a();
  const auto b = p.b();
  const std::size_t S = a.size();
  for (const auto& z : a) {
    if (std::abs(z - rho) < kSingularDistance || std::abs(z) < kSingularDistance) {
      throw SingularConfigurationError(
          "loss_auto_closed: a pole coincides with rho or 0; use loss_freq_quadrature");
    }
  }

  std::vector<cplx> poles(a.begin(), a.end());
  std::vector<cplx> w(S + 1);
  cplx constraint{0.0, 0.0};
  for (std::size_t s = 0; s < S; ++s) {
    w[s] = b[s] * a[s] / (a[s] - rho);
    constraint += w[s] / a[s];
  }
  poles.push_back(rho);
  w[S] = -rho * constraint;

  cplx cross{0.0, 0.0};
  for (std::size_t s = 0; s <= S; ++s) {
    cross += w[s] * ipow(poles[s], K) / (1.0 - poles[s] * rho);
  }
  const double scale = 1.0 - rho * rho;
  double magnitude = 0.0;
  const cplx total = 1.0 - 2.0 * scale * cross.real() + scale * gram_form(poles, w, magnitude);
  return checked_real(total, scale * magnitude, "loss_auto_closed");
}

double loss_freq_quadrature(const FilterParams& p, int K, double rho, std::size_t nodes) {
  check_K(K);
  check_rho(rho);
  if (nodes < 64) throw ValidationError("loss_freq_quadrature: need at least 64 nodes");
  return kernels::omp::freq_loss(p.a(), p.b(), K, rho, nodes);
}

std::size_t default_loss_nodes(double rho) {
  check_rho(rho);
  const double n = std::ceil(static_cast<double>(kDefaultLossNodes) / (1.0 - rho));
  return static_cast<std::size_t>(std::min(n, static_cast<double>(1u << 20)));
}

std::size_t adaptive_loss_nodes(const FilterParams& p, int K, double rho) {
  check_K(K);
  const double base = static_cast<double>(default_loss_nodes(rho));
  const double decay = 32.0 / (1.0 - p.max_pole_modulus());
  const double n = std::max(base, std::ceil(2.0 * K + decay));
  return static_cast<std::size_t>(std::min(n, static_cast<double>(1u << 22)));
}

namespace {

double oracle_tail(const FilterParams& p, std::size_t k_max) {
  const double r = p.max_pole_modulus();
  const double B = p.weight_l1();
  if (r == 0.0) return 0.0;
  // Every dropped pair has k > k_max or k' > k_max; rho^|k-k'| <= 1.
  return 2.0 * geometric_tail_bound(r, B, k_max) * (1.0 + B / (1.0 - r));
}

}  // namespace

TruncatedLoss loss_truncated_oracle(const FilterParams& p, int K, double rho, std::size_t k_max) {
  check_K(K);
  check_rho(rho);
  if (k_max < static_cast<std::size_t>(K)) {
    throw ValidationError("loss_truncated_oracle: k_max < K would drop the target impulse");
  }
  const auto c = impulse_response(p, k_max);
  std::vector<cplx> e(c.values().begin(), c.values().end());
  e[static_cast<std::size_t>(K)] -= 1.0;
  const cplx total = kernels::omp::weighted_double_sum(e, rho);
  return {total.real(), oracle_tail(p, k_max)};
}

std::size_t oracle_horizon(const FilterParams& p, int K, double tol, std::size_t cap) {
  const std::size_t lo = static_cast<std::size_t>(std::max(K, 0));
  if (oracle_tail(p, lo) <= tol) return lo;
  if (oracle_tail(p, cap) > tol) return std::max(cap, lo);
  std::size_t left = lo, right = cap;
  while (right - left > 1) {
    const std::size_t mid = left + (right - left) / 2;
    (oracle_tail(p, mid) <= tol ? right : left) = mid;
  }
  return right;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void to_json(nlohmann::json& j, const LossReport& r) {
  j = nlohmann::json{
      {"time_closed", r.time_closed},
      {"freq_quadrature", r.freq_quadrature},
      {"oracle_truncated", r.oracle_truncated},
      {"oracle_tail_bound", r.oracle_tail_bound},
      {"lower_bound", r.lower_bound},
      {"upper_asymptotic", r.upper_asymptotic ? nlohmann::json(*r.upper_asymptotic) : nlohmann::json()},
  };
}

std::string loss_csv_header() {
  return "S,K,rho,alpha,time_closed,freq_quadrature,oracle_truncated,oracle_tail_bound,"
         "lower_bound,upper_asymptotic";
}

std::string loss_csv_row(const TaskSpec& spec, const LossReport& r) {
  std::string row = std::to_string(spec.S) + "," + std::to_string(spec.K) + "," +
                    format_double(spec.rho) + "," + format_double(spec.alpha);
  for (double v : {r.time_closed, r.freq_quadrature, r.oracle_truncated, r.oracle_tail_bound,
                   r.lower_bound}) {
    row += "," + format_double(v);
  }
  row += ",";
  if (r.upper_asymptotic) row += format_double(*r.upper_asymptotic);
  return row;
}

}  // namespace shiftk
