#include "shiftk/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "shiftk/errors.hpp"
#include "shiftk/loss.hpp"

namespace shiftk {

using std::numbers::pi;

namespace {

double window_gain(double alpha) {
  return std::exp(-alpha) * (std::exp(2.0 * alpha) - std::exp(-2.0 * alpha));
}

}  // namespace

UpperBoundEstimate upper_bound_asymptotic(const TaskSpec& spec) {
  spec.validate();
  if (spec.K < 1) throw ValidationError("upper_bound_asymptotic: K must be >= 1");
  const double coeff = std::exp(-2.0 * spec.alpha) *
                       (std::exp(2.0 * spec.alpha) - std::exp(-2.0 * spec.alpha)) / 2.0;
  UpperBoundEstimate out;
  out.value = 1.0 - coeff * static_cast<double>(spec.S) / static_cast<double>(spec.K);
  out.out_of_regime = spec.S > spec.K;
  return out;
}

cplx window_limit(double Omega, int T, double alpha) {
  if (T < 0) throw ValidationError("window_limit: T must be >= 0");
  if (!(alpha > 0.0)) throw ValidationError("window_limit: alpha must be positive");
  if (!std::isfinite(Omega)) throw DomainError("window_limit: Omega must be finite");
  const double t = static_cast<double>(T);
  if (std::abs(std::abs(Omega) - t) < 1e-6) {
    throw DomainError("window_limit: |Omega| = T is excluded");
  }
  const double gain = window_gain(alpha);
  if (std::abs(Omega) < t) {
    const cplx denom = std::exp(alpha) * std::polar(1.0, pi * Omega) -
                       std::exp(-alpha) * std::polar(1.0, -pi * Omega);
    return gain / denom;
  }
  const double n = std::floor(Omega);
  if (n == t || n == -t) {
    throw DomainError("window_limit: exterior branch singular for floor(Omega) = +-T");
  }
  const double sign = ((T + 1) % 2 == 0) ? 1.0 : -1.0;
  const double mag = gain / 2.0 * sign * 2.0 * n / (2.0 * pi * (n - t) * (n + t));
  return {0.0, mag};
}

double ideal_window_loss(const TaskSpec& spec) {
  spec.validate();
  if (spec.K < 1) throw ValidationError("ideal_window_loss: K must be >= 1");
  const double ratio = static_cast<double>(spec.S) / static_cast<double>(spec.K);
  if (ratio >= 0.5) throw DomainError("ideal_window_loss: needs pi S / K < pi / 2");
  const double arg = (1.0 + spec.rho) / (1.0 - spec.rho) * std::tan(pi * ratio);
  return 1.0 - 2.0 / pi * std::atan(arg);
}

std::string window_csv_header() {
  return "Omega,T,K,alpha,re_limit,im_limit,re_transfer,im_transfer";
}

std::string window_csv_row(double Omega, int T, int K, double alpha, cplx limit, cplx transfer) {
  return format_double(Omega) + "," + std::to_string(T) + "," + std::to_string(K) + "," +
         format_double(alpha) + "," + format_double(limit.real()) + "," +
         format_double(limit.imag()) + "," + format_double(transfer.real()) + "," +
         format_double(transfer.imag());
}

}  // namespace shiftk
