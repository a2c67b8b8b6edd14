#pragma once

/// Closed-form large-K predictions for the shift-K grid filter.

#include <complex>
#include <string>

#include "shiftk/filter.hpp"

namespace shiftk {

struct UpperBoundEstimate {
  double value = 1.0;
  /// Set when S > K, outside the S/K -> 0 regime the formula describes.
  bool out_of_regime = false;
};

/// 1 - e^{-2 alpha} (e^{2 alpha} - e^{-2 alpha}) / 2 * S / K.
UpperBoundEstimate upper_bound_asymptotic(const TaskSpec& spec);

/// Limit of C(e^{iw}) at rescaled frequency Omega = K w / pi for the grid
/// filter with S = 2T + 1 poles:
///   |Omega| < T:  e^{-a}(e^{2a} - e^{-2a}) / (e^{a} e^{i pi Omega} - e^{-a} e^{-i pi Omega})
///   |Omega| > T:  e^{-a}(e^{2a} - e^{-2a})/2 * i (-1)^{T+1} 2n / (2 pi (n - T)(n + T)),
///                 n = floor(Omega)
/// Throws DomainError within 1e-6 of |Omega| = T and wherever n = +-T makes
/// the exterior branch singular.
cplx window_limit(double Omega, int T, double alpha);

/// 1 - (2/pi) arctan((1 + rho)/(1 - rho) tan(pi S / K)); DomainError if S/K >= 1/2.
double ideal_window_loss(const TaskSpec& spec);

/// Omega,T,K,alpha,re_limit,im_limit,re_transfer,im_transfer
std::string window_csv_header();
std::string window_csv_row(double Omega, int T, int K, double alpha, cplx limit, cplx transfer);

}  // namespace shiftk
