#pragma once

/// Complex sequences, DTFT evaluation on frequency grids, the AR(1)
/// autocorrelation spectrum and the (1/2pi) integral over [-pi, pi].

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shiftk {

using cplx = std::complex<double>;

/// Finite truncation of a causal sequence; values[j] sits at index offset + j.
class ComplexSeq {
public:
  ComplexSeq() = default;
  explicit ComplexSeq(std::vector<cplx> values, long offset = 0);

  static ComplexSeq delta(std::size_t at, std::size_t length);

  std::span<const cplx> values() const { return values_; }
  long offset() const { return offset_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const cplx& operator[](std::size_t j) const { return values_[j]; }

private:
  std::vector<cplx> values_;
  long offset_ = 0;
};

enum class GridScheme { uniform_midpoint, uniform_endpoint };

/// Strictly increasing angles in [-pi, pi]. Both schemes are equispaced
/// n-point rules for periodic integrands on [-pi, pi).
class FreqGrid {
public:
  static FreqGrid uniform_midpoint(std::size_t n);
  static FreqGrid uniform_endpoint(std::size_t n);

  std::span<const double> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  GridScheme scheme() const { return scheme_; }
  double operator[](std::size_t j) const { return nodes_[j]; }

private:
  FreqGrid(std::vector<double> nodes, GridScheme scheme)
      : nodes_(std::move(nodes)), scheme_(scheme) {}
  std::vector<double> nodes_;
  GridScheme scheme_;
};

inline constexpr std::size_t kDefaultQuadratureNodes = 4096;

/// Autocorrelation gamma(k) = rho^|k| of a stationary AR(1) input.
class NoiseModel {
public:
  NoiseModel() = default;
  explicit NoiseModel(double rho);

  double rho() const { return rho_; }
  double gamma(long k) const;
  bool white() const { return rho_ == 0.0; }

private:
  double rho_ = 0.0;
};

/// z^n by repeated squaring, with 0^0 = 1.
cplx ipow(cplx z, long n);

/// U(e^{iw_j}) = sum_n u_n e^{-i w_j n}.
std::vector<cplx> dtft_eval(const ComplexSeq& seq, const FreqGrid& grid);

/// Gamma(e^{iw}) = (1 - rho^2) / |1 - rho e^{-iw}|^2.
double autocorr_spectrum(const NoiseModel& model, double omega);

/// (1/2pi) * integral over [-pi, pi] of the sampled function.
double weighted_quadrature(std::span<const double> samples, const FreqGrid& grid);
cplx weighted_quadrature(std::span<const cplx> samples, const FreqGrid& grid);

/// (1/2pi) * integral of Gamma over [-half_width, half_width], midpoint rule.
double spectrum_window_mass(const NoiseModel& model, double half_width,
                            std::size_t nodes = kDefaultQuadratureNodes);

/// Bound on sum_{k > k_max} |c_k| for c_k = sum_s b_s a_s^k, given
/// r = max|a_s| < 1 and weight_l1 = sum|b_s|.
double geometric_tail_bound(double r, double weight_l1, std::size_t k_max);

}  // namespace shiftk
