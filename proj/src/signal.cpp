#include "shiftk/signal.hpp"

#include <cmath>
#include <numbers>

#include "shiftk/errors.hpp"

namespace shiftk {

using std::numbers::pi;

ComplexSeq::ComplexSeq(std::vector<cplx> values, long offset)
    : values_(std::move(values)), offset_(offset) {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("ComplexSeq: non-finite entry");
    }
  }
}

ComplexSeq ComplexSeq::delta(std::size_t at, std::size_t length) {
  if (at >= length) throw ValidationError("ComplexSeq::delta: index beyond length");
  std::vector<cplx> v(length, cplx{0.0, 0.0});
  v[at] = 1.0;
  return ComplexSeq(std::move(v));
}

FreqGrid FreqGrid::uniform_midpoint(std::size_t n) {
  std::vector<double> nodes(n);
  const double h = 2.0 * pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = -pi + (static_cast<double>(j) + 0.5) * h;
  }
  return FreqGrid(std::move(nodes), GridScheme::uniform_midpoint);
}

FreqGrid FreqGrid::uniform_endpoint(std::size_t n) {
  // [-pi, pi) only: the periodic trapezoid rule counts pi and -pi once.
  std::vector<double> nodes(n);
  const double h = 2.0 * pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = -pi + static_cast<double>(j) * h;
  }
  return FreqGrid(std::move(nodes), GridScheme::uniform_endpoint);
}

NoiseModel::NoiseModel(double rho) : rho_(rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ValidationError("NoiseModel: rho must lie in [0, 1)");
  }
}

double NoiseModel::gamma(long k) const {
  if (k == 0) return 1.0;
  return std::pow(rho_, static_cast<double>(std::labs(k)));
}

cplx ipow(cplx z, long n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

std::vector<cplx> dtft_eval(const ComplexSeq& seq, const FreqGrid& grid) {
  std::vector<cplx> out(grid.size());
  const auto vals = seq.values();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid[j];
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < vals.size(); ++n) {
      const double idx = static_cast<double>(static_cast<long>(n) + seq.offset());
      acc += vals[n] * std::polar(1.0, -w * idx);
    }
    out[j] = acc;
  }
  return out;
}

double autocorr_spectrum(const NoiseModel& model, double omega) {
  const double rho = model.rho();
  if (rho == 0.0) return 1.0;
  const cplx d = 1.0 - rho * std::polar(1.0, -omega);
  return (1.0 - rho * rho) / std::norm(d);
}

namespace {

template <typename T>
T uniform_mean(std::span<const T> samples, const FreqGrid& grid) {
  if (samples.size() != grid.size()) {
    throw ValidationError("weighted_quadrature: sample count differs from grid length");
  }
  if (samples.empty()) return T{};
  T acc{};
  for (const auto& v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

}  // namespace

double weighted_quadrature(std::span<const double> samples, const FreqGrid& grid) {
  return uniform_mean(samples, grid);
}

cplx weighted_quadrature(std::span<const cplx> samples, const FreqGrid& grid) {
  return uniform_mean(samples, grid);
}

double spectrum_window_mass(const NoiseModel& model, double half_width, std::size_t nodes) {
  if (!(half_width >= 0.0 && half_width <= pi)) {
    throw ValidationError("spectrum_window_mass: half_width must lie in [0, pi]");
  }
  if (nodes == 0) throw ValidationError("spectrum_window_mass: nodes must be positive");
  const double h = 2.0 * half_width / static_cast<double>(nodes);
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    acc += autocorr_spectrum(model, -half_width + (static_cast<double>(j) + 0.5) * h);
  }
  return acc * h / (2.0 * pi);
}

double geometric_tail_bound(double r, double weight_l1, std::size_t k_max) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("geometric_tail_bound: need 0 <= r < 1");
  if (r == 0.0) return 0.0;
  return weight_l1 * std::pow(r, static_cast<double>(k_max) + 1.0) / (1.0 - r);
}

}  // namespace shiftk
