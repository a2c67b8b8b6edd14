#pragma once

/// Data-parallel inner loops behind the loss and training code.
///
/// Every kernel exists twice: `serial` is the straightforward reference kept
/// for testing, `omp` is the OpenMP version used by the library. The OpenMP
/// reductions accumulate fixed-size blocks and add the block sums in order,
/// so their results do not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "shiftk/signal.hpp"

namespace shiftk::kernels {

/// Row-major samples (count x length) with one scalar target per row.
struct SampleView {
  std::span<const double> inputs;
  std::span<const double> targets;
  std::size_t length = 0;

  std::size_t count() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const { return inputs.subspan(i * length, length); }
};

struct BatchGradient {
  double mse = 0.0;
  std::vector<cplx> grad_a;
  std::vector<cplx> grad_b;
};

inline constexpr std::size_t kNodeBlock = 256;
inline constexpr std::size_t kRowBlock = 64;
inline constexpr std::size_t kSampleBlock = 16;

namespace serial {

/// Midpoint rule for (1/2pi) int |C(e^{iw}) - e^{-iKw}|^2 Gamma(e^{iw}) dw.
double freq_loss(std::span<const cplx> a, std::span<const cplx> b, long K, double rho,
                 std::size_t nodes);

/// sum_{k,k'} e_k conj(e_k') rho^{|k-k'|} (only the diagonal when rho = 0).
cplx weighted_double_sum(std::span<const cplx> e, double rho);

/// Re(y_N) of the diagonal recurrence for every row.
std::vector<double> predict(std::span<const cplx> a, std::span<const cplx> b,
                            const SampleView& data);

/// Mean squared error of Re(y_N) against the targets over `rows`, with
/// gradients 2 dL/d conj(a), 2 dL/d conj(b) (real-coordinate gradients packed
/// as re + i im).
BatchGradient batch_gradient(std::span<const cplx> a, std::span<const cplx> b,
                             const SampleView& data, std::span<const std::size_t> rows);

}  // namespace serial

namespace omp {

double freq_loss(std::span<const cplx> a, std::span<const cplx> b, long K, double rho,
                 std::size_t nodes);
cplx weighted_double_sum(std::span<const cplx> e, double rho);
std::vector<double> predict(std::span<const cplx> a, std::span<const cplx> b,
                            const SampleView& data);
BatchGradient batch_gradient(std::span<const cplx> a, std::span<const cplx> b,
                             const SampleView& data, std::span<const std::size_t> rows);

}  // namespace omp

/// Applies a thread count to subsequent OpenMP regions (<= 0 leaves the
/// runtime default).
void set_threads(int threads);
int max_threads();

}  // namespace shiftk::kernels
