#include "shiftk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shiftk::kernels {

using std::numbers::pi;

namespace {

double spectrum(double rho, cplx z) {
  if (rho == 0.0) return 1.0;
  return (1.0 - rho * rho) / std::norm(1.0 - rho * z);
}

double node_term(std::span<const cplx> a, std::span<const cplx> b, long K, double rho,
                 double omega) {
  const cplx z = std::polar(1.0, -omega);
  cplx c{0.0, 0.0};
  for (std::size_t s = 0; s < a.size(); ++s) c += b[s] / (1.0 - a[s] * z);
  const cplx target = std::polar(1.0, -static_cast<double>(K) * omega);
  return std::norm(c - target) * spectrum(rho, z);
}

double node_angle(std::size_t j, std::size_t nodes) {
  return -pi + (static_cast<double>(j) + 0.5) * (2.0 * pi / static_cast<double>(nodes));
}

std::vector<double> rho_powers(double rho, std::size_t n) {
  std::vector<double> p(n, 0.0);
  if (n == 0) return p;
  p[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) p[j] = p[j - 1] * rho;
  return p;
}

/// Row k of the double sum: e_k * sum_{k'} conj(e_k') rho^{|k-k'|}.
cplx double_sum_row(std::span<const cplx> e, std::span<const double> pw, std::size_t k) {
  cplx acc{0.0, 0.0};
  for (std::size_t kp = 0; kp < e.size(); ++kp) {
    const std::size_t d = k > kp ? k - kp : kp - k;
    acc += std::conj(e[kp]) * pw[d];
  }
  return e[k] * acc;
}

/// Final hidden state X_s = sum_k a_s^k u_{N-k} and its derivative
/// D_s = dX_s/da_s, accumulated by the recurrence.
void sensitivities(std::span<const cplx> a, std::span<const double> u, std::span<cplx> x,
                   std::span<cplx> dx) {
  std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
  std::fill(dx.begin(), dx.end(), cplx{0.0, 0.0});
  for (double un : u) {
    for (std::size_t s = 0; s < a.size(); ++s) {
      dx[s] = a[s] * dx[s] + x[s];
      x[s] = a[s] * x[s] + un;
    }
  }
}

double final_output(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> u,
                    std::span<cplx> x) {
  std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
  for (double un : u) {
    for (std::size_t s = 0; s < a.size(); ++s) x[s] = a[s] * x[s] + un;
  }
  double y = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) y += (b[s] * x[s]).real();
  return y;
}

struct Partial {
  double sq = 0.0;
  std::vector<cplx> ga;
  std::vector<cplx> gb;
};

void accumulate_sample(std::span<const cplx> a, std::span<const cplx> b, const SampleView& data,
                       std::size_t row, std::span<cplx> x, std::span<cplx> dx, Partial& out) {
  sensitivities(a, data.row(row), x, dx);
  double y = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) y += (b[s] * x[s]).real();
  const double r = y - data.targets[row];
  out.sq += r * r;
  for (std::size_t s = 0; s < a.size(); ++s) {
    out.gb[s] += r * std::conj(x[s]);
    out.ga[s] += r * std::conj(b[s] * dx[s]);
  }
}

BatchGradient finish(Partial total, std::size_t n) {
  BatchGradient g;
  const double scale = n == 0 ? 0.0 : 2.0 / static_cast<double>(n);
  g.mse = n == 0 ? 0.0 : total.sq / static_cast<double>(n);
  g.grad_a = std::move(total.ga);
  g.grad_b = std::move(total.gb);
  for (auto& v : g.grad_a) v *= scale;
  for (auto& v : g.grad_b) v *= scale;
  return g;
}

std::size_t block_count(std::size_t n, std::size_t block) { return (n + block - 1) / block; }

}  // namespace

namespace serial {

double freq_loss(std::span<const cplx> a, std::span<const cplx> b, long K, double rho,
                 std::size_t nodes) {
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) acc += node_term(a, b, K, rho, node_angle(j, nodes));
  return acc / static_cast<double>(nodes);
}

cplx weighted_double_sum(std::span<const cplx> e, double rho) {
  cplx acc{0.0, 0.0};
  if (rho == 0.0) {
    for (const auto& v : e) acc += std::norm(v);
    return acc;
  }
  const auto pw = rho_powers(rho, e.size());
  for (std::size_t k = 0; k < e.size(); ++k) acc += double_sum_row(e, pw, k);
  return acc;
}

std::vector<double> predict(std::span<const cplx> a, std::span<const cplx> b,
                            const SampleView& data) {
  std::vector<double> y(data.count());
  std::vector<cplx> x(a.size());
  for (std::size_t i = 0; i < data.count(); ++i) y[i] = final_output(a, b, data.row(i), x);
  return y;
}

BatchGradient batch_gradient(std::span<const cplx> a, std::span<const cplx> b,
                             const SampleView& data, std::span<const std::size_t> rows) {
  Partial total{0.0, std::vector<cplx>(a.size()), std::vector<cplx>(a.size())};
  std::vector<cplx> x(a.size()), dx(a.size());
  for (std::size_t row : rows) accumulate_sample(a, b, data, row, x, dx, total);
  return finish(std::move(total), rows.size());
}

}  // namespace serial

namespace omp {

double freq_loss(std::span<const cplx> a, std::span<const cplx> b, long K, double rho,
                 std::size_t nodes) {
  const std::size_t nblocks = block_count(nodes, kNodeBlock);
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < static_cast<long>(nblocks); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kNodeBlock;
    const std::size_t hi = std::min(nodes, lo + kNodeBlock);
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) acc += node_term(a, b, K, rho, node_angle(j, nodes));
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double acc = 0.0;
  for (double v : partial) acc += v;
  return acc / static_cast<double>(nodes);
}

cplx weighted_double_sum(std::span<const cplx> e, double rho) {
  if (rho == 0.0) return serial::weighted_double_sum(e, rho);
  const auto pw = rho_powers(rho, e.size());
  const std::size_t nblocks = block_count(e.size(), kRowBlock);
  std::vector<cplx> partial(nblocks, cplx{0.0, 0.0});
#pragma omp parallel for schedule(dynamic, 1)
  for (long blk = 0; blk < static_cast<long>(nblocks); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kRowBlock;
    const std::size_t hi = std::min(e.size(), lo + kRowBlock);
    cplx acc{0.0, 0.0};
    for (std::size_t k = lo; k < hi; ++k) acc += double_sum_row(e, pw, k);
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  cplx acc{0.0, 0.0};
  for (const auto& v : partial) acc += v;
  return acc;
}

std::vector<double> predict(std::span<const cplx> a, std::span<const cplx> b,
                            const SampleView& data) {
  std::vector<double> y(data.count());
#pragma omp parallel
  {
    std::vector<cplx> x(a.size());
#pragma omp for schedule(static)
    for (long i = 0; i < static_cast<long>(data.count()); ++i) {
      y[static_cast<std::size_t>(i)] = final_output(a, b, data.row(static_cast<std::size_t>(i)), x);
    }
  }
  return y;
}

BatchGradient batch_gradient(std::span<const cplx> a, std::span<const cplx> b,
                             const SampleView& data, std::span<const std::size_t> rows) {
  const std::size_t S = a.size();
  const std::size_t nblocks = block_count(rows.size(), kSampleBlock);
  std::vector<Partial> partial(nblocks, Partial{0.0, std::vector<cplx>(S), std::vector<cplx>(S)});
#pragma omp parallel
  {
    std::vector<cplx> x(S), dx(S);
#pragma omp for schedule(static)
    for (long blk = 0; blk < static_cast<long>(nblocks); ++blk) {
      const std::size_t lo = static_cast<std::size_t>(blk) * kSampleBlock;
      const std::size_t hi = std::min(rows.size(), lo + kSampleBlock);
      auto& out = partial[static_cast<std::size_t>(blk)];
      for (std::size_t i = lo; i < hi; ++i) accumulate_sample(a, b, data, rows[i], x, dx, out);
    }
  }
  Partial total{0.0, std::vector<cplx>(S), std::vector<cplx>(S)};
  for (const auto& p : partial) {
    total.sq += p.sq;
    for (std::size_t s = 0; s < S; ++s) {
      total.ga[s] += p.ga[s];
      total.gb[s] += p.gb[s];
    }
  }
  return finish(std::move(total), rows.size());
}

}  // namespace omp

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace shiftk::kernels
