#include "shiftk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shiftk/errors.hpp"

namespace shiftk {

using std::numbers::pi;

namespace {

constexpr double kMinPoleSeparation = 1e-12;
constexpr double kRhoFloor = 1e-6;
constexpr double kResidualTolerance = 1e-8;

void check_poles(const PoleVector& a) {
  if (a.empty()) throw ValidationError("cauchy_gram: empty pole vector");
  for (const auto& z : a) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("cauchy_gram: non-finite pole");
    }
    if (std::abs(z) >= 1.0) throw StabilityError("cauchy_gram: pole with |a_s| >= 1");
  }
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t t = s + 1; t < a.size(); ++t) {
      if (std::abs(a[s] - a[t]) <= kMinPoleSeparation) {
        throw DegenerateError("cauchy_gram: coincident poles");
      }
    }
  }
}

Eigen::VectorXcd powers(const PoleVector& a, int K) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t s = 0; s < a.size(); ++s) v(static_cast<Eigen::Index>(s)) = ipow(a[s], K);
  return v;
}

}  // namespace

CauchyGram::CauchyGram(PoleVector poles) : poles_(std::move(poles)) {
  check_poles(poles_);
  const auto n = static_cast<Eigen::Index>(poles_.size());
  matrix_.resize(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    matrix_(s, s) = 1.0 / (1.0 - std::norm(poles_[static_cast<std::size_t>(s)]));
    for (Eigen::Index t = s + 1; t < n; ++t) {
      const cplx v = 1.0 / (1.0 - poles_[static_cast<std::size_t>(s)] *
                                      std::conj(poles_[static_cast<std::size_t>(t)]));
      matrix_(s, t) = v;
      matrix_(t, s) = std::conj(v);
    }
  }
}

double CauchyGram::displacement_residual() const {
  const auto n = matrix_.rows();
  double worst = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const cplx as = poles_[static_cast<std::size_t>(s)];
      const cplx at = poles_[static_cast<std::size_t>(t)];
      const cplx r = matrix_(s, t) - as * matrix_(s, t) * std::conj(at) - 1.0;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

Eigen::VectorXd CauchyGram::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double CauchyGram::condition_number() const {
  const auto ev = eigenvalues();
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

CauchyGram CauchyGram::perturbed(double eps) const {
  Eigen::MatrixXcd m = matrix_;
  for (Eigen::Index s = 0; s < m.rows(); ++s) {
    for (Eigen::Index t = 0; t < m.cols(); ++t) {
      if (s != t) m(s, t) += eps;
    }
  }
  return CauchyGram(poles_, std::move(m));
}

std::complex<long double> CauchyGram::entry(Eigen::Index s, Eigen::Index t) const {
  if (!exact_) return matrix_(s, t);
  const std::complex<long double> as = poles_[static_cast<std::size_t>(s)];
  const std::complex<long double> at = poles_[static_cast<std::size_t>(t)];
  return 1.0L / (1.0L - as * std::conj(at));
}

Eigen::VectorXcd CauchyGram::solve(const Eigen::VectorXcd& rhs) const {
  const double cond = condition_number();
  if (!(cond <= kMaxCondition)) {
    throw ConditioningError("CauchyGram: condition number above 1e12", cond);
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(matrix_);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("CauchyGram: Cholesky factorization failed", cond);
  }
  Eigen::VectorXcd x = llt.solve(rhs);
  const Eigen::Index n = matrix_.rows();
  Eigen::VectorXcd r(n);
  for (int step = 0; step < 2; ++step) {
    for (Eigen::Index s = 0; s < n; ++s) {
      std::complex<long double> acc = rhs(s);
      for (Eigen::Index t = 0; t < n; ++t) acc -= entry(s, t) * std::complex<long double>(x(t));
      r(s) = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    x += llt.solve(r);
  }
  return x;
}

CauchyGram cauchy_gram(const PoleVector& a) { return CauchyGram(a); }

std::vector<cplx> optimal_b(const PoleVector& a, int K) {
  if (K < 0) throw ValidationError("optimal_b: K must be >= 0");
  const CauchyGram gram(a);
  const Eigen::VectorXcd aK = powers(a, K);
  const Eigen::VectorXcd x = gram.solve(aK);
  // conj(C) conj(x) = conj(a)^K, so b = conj(x) solves the normal equations.
  // The residual is judged normwise: relative to |C| |x| + |a^K|.
  const double residual = (gram.matrix() * x - aK).norm();
  const double scale = gram.matrix().norm() * x.norm() + aK.norm();
  if (residual > kResidualTolerance * scale) {
    throw ConditioningError("optimal_b: normal-equation residual too large",
                            gram.condition_number());
  }
  std::vector<cplx> b(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) b[s] = std::conj(x(static_cast<Eigen::Index>(s)));
  return b;
}

double f_criterion(const PoleVector& a, int K) {
  if (K < 0) throw ValidationError("f_criterion: K must be >= 0");
  const CauchyGram gram(a);
  const Eigen::VectorXcd aK = powers(a, K);
  const Eigen::VectorXcd x = gram.solve(aK);
  long double acc = 0.0L;
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    acc += static_cast<long double>(aK(s).real()) * x(s).real() +
           static_cast<long double>(aK(s).imag()) * x(s).imag();
  }
  return static_cast<double>(acc);
}

double lower_bound_white(int S, int K) {
  if (S < 1 || K < 0) throw ValidationError("lower_bound_white: need S >= 1, K >= 0");
  return std::max(0.0, 1.0 - static_cast<double>(S) / (static_cast<double>(K) + 1.0));
}

double lower_bound_auto(int S, int K, double rho) {
  if (S < 1 || K < 1) throw ValidationError("lower_bound_auto: need S >= 1, K >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("lower_bound_auto: rho must lie in [0, 1)");
  return std::max(0.0, 1.0 - 3.0 * static_cast<double>(S) / (static_cast<double>(K) * (1.0 - rho)));
}

double h_criterion(const PoleVector& a, int K, double rho) {
  if (K < 0) throw ValidationError("h_criterion: K must be >= 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("h_criterion: rho must lie in [0, 1)");
  if (rho <= kRhoFloor) return 1.0 - f_criterion(a, K);
  for (const auto& z : a) {
    if (std::abs(z - rho) <= 1e-9) throw DegenerateError("h_criterion: a pole collides with rho");
  }
  PoleVector augmented = a;
  augmented.emplace_back(rho, 0.0);
  const CauchyGram gram(augmented);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(augmented.size()));
  for (std::size_t s = 0; s < augmented.size(); ++s) {
    v(static_cast<Eigen::Index>(s)) = ipow(augmented[s], K) / (1.0 - augmented[s] * rho);
  }
  const Eigen::VectorXcd x = gram.solve(v);
  return 1.0 - (1.0 - rho * rho) * v.dot(x).real();
}

cplx blaschke_eval(const PoleVector& a, cplx z) {
  cplx acc{1.0, 0.0};
  for (const auto& p : a) acc *= (p - z) / (1.0 - z * std::conj(p));
  return acc;
}

std::vector<cplx> unit_weights(const CauchyGram& gram) {
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(gram.size()));
  const Eigen::VectorXcd u = gram.solve(ones);
  return {u.data(), u.data() + u.size()};
}

std::pair<double, double> verify_semi_parseval(const ComplexSeq& w, std::size_t nodes) {
  if (nodes < 256) throw ValidationError("verify_semi_parseval: need at least 256 nodes");
  if (w.offset() < 0) throw ValidationError("verify_semi_parseval: sequence must be causal");
  const auto vals = w.values();
  double lhs = 0.0;
  for (std::size_t n = 0; n < vals.size(); ++n) {
    lhs += static_cast<double>(static_cast<long>(n) + w.offset()) * std::norm(vals[n]);
  }
  const auto grid = FreqGrid::uniform_midpoint(nodes);
  std::vector<cplx> integrand(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    cplx W{0.0, 0.0}, dW{0.0, 0.0};
    for (std::size_t n = 0; n < vals.size(); ++n) {
      const double L = static_cast<double>(static_cast<long>(n) + w.offset());
      const cplx term = vals[n] * std::polar(1.0, -grid[j] * L);
      W += term;
      dW += cplx{0.0, -L} * term;
    }
    integrand[j] = dW * std::conj(W);
  }
  const cplx rhs = cplx{0.0, 1.0} * weighted_quadrature(std::span<const cplx>(integrand), grid);
  return {lhs, rhs.real()};
}

double toeplitz_asymptotic_eigenvalue(double alpha) {
  return 2.0 / (std::exp(2.0 * alpha) - std::exp(-2.0 * alpha));
}

double toeplitz_eigen_residual(double alpha, std::size_t size) {
  if (size < 3 || size % 2 == 0) throw ValidationError("toeplitz_eigen_residual: size must be odd >= 3");
  if (!(alpha > 0.0)) throw ValidationError("toeplitz_eigen_residual: alpha must be positive");
  const long T = static_cast<long>(size - 1) / 2;
  const double lambda = toeplitz_asymptotic_eigenvalue(alpha);
  double num = 0.0;
  for (long s = -T; s <= T; ++s) {
    cplx acc{0.0, 0.0};
    for (long t = -T; t <= T; ++t) {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      acc += sign / cplx{2.0 * alpha, -static_cast<double>(s - t) * pi};
    }
    const double zs = (s % 2 == 0) ? 1.0 : -1.0;
    num += std::norm(acc - lambda * zs);
  }
  return std::sqrt(num / static_cast<double>(size));
}

}  // namespace shiftk
