#pragma once

/// Cauchy-structured Gram matrix of geometric sequences, optimal weights,
/// the performance criteria F_K / H_K, lower bounds, Blaschke products and
/// the identities used to verify them.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shiftk/signal.hpp"

namespace shiftk {

using PoleVector = std::vector<cplx>;

/// C_{ss'} = 1 / (1 - a_s conj(a_s')). Construction checks stability and
/// pairwise distinctness; the matrix is Hermitian by construction (the lower
/// triangle is the conjugate of the upper one).
class CauchyGram {
public:
  explicit CauchyGram(PoleVector poles);

  std::span<const cplx> poles() const { return poles_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t size() const { return poles_.size(); }

  /// max |C - diag(a) C diag(conj(a)) - 1 1^T| entrywise.
  double displacement_residual() const;

  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues() const;
  double condition_number() const;

  /// Copy with `eps` added to every off-diagonal entry (kept Hermitian).
  /// Only meant as a negative control for the verification suite.
  CauchyGram perturbed(double eps) const;

  /// Solves C x = rhs with a Hermitian (Cholesky) factorization followed by
  /// two steps of iterative refinement whose residuals are formed in long
  /// double from the poles. Throws ConditioningError when the condition
  /// number exceeds 1e12.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

private:
  CauchyGram(PoleVector poles, Eigen::MatrixXcd matrix)
      : poles_(std::move(poles)), matrix_(std::move(matrix)), exact_(false) {}
  std::complex<long double> entry(Eigen::Index s, Eigen::Index t) const;

  PoleVector poles_;
  Eigen::MatrixXcd matrix_;
  bool exact_ = true;
};

inline constexpr double kMaxCondition = 1e12;

CauchyGram cauchy_gram(const PoleVector& a);

/// Minimizer of loss_white_closed over b for fixed poles:
/// conj(C) b = conj(a)^K, i.e. b = conj(C^{-1} a^K).
std::vector<cplx> optimal_b(const PoleVector& a, int K);

/// F_K = <a^K, C^{-1} a^K>; the best white-noise loss is 1 - F_K.
double f_criterion(const PoleVector& a, int K);

/// max(0, 1 - S/(K+1)).
double lower_bound_white(int S, int K);

/// max(0, 1 - 3S / (K (1 - rho))).
double lower_bound_auto(int S, int K, double rho);

/// H_K = 1 - (1 - rho^2) v^H C^{-1} v over the poles a plus {rho}, with
/// v_s = a_s^K / (1 - a_s rho). For rho <= 1e-6 returns 1 - F_K instead.
double h_criterion(const PoleVector& a, int K, double rho);

/// prod_s (a_s - z) / (1 - z conj(a_s)).
cplx blaschke_eval(const PoleVector& a, cplx z);

/// u = C^{-1} 1.
std::vector<cplx> unit_weights(const CauchyGram& gram);

/// Both sides of sum_L L |w_L|^2 = (i/2pi) int W'(w) conj(W(w)) dw; the
/// right side by midpoint quadrature with W' evaluated analytically.
std::pair<double, double> verify_semi_parseval(const ComplexSeq& w, std::size_t nodes);

/// 2 / (e^{2 alpha} - e^{-2 alpha}).
double toeplitz_asymptotic_eigenvalue(double alpha);

/// ||T z - lambda z|| / ||z|| for T(s,s') = 1/(2 alpha - i (s - s') pi),
/// z = ((-1)^s), s in [-T, T] with size = 2T + 1.
double toeplitz_eigen_residual(double alpha, std::size_t size);

}  // namespace shiftk
