#pragma once

/// Diagonal linear-recurrence filters: c_k = sum_s b_s a_s^k.

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "shiftk/signal.hpp"

namespace shiftk {

/// one_to_S: plain storage order. symmetric_T: logical s = -T..T stored in
/// ascending order (S = 2T + 1), so storage slot j has s = j - T.
enum class IndexConvention { one_to_S, symmetric_T };

class FilterParams {
public:
  /// Throws ValidationError on size mismatch / empty / non-finite input and
  /// StabilityError if some |a_s| >= 1.
  FilterParams(std::vector<cplx> a, std::vector<cplx> b,
               IndexConvention convention = IndexConvention::one_to_S);

  std::span<const cplx> a() const { return a_; }
  std::span<const cplx> b() const { return b_; }
  IndexConvention convention() const { return convention_; }
  std::size_t size() const { return a_.size(); }

  /// Logical index of storage slot j (j + 1 or j - T).
  long logical_index(std::size_t j) const;

  double max_pole_modulus() const;
  double weight_l1() const;

  /// True when slot j and slot S-1-j hold conjugate poles and weights.
  bool conjugate_symmetric(double tol = 0.0) const;

  FilterParams with_weights(std::vector<cplx> b) const;

private:
  std::vector<cplx> a_;
  std::vector<cplx> b_;
  IndexConvention convention_;
};

struct TaskSpec {
  int S = 1;
  int K = 0;
  double rho = 0.0;
  double alpha = 1.0;

  void validate() const;
};

/// d_k = 1 iff k = K.
struct ShiftKTarget {
  int K = 0;
  double operator()(std::size_t k) const { return k == static_cast<std::size_t>(K) ? 1.0 : 0.0; }
};

/// c_0..c_{k_max}, with a^0 = 1 also for a = 0.
ComplexSeq impulse_response(const FilterParams& p, std::size_t k_max);

/// C(e^{iw}) = sum_s b_s / (1 - a_s e^{-iw}).
cplx transfer_function(const FilterParams& p, double omega);

/// Common magnitude e^{-alpha}(e^{2 alpha} - e^{-2 alpha}) / (2K) of the
/// asymptotically optimal weights on the shift-K grid.
double shiftk_weight_magnitude(int K, double alpha);

/// Poles a_s = e^{-alpha/K} e^{i pi s / K}, weights b_s = (-1)^s * magnitude,
/// s in [-T, T]. Requires odd S, K >= 1, alpha > 0.
FilterParams shiftk_init(const TaskSpec& spec);

/// Runs x_n = diag(a) x_{n-1} + b u_n, y_n = sum_s x_{n,s} from x_{-1} = 0.
ComplexSeq rnn_rollout(const FilterParams& p, const ComplexSeq& input);

/// Causal convolution y_n = sum_{k<=n} kernel_k u_{n-k}, same length as u.
std::vector<cplx> causal_convolve(std::span<const cplx> kernel, std::span<const cplx> input);

void to_json(nlohmann::json& j, const FilterParams& p);
FilterParams filter_params_from_json(const nlohmann::json& j);

}  // namespace shiftk
