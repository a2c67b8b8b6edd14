#include "shiftk/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

#include "shiftk/errors.hpp"

namespace shiftk {

using std::numbers::pi;

FilterParams::FilterParams(std::vector<cplx> a, std::vector<cplx> b, IndexConvention convention)
    : a_(std::move(a)), b_(std::move(b)), convention_(convention) {
  if (a_.empty()) throw ValidationError("FilterParams: need at least one pole");
  if (a_.size() != b_.size()) throw ValidationError("FilterParams: a and b differ in length");
  if (convention_ == IndexConvention::symmetric_T && a_.size() % 2 == 0) {
    throw ValidationError("FilterParams: symmetric_T convention needs odd S");
  }
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  for (std::size_t s = 0; s < a_.size(); ++s) {
    if (!finite(a_[s]) || !finite(b_[s])) throw ValidationError("FilterParams: non-finite entry");
    if (std::abs(a_[s]) >= 1.0) throw StabilityError("FilterParams: pole with |a_s| >= 1");
  }
}

long FilterParams::logical_index(std::size_t j) const {
  if (convention_ == IndexConvention::one_to_S) return static_cast<long>(j) + 1;
  const long T = static_cast<long>(a_.size() - 1) / 2;
  return static_cast<long>(j) - T;
}

double FilterParams::max_pole_modulus() const {
  double r = 0.0;
  for (const auto& z : a_) r = std::max(r, std::abs(z));
  return r;
}

double FilterParams::weight_l1() const {
  double acc = 0.0;
  for (const auto& z : b_) acc += std::abs(z);
  return acc;
}

bool FilterParams::conjugate_symmetric(double tol) const {
  const std::size_t S = a_.size();
  for (std::size_t j = 0; j < S; ++j) {
    const std::size_t m = S - 1 - j;
    if (std::abs(a_[j] - std::conj(a_[m])) > tol) return false;
    if (std::abs(b_[j] - std::conj(b_[m])) > tol) return false;
  }
  return true;
}

FilterParams FilterParams::with_weights(std::vector<cplx> b) const {
  return FilterParams(a_, std::move(b), convention_);
}

void TaskSpec::validate() const {
  if (S < 1) throw ValidationError("TaskSpec: S must be >= 1");
  if (K < 0) throw ValidationError("TaskSpec: K must be >= 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("TaskSpec: rho must lie in [0, 1)");
  if (!(alpha > 0.0)) throw ValidationError("TaskSpec: alpha must be positive");
}

ComplexSeq impulse_response(const FilterParams& p, std::size_t k_max) {
  const auto a = p.a();
  std::vector<cplx> power(p.b().begin(), p.b().end());
  std::vector<cplx> c(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t s = 0; s < power.size(); ++s) {
      acc += power[s];
      power[s] *= a[s];
    }
    c[k] = acc;
  }
  return ComplexSeq(std::move(c));
}

cplx transfer_function(const FilterParams& p, double omega) {
  const cplx z = std::polar(1.0, -omega);
  cplx acc{0.0, 0.0};
  for (std::size_t s = 0; s < p.size(); ++s) {
    acc += p.b()[s] / (1.0 - p.a()[s] * z);
  }
  return acc;
}

double shiftk_weight_magnitude(int K, double alpha) {
  return std::exp(-alpha) * (std::exp(2.0 * alpha) - std::exp(-2.0 * alpha)) /
         (2.0 * static_cast<double>(K));
}

FilterParams shiftk_init(const TaskSpec& spec) {
  spec.validate();
  if (spec.S % 2 == 0) throw ValidationError("shiftk_init: S must be odd (S = 2T + 1)");
  if (spec.K < 1) throw ValidationError("shiftk_init: K must be >= 1");
  const int T = (spec.S - 1) / 2;
  const double K = static_cast<double>(spec.K);
  const double radius = std::exp(-spec.alpha / K);
  const double mag = shiftk_weight_magnitude(spec.K, spec.alpha);

  std::vector<cplx> a(spec.S);
  std::vector<cplx> b(spec.S);
  for (int s = -T; s <= T; ++s) {
    const std::size_t j = static_cast<std::size_t>(s + T);
    // Build the negative half as exact conjugates so realness is bitwise.
    if (s < 0) {
      a[j] = std::conj(std::polar(radius, pi * static_cast<double>(-s) / K));
    } else {
      a[j] = std::polar(radius, pi * static_cast<double>(s) / K);
    }
    b[j] = (s % 2 == 0) ? mag : -mag;
  }
  return FilterParams(std::move(a), std::move(b), IndexConvention::symmetric_T);
}

ComplexSeq rnn_rollout(const FilterParams& p, const ComplexSeq& input) {
  const auto a = p.a();
  const auto b = p.b();
  std::vector<cplx> state(p.size(), cplx{0.0, 0.0});
  std::vector<cplx> y(input.size());
  for (std::size_t n = 0; n < input.size(); ++n) {
    cplx out{0.0, 0.0};
    for (std::size_t s = 0; s < state.size(); ++s) {
      state[s] = a[s] * state[s] + b[s] * input[n];
      out += state[s];
    }
    y[n] = out;
  }
  return ComplexSeq(std::move(y), input.offset());
}

std::vector<cplx> causal_convolve(std::span<const cplx> kernel, std::span<const cplx> input) {
  std::vector<cplx> y(input.size(), cplx{0.0, 0.0});
  for (std::size_t n = 0; n < input.size(); ++n) {
    const std::size_t kmax = std::min(n, kernel.empty() ? 0 : kernel.size() - 1);
    if (kernel.empty()) break;
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k <= kmax; ++k) acc += kernel[k] * input[n - k];
    y[n] = acc;
  }
  return y;
}

namespace {

nlohmann::json complex_list(std::span<const cplx> v) {
  auto arr = nlohmann::json::array();
  for (const auto& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

std::vector<cplx> parse_complex_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(std::string("FilterParams JSON: missing array '") + key + "'");
  }
  std::vector<cplx> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError(std::string("FilterParams JSON: '") + key + "' entries must be [re, im]");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const FilterParams& p) {
  j = nlohmann::json{
      {"convention", p.convention() == IndexConvention::one_to_S ? "one_to_S" : "symmetric_T"},
      {"a", complex_list(p.a())},
      {"b", complex_list(p.b())},
  };
}

FilterParams filter_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("FilterParams JSON: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "convention" && key != "a" && key != "b") {
      throw ValidationError("FilterParams JSON: unknown key '" + key + "'");
    }
  }
  IndexConvention conv = IndexConvention::one_to_S;
  if (j.contains("convention")) {
    const auto tag = j.at("convention").get<std::string>();
    if (tag == "symmetric_T") {
      conv = IndexConvention::symmetric_T;
    } else if (tag != "one_to_S") {
      throw ValidationError("FilterParams JSON: unknown convention '" + tag + "'");
    }
  }
  return FilterParams(parse_complex_list(j, "a"), parse_complex_list(j, "b"), conv);
}

}  // namespace shiftk
