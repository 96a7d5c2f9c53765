#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>

#include "geer/error.hpp"
#include "geer/graph.hpp"

// Closed-form walk lengths, sample counts and confidence radii. All logarithms
// are natural.
namespace geer {

/// Additive error ε, failure probability δ and the number τ of sampling batches.
class ErrorBudget {
public:
  static constexpr unsigned kMaxTau = 30;

  ErrorBudget(double epsilon, double delta, unsigned tau = 5) : epsilon_(epsilon), delta_(delta), tau_(tau) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw PreconditionError("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
    if (tau < 1 || tau > kMaxTau) throw PreconditionError("tau must lie in [1, 30]");
  }

  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }
  unsigned tau() const noexcept { return tau_; }

private:
  double epsilon_;
  double delta_;
  unsigned tau_;
};

struct SampleBudget {
  double psi = 0.0;
  std::uint64_t eta_star = 0; ///< Hoeffding worst case, walks per endpoint
  std::uint64_t eta_0 = 1;    ///< first batch size
  std::uint64_t h = 0;        ///< (2^τ − 1)·η_0, total over all batches
};

namespace detail {

// Ceiling that ignores floating-point noise just above an integer, so that
// e.g. ln 16 / ln 2 − 1 evaluates to 3 rather than 4.
inline double tolerant_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

inline std::uint64_t to_count(double x) {
  if (!(x < 1.8e19)) throw OverflowError("sample count does not fit in 64 bits");
  return static_cast<std::uint64_t>(std::max(0.0, x));
}

inline std::size_t length_from_ratio(double numerator_arg, double lambda) {
  if (lambda >= 1.0) throw SpectralDegeneracyError("lambda must be below 1");
  if (lambda <= 0.0 || numerator_arg <= 1.0) return 0;
  const double ell = tolerant_ceil(std::log(numerator_arg) / std::log(1.0 / lambda) - 1.0);
  if (ell <= 0.0) return 0;
  if (ell > 1e9) throw SpectralDegeneracyError("spectral gap too small: walk length exceeds 1e9");
  return static_cast<std::size_t>(ell);
}

} // namespace detail

/// Degree-aware maximum walk length that keeps the truncated series within
/// ε/2 of the true resistance.
inline std::size_t refined_ell(std::size_t d_s, std::size_t d_t, double epsilon, double lambda) {
  if (d_s == 0 || d_t == 0) throw PreconditionError("query endpoints must have positive degree");
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (lambda >= 1.0) throw SpectralDegeneracyError("lambda must be below 1");
  const double arg = (2.0 / static_cast<double>(d_s) + 2.0 / static_cast<double>(d_t)) / (epsilon * (1.0 - lambda));
  return detail::length_from_ratio(arg, lambda);
}

/// Degree-oblivious walk length ⌈ln(4/(ε−ελ))/ln(1/λ) − 1⌉.
inline std::size_t peng_ell(double epsilon, double lambda) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (lambda >= 1.0) throw SpectralDegeneracyError("lambda must be below 1");
  const double arg = 4.0 / (epsilon - epsilon * lambda);
  return detail::length_from_ratio(arg, lambda);
}

/// Read-only nonnegative node weights as consumed by the walk estimators.
template <class W>
concept WalkWeights = requires(const W& w, NodeId v) {
  { w(v) } -> std::convertible_to<double>;
  { w.max1() } -> std::convertible_to<double>;
  { w.max2() } -> std::convertible_to<double>;
};

/// Weights of e_v without materializing a length-n vector.
class OneHot {
public:
  explicit OneHot(NodeId hot) : hot_(hot) {}
  double operator()(NodeId v) const noexcept { return v == hot_ ? 1.0 : 0.0; }
  double max1() const noexcept { return 1.0; }
  double max2() const noexcept { return 0.0; }
  NodeId hot() const noexcept { return hot_; }

private:
  NodeId hot_;
};

/// View over a dense nonnegative vector with its two largest entries cached.
class DenseWeights {
public:
  explicit DenseWeights(std::span<const double> values) : values_(values) {
    for (double x : values) {
      if (x < 0.0 || std::isnan(x)) throw PreconditionError("walk weights must be nonnegative");
      if (x > max1_) {
        max2_ = max1_;
        max1_ = x;
      } else if (x > max2_) {
        max2_ = x;
      }
    }
  }
  explicit DenseWeights(const DenseVec& v) : DenseWeights(v.span()) {}

  double operator()(NodeId v) const noexcept { return values_[v]; }
  double max1() const noexcept { return max1_; }
  double max2() const noexcept { return max2_; }

private:
  std::span<const double> values_;
  double max1_ = 0.0;
  double max2_ = 0.0;
};

/// Range of the per-sample variable Z_k: |Z_k| ≤ ψ/2.
template <WalkWeights S, WalkWeights T>
double psi(const S& s_vec, const T& t_vec, std::size_t d_s, std::size_t d_t, std::size_t ell_f) {
  const double ds = static_cast<double>(d_s);
  const double dt = static_cast<double>(d_t);
  const double odd = 2.0 * static_cast<double>((ell_f + 1) / 2);
  const double even = 2.0 * static_cast<double>(ell_f / 2);
  return odd * (s_vec.max1() / ds + t_vec.max1() / dt) + even * (s_vec.max2() / ds + t_vec.max2() / dt);
}

inline double psi(const DenseVec& s_vec, const DenseVec& t_vec, std::size_t d_s, std::size_t d_t, std::size_t ell_f) {
  return psi(DenseWeights(s_vec), DenseWeights(t_vec), d_s, d_t, ell_f);
}

/// ⌈2ψ² ln(2τ/δ)/ε²⌉ walks per endpoint.
inline std::uint64_t eta_star(double psi, const ErrorBudget& budget) {
  if (psi < 0.0) throw PreconditionError("psi must be nonnegative");
  const double eps = budget.epsilon();
  const double raw = 2.0 * psi * psi * std::log(2.0 * budget.tau() / budget.delta()) / (eps * eps);
  return detail::to_count(detail::tolerant_ceil(raw));
}

/// Empirical Bernstein confidence radius
/// sqrt(2σ̂² ln(3/δ)/n) + 3ψ ln(3/δ)/n.
inline double bernstein_half_width(std::uint64_t n_z, double var_hat, double psi, double delta) {
  const double n = static_cast<double>(n_z);
  const double lg = std::log(3.0 / delta);
  return std::sqrt(2.0 * var_hat * lg / n) + 3.0 * psi * lg / n;
}

inline SampleBudget sample_budget(double psi, const ErrorBudget& budget) {
  SampleBudget b;
  b.psi = psi;
  b.eta_star = eta_star(psi, budget);
  const std::uint64_t first_share = std::uint64_t{1} << (budget.tau() - 1);
  b.eta_0 = std::max<std::uint64_t>(1, (b.eta_star + first_share - 1) / first_share);
  const std::uint64_t batches = (std::uint64_t{1} << budget.tau()) - 1;
  if (b.eta_0 > std::numeric_limits<std::uint64_t>::max() / batches) throw OverflowError("sample budget overflows");
  b.h = batches * b.eta_0;
  return b;
}

} // namespace geer
