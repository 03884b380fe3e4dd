#pragma once

// Chebyshev polynomials of the first kind on [-1, 1] and finite Chebyshev
// sums over an affinely mapped time window.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "chebfolio/error.hpp"

namespace chebfolio {

/// Inputs this far outside [-1, 1] are clamped instead of rejected.
inline constexpr double kDomainSlack = 1e-12;

/// Affine bijection between the observation window [t0, t1] and [-1, 1].
class DomainMap {
 public:
  DomainMap(double t0, double t1) : t0_(t0), t1_(t1) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
      throw numerical_error("degenerate domain: need t1 > t0, got [" +
                            std::to_string(t0) + ", " + std::to_string(t1) + "]");
    }
  }

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }

  /// Exactly -1 at t0 and +1 at t1.
  double forward(double t) const noexcept {
    return (2.0 * t - (t0_ + t1_)) / (t1_ - t0_);
  }

  double inverse(double x) const noexcept {
    return ((t1_ - t0_) * x + (t0_ + t1_)) / 2.0;
  }

  bool contains(double t) const noexcept { return t >= t0_ && t <= t1_; }

  friend bool operator==(const DomainMap&, const DomainMap&) = default;

 private:
  double t0_;
  double t1_;
};

namespace detail {

inline double checked_unit(double x) {
  if (!(x >= -1.0 - kDomainSlack && x <= 1.0 + kDomainSlack)) {
    throw numerical_error("argument outside [-1, 1]: " + std::to_string(x));
  }
  return std::clamp(x, -1.0, 1.0);
}

}  // namespace detail

/// T_n(x) by the three-term recurrence T_{k+1} = 2x T_k - T_{k-1}.
inline double eval_T(unsigned n, double x) {
  x = detail::checked_unit(x);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (unsigned k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// T_n(x) = cos(n arccos x), the defining form. Used as a reference for eval_T.
inline double eval_T_trig(unsigned n, double x) {
  x = detail::checked_unit(x);
  return std::cos(static_cast<double>(n) * std::acos(x));
}

/// Clenshaw evaluation of sum_k c_k T_k(x) for x in [-1, 1].
inline double clenshaw(std::span<const double> coefficients, double x) {
  x = detail::checked_unit(x);
  if (coefficients.empty()) return 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coefficients.size() - 1; k >= 1; --k) {
    const double b0 = coefficients[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coefficients[0] + x * b1 - b2;
}

/// A finite Chebyshev expansion c_0..c_N over a time window.
class ChebSum {
 public:
  ChebSum(std::vector<double> coefficients, DomainMap domain)
      : coefficients_(std::move(coefficients)), domain_(domain) {
    if (coefficients_.empty()) {
      throw input_error("Chebyshev sum needs at least one coefficient");
    }
    for (double c : coefficients_) {
      if (!std::isfinite(c)) throw numerical_error("non-finite Chebyshev coefficient");
    }
  }

  std::span<const double> coefficients() const noexcept { return coefficients_; }
  const DomainMap& domain() const noexcept { return domain_; }
  std::size_t degree() const noexcept { return coefficients_.size() - 1; }

 private:
  std::vector<double> coefficients_;
  DomainMap domain_;
};

/// Value of the sum at time t. Extrapolation outside [t0, t1] is refused.
inline double eval_sum(const ChebSum& s, double t) {
  if (!s.domain().contains(t)) {
    throw numerical_error("extrapolation requested: t = " + std::to_string(t) +
                          " outside [" + std::to_string(s.domain().t0()) + ", " +
                          std::to_string(s.domain().t1()) + "]");
  }
  return clenshaw(s.coefficients(), s.domain().forward(t));
}

}  // namespace chebfolio
