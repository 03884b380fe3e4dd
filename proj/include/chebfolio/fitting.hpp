#pragma once

// Least-squares Chebyshev expansion of a sampled price series.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chebfolio/chebyshev.hpp"
#include "chebfolio/error.hpp"
#include "chebfolio/ingestion.hpp"

namespace chebfolio {

/// Condition estimates above this are flagged but do not fail the fit.
inline constexpr double kIllConditionedThreshold = 1e12;

struct FitConfig {
  unsigned degree = 226;  // 227 terms
};

struct FitDiagnostics {
  std::size_t samples = 0;
  double condition_estimate = 1.0;
  std::size_t rank = 0;
  bool ill_conditioned = false;
};

/// An asset's expansion coefficients c_0..c_N with residual diagnostics.
struct CoefficientVector {
  std::string asset_id;
  std::vector<double> coefficients;
  DomainMap domain{0.0, 1.0};
  double rmse = 0.0;
  double max_abs_residual = 0.0;
  FitDiagnostics diagnostics;

  std::size_t degree() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  ChebSum as_sum() const { return {coefficients, domain}; }
};

/// Row i holds T_0..T_degree at xs[i].
inline Eigen::MatrixXd chebyshev_design(std::span<const double> xs, unsigned degree) {
  const auto rows = static_cast<Eigen::Index>(xs.size());
  const auto cols = static_cast<Eigen::Index>(degree) + 1;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = std::clamp(xs[static_cast<std::size_t>(i)], -1.0, 1.0);
    a(i, 0) = 1.0;
    if (cols > 1) a(i, 1) = x;
    for (Eigen::Index k = 2; k < cols; ++k) a(i, k) = 2.0 * x * a(i, k - 1) - a(i, k - 2);
  }
  return a;
}

/// Minimizes sum_t (Q(t) - price(t))^2 over c_0..c_N, with t mapped from
/// [first, last timestamp] onto [-1, 1]. Solved by a complete orthogonal
/// decomposition, so rank-deficient systems yield the minimum-norm solution.
inline CoefficientVector fit(const PriceSeries& series, const FitConfig& cfg = {}) {
  const std::size_t terms = static_cast<std::size_t>(cfg.degree) + 1;
  if (terms > series.size()) {
    throw input_error("insufficient samples: degree " + std::to_string(cfg.degree) + " needs " +
                      std::to_string(terms) + " samples, " + series.asset_id() + " has " +
                      std::to_string(series.size()));
  }
  const auto times = series.timestamps();
  const DomainMap domain(times.front(), times.back());

  std::vector<double> xs(times.size());
  std::transform(times.begin(), times.end(), xs.begin(), [&](double t) { return domain.forward(t); });
  const Eigen::MatrixXd a = chebyshev_design(xs, cfg.degree);
  const Eigen::Map<const Eigen::VectorXd> y(series.values().data(),
                                            static_cast<Eigen::Index>(series.size()));

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd c = cod.solve(y);

  FitDiagnostics diag;
  diag.samples = series.size();
  diag.rank = static_cast<std::size_t>(cod.rank());
  double min_pivot = cod.maxPivot();
  for (Eigen::Index i = 0; i < cod.rank(); ++i) {
    min_pivot = std::min(min_pivot, std::abs(cod.matrixQTZ()(i, i)));
  }
  diag.condition_estimate = min_pivot > 0.0 ? cod.maxPivot() / min_pivot : 0.0;
  diag.ill_conditioned = diag.rank < terms || diag.condition_estimate > kIllConditionedThreshold;

  CoefficientVector cv;
  cv.asset_id = series.asset_id();
  cv.coefficients.assign(c.data(), c.data() + c.size());
  cv.domain = domain;
  cv.diagnostics = diag;
  for (double v : cv.coefficients) {
    if (!std::isfinite(v)) throw numerical_error(series.asset_id() + ": fit produced non-finite coefficients");
  }

  const Eigen::VectorXd residual = a * c - y;
  cv.rmse = std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()));
  cv.max_abs_residual = residual.cwiseAbs().maxCoeff();
  // Guard the rmse <= max invariant against the last rounding unit.
  cv.rmse = std::min(cv.rmse, cv.max_abs_residual);
  return cv;
}

/// Fitted values at the given times (all must lie inside the fit window).
inline std::vector<double> reconstruct(const CoefficientVector& cv, std::span<const double> times) {
  const ChebSum sum = cv.as_sum();
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(eval_sum(sum, t));
  return out;
}

}  // namespace chebfolio
