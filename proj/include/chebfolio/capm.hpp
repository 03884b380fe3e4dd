#pragma once

// CAPM-form expected returns driven either by the classical beta or by
// phi, the cosine between an asset's and the market's coefficient vectors.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "chebfolio/error.hpp"
#include "chebfolio/fitting.hpp"
#include "chebfolio/ingestion.hpp"
#include "chebfolio/similarity.hpp"

namespace chebfolio {

struct CapmInputs {
  double risk_free_rate = 0.0;         // R_f, per period
  double expected_market_return = 0.0;  // E(R_m), per period
};

struct CapmEstimate {
  std::string asset_id;
  double beta = 0.0;
  double phi = 0.0;
  double expected_return_beta = 0.0;
  double expected_return_phi = 0.0;
};

/// cov(R_i, R_m) / var(R_m) on simple returns, population moments.
inline double beta(const PriceSeries& asset, const PriceSeries& market) {
  if (!std::ranges::equal(asset.timestamps(), market.timestamps())) {
    throw input_error("alignment error: " + asset.asset_id() + " and " + market.asset_id() +
                      " have different timestamps");
  }
  if (asset.size() < 3) throw input_error("beta needs at least 3 observations");
  const auto ra = simple_returns(asset);
  const auto rm = simple_returns(market);
  const double n = static_cast<double>(ra.size());
  double mean_a = 0.0;
  double mean_m = 0.0;
  for (std::size_t t = 0; t < ra.size(); ++t) {
    mean_a += ra[t];
    mean_m += rm[t];
  }
  mean_a /= n;
  mean_m /= n;
  double cov = 0.0;
  double var = 0.0;
  for (std::size_t t = 0; t < ra.size(); ++t) {
    cov += (ra[t] - mean_a) * (rm[t] - mean_m);
    var += (rm[t] - mean_m) * (rm[t] - mean_m);
  }
  cov /= n;
  var /= n;
  if (!(var > 0.0) || detail::zero_variance(rm, mean_m, var * n)) {
    throw numerical_error("degenerate: zero market return variance in " + market.asset_id());
  }
  return cov / var;
}

inline double phi(const CoefficientVector& asset_cv, const CoefficientVector& market_cv,
                  const SimilarityOptions& opts = {}) {
  return cosine(asset_cv, market_cv, opts);
}

/// R_f + coefficient * (E(R_m) - R_f).
inline double expected_return(double coefficient, const CapmInputs& in) {
  if (!std::isfinite(coefficient) || !std::isfinite(in.risk_free_rate) ||
      !std::isfinite(in.expected_market_return)) {
    throw input_error("expected_return: non-finite input");
  }
  return in.risk_free_rate + coefficient * (in.expected_market_return - in.risk_free_rate);
}

/// Estimates for every asset against the series at index `market`.
/// `series` and `cvs` are parallel and share one timestamp grid.
inline std::vector<CapmEstimate> estimate_capm(std::span<const PriceSeries> series,
                                               std::span<const CoefficientVector> cvs,
                                               std::size_t market, const CapmInputs& in,
                                               const SimilarityOptions& opts = {}) {
  if (series.size() != cvs.size() || market >= series.size()) {
    throw input_error("estimate_capm: inconsistent inputs");
  }
  std::vector<CapmEstimate> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    CapmEstimate e;
    e.asset_id = series[i].asset_id();
    e.beta = beta(series[i], series[market]);
    e.phi = phi(cvs[i], cvs[market], opts);
    e.expected_return_beta = expected_return(e.beta, in);
    e.expected_return_phi = expected_return(e.phi, in);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace chebfolio
