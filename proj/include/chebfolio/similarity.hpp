#pragma once

// Co-movement measures between assets: cosine similarity of Chebyshev
// coefficient vectors, Pearson correlation of the raw series, and the
// agreement between the two resulting matrices.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "chebfolio/error.hpp"
#include "chebfolio/fitting.hpp"
#include "chebfolio/ingestion.hpp"

namespace chebfolio {

struct SimilarityOptions {
  /// Exclude c_0 from cosines (the coefficient-space analog of mean-centering).
  bool drop_constant_term = false;
};

enum class CorrelationBasis { prices, returns };

/// Square matrix indexed by asset labels.
class LabeledMatrix {
 public:
  LabeledMatrix() = default;
  explicit LabeledMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)), entries_(labels_.size() * labels_.size(), 0.0) {}

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * size() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }

  /// Strict upper triangle in row-major order.
  std::vector<double> upper_triangle() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i + 1; j < size(); ++j) out.push_back((*this)(i, j));
    }
    return out;
  }

  /// Symmetric, unit diagonal, entries in [-1, 1], each within `tol`.
  bool satisfies_invariants(double tol = 1e-12) const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (std::abs((*this)(i, i) - 1.0) > tol) return false;
      for (std::size_t j = 0; j < size(); ++j) {
        const double v = (*this)(i, j);
        if (!std::isfinite(v) || v < -1.0 - tol || v > 1.0 + tol) return false;
        if (std::abs(v - (*this)(j, i)) > tol) return false;
      }
    }
    return true;
  }

  friend bool operator==(const LabeledMatrix&, const LabeledMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> entries_;
};

struct AgreementReport {
  double statistic = 0.0;
  std::size_t pair_count = 0;
};

namespace detail {

inline double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

inline double euclidean_norm(std::span<const double> v) {
  double ss = 0.0;
  for (double x : v) ss += x * x;
  return std::sqrt(ss);
}

inline std::span<const double> used_terms(const CoefficientVector& cv, const SimilarityOptions& opts) {
  std::span<const double> c = cv.coefficients;
  return opts.drop_constant_term && !c.empty() ? c.subspan(1) : c;
}

/// True when the spread of `v` is indistinguishable from rounding noise.
inline bool zero_variance(std::span<const double> v, double mean, double ss) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  return scale == 0.0 || sd <= 1e-13 * std::max(scale, std::abs(mean));
}

}  // namespace detail

/// Copy with unit Euclidean norm.
inline CoefficientVector normalize(const CoefficientVector& cv) {
  const double norm = detail::euclidean_norm(cv.coefficients);
  if (!(norm >= 1e-300)) throw numerical_error(cv.asset_id + ": zero coefficient vector");
  CoefficientVector out = cv;
  for (double& c : out.coefficients) c /= norm;
  return out;
}

/// Cosine of the angle between two coefficient vectors, clamped to [-1, 1].
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw input_error("coefficient length mismatch: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  }
  const double na = detail::euclidean_norm(a);
  const double nb = detail::euclidean_norm(b);
  if (!(na >= 1e-300) || !(nb >= 1e-300)) throw numerical_error("zero coefficient vector");
  if (std::ranges::equal(a, b)) return 1.0;
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return detail::clamp_unit(dot / (na * nb));
}

inline double cosine(const CoefficientVector& a, const CoefficientVector& b,
                     const SimilarityOptions& opts = {}) {
  try {
    return cosine(detail::used_terms(a, opts), detail::used_terms(b, opts));
  } catch (const Error& e) {
    throw Error(e.kind(), a.asset_id + "/" + b.asset_id + ": " + e.what());
  }
}

inline LabeledMatrix cosine_matrix(std::span<const CoefficientVector> cvs,
                                   const SimilarityOptions& opts = {}) {
  if (cvs.size() < 2) throw input_error("cosine matrix needs at least 2 coefficient vectors");
  std::vector<std::string> labels;
  for (const auto& cv : cvs) labels.push_back(cv.asset_id);
  LabeledMatrix m(std::move(labels));
  for (std::size_t i = 0; i < cvs.size(); ++i) {
    // Diagonal still goes through cosine() so zero vectors are reported.
    cosine(cvs[i], cvs[i], opts);
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < cvs.size(); ++j) {
      m(i, j) = m(j, i) = cosine(cvs[i], cvs[j], opts);
    }
  }
  return m;
}

/// Pearson correlation of two equally long sequences, clamped to [-1, 1].
/// `names` label the operands in the zero-variance error.
inline double pearson(std::span<const double> a, std::span<const double> b,
                      const std::string& name_a = "a", const std::string& name_b = "b") {
  if (a.size() != b.size()) throw input_error("pearson: length mismatch");
  if (a.size() < 2) throw input_error("pearson: need at least 2 observations");
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    ma += a[t];
    mb += b[t];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double da = a[t] - ma;
    const double db = b[t] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (detail::zero_variance(a, ma, saa)) throw numerical_error("degenerate: zero variance in " + name_a);
  if (detail::zero_variance(b, mb, sbb)) throw numerical_error("degenerate: zero variance in " + name_b);
  return detail::clamp_unit(sab / std::sqrt(saa * sbb));
}

/// Pearson correlation matrix of aligned series, on prices or simple returns.
inline LabeledMatrix pearson_matrix(std::span<const PriceSeries> series,
                                    CorrelationBasis basis = CorrelationBasis::prices) {
  if (series.size() < 2) throw input_error("correlation matrix needs at least 2 series");
  for (const auto& s : series) {
    if (!std::ranges::equal(s.timestamps(), series[0].timestamps())) {
      throw input_error("alignment error: " + s.asset_id() + " and " + series[0].asset_id() +
                        " have different timestamps");
    }
  }
  if (series[0].size() < 3) throw input_error("correlation needs at least 3 observations");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (const auto& s : series) {
    labels.push_back(s.asset_id());
    rows.push_back(basis == CorrelationBasis::returns
                       ? simple_returns(s)
                       : std::vector<double>(s.values().begin(), s.values().end()));
  }
  LabeledMatrix m(std::move(labels));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pearson(rows[i], rows[i], series[i].asset_id(), series[i].asset_id());
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      m(i, j) = m(j, i) = pearson(rows[i], rows[j], series[i].asset_id(), series[j].asset_id());
    }
  }
  return m;
}

inline LabeledMatrix pearson_matrix(const AlignedPanel& panel,
                                    CorrelationBasis basis = CorrelationBasis::prices) {
  return pearson_matrix(panel.as_series_list(), basis);
}

/// Pearson correlation between the strict upper triangles of two matrices
/// over the same labels.
inline AgreementReport agreement(const LabeledMatrix& m1, const LabeledMatrix& m2) {
  if (m1.labels() != m2.labels()) throw input_error("agreement: label mismatch");
  if (m1.size() < 2) throw input_error("agreement: need at least 2 assets");
  const auto u1 = m1.upper_triangle();
  const auto u2 = m2.upper_triangle();
  AgreementReport r;
  r.pair_count = u1.size();
  if (u1.size() < 2) throw numerical_error("degenerate: zero variance (a single off-diagonal pair)");
  try {
    r.statistic = pearson(u1, u2, "first matrix", "second matrix");
  } catch (const Error& e) {
    throw numerical_error(std::string("agreement ") + e.what());
  }
  return r;
}

}  // namespace chebfolio
