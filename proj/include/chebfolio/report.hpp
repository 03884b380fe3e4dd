#pragma once

// Report assembly and deterministic serialization.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chebfolio/capm.hpp"
#include "chebfolio/error.hpp"
#include "chebfolio/fitting.hpp"
#include "chebfolio/ingestion.hpp"
#include "chebfolio/similarity.hpp"

namespace chebfolio {

using ordered_json = nlohmann::ordered_json;

inline const char* to_string(TimeAxis axis) { return axis == TimeAxis::days ? "days" : "index"; }
inline const char* to_string(CorrelationBasis b) {
  return b == CorrelationBasis::prices ? "prices" : "returns";
}

struct ReportConfig {
  std::vector<std::string> inputs;
  unsigned degree = 226;
  TimeAxis time_axis = TimeAxis::days;
  CorrelationBasis basis = CorrelationBasis::prices;
  bool drop_constant_term = false;
  std::optional<std::string> market_ticker;
  std::optional<double> risk_free_rate;
  std::optional<double> expected_market_return;
  std::optional<std::string> heatmap;
};

struct AssetFitSummary {
  std::string asset_id;
  unsigned degree = 0;
  double rmse = 0.0;
  double max_abs_residual = 0.0;
  FitDiagnostics diagnostics;
};

struct RunReport {
  ReportConfig config;
  std::vector<AssetFitSummary> per_asset;
  LabeledMatrix cosine_matrix;
  LabeledMatrix correlation_matrix;
  std::optional<AgreementReport> agreement;
  std::optional<std::string> agreement_error;  // set when the statistic is undefined
  std::optional<std::vector<CapmEstimate>> capm;
};

inline AssetFitSummary summarize(const CoefficientVector& cv) {
  return {cv.asset_id, static_cast<unsigned>(cv.degree()), cv.rmse, cv.max_abs_residual, cv.diagnostics};
}

// ---------------------------------------------------------------------------
// Text formats

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Labeled square matrix with 3-decimal cells.
inline std::string matrix_csv(const LabeledMatrix& m) {
  std::string out = "asset";
  for (const auto& l : m.labels()) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out += "," + fixed(m(i, j), 3);
    out += '\n';
  }
  return out;
}

/// Inverse of matrix_csv (display precision only).
inline LabeledMatrix parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) throw input_error("matrix csv: empty");
  auto header = split(line);
  if (header.empty() || header[0] != "asset") throw input_error("matrix csv: bad header");
  LabeledMatrix m(std::vector<std::string>(header.begin() + 1, header.end()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!std::getline(in, line)) throw input_error("matrix csv: missing row");
    auto cells = split(line);
    if (cells.size() != m.size() + 1 || cells[0] != m.labels()[i]) {
      throw input_error("matrix csv: malformed row " + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < m.size(); ++j) m(i, j) = std::stod(cells[j + 1]);
  }
  return m;
}

inline std::string agreement_text(const RunReport& r) {
  if (r.agreement) return fixed(r.agreement->statistic, 9) + "\n";
  return "error: " + r.agreement_error.value_or("unavailable") + "\n";
}

/// `index,coefficient` rows, full precision.
inline std::string coefficients_csv(const CoefficientVector& cv) {
  std::string out = "index,coefficient\n";
  for (std::size_t k = 0; k < cv.coefficients.size(); ++k) {
    out += std::to_string(k) + "," + shortest_repr(cv.coefficients[k]) + "\n";
  }
  return out;
}

inline std::string capm_csv(const std::vector<CapmEstimate>& rows) {
  std::string out = "asset,phi,beta,expected_return_phi,expected_return_beta\n";
  for (const auto& e : rows) {
    out += e.asset_id + "," + fixed(e.phi, 6) + "," + fixed(e.beta, 6) + "," +
           fixed(e.expected_return_phi, 6) + "," + fixed(e.expected_return_beta, 6) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline ordered_json to_json(const FitDiagnostics& d) {
  return {{"samples", d.samples},
          {"condition_estimate", d.condition_estimate},
          {"rank", d.rank},
          {"ill_conditioned", d.ill_conditioned}};
}

inline ordered_json to_json(const LabeledMatrix& m) {
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    entries.push_back(std::move(row));
  }
  return {{"labels", m.labels()}, {"entries", std::move(entries)}};
}

inline LabeledMatrix matrix_from_json(const ordered_json& j) {
  LabeledMatrix m(j.at("labels").get<std::vector<std::string>>());
  const auto& entries = j.at("entries");
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = 0; k < m.size(); ++k) m(i, k) = entries.at(i).at(k).get<double>();
  }
  return m;
}

inline ordered_json to_json(const ReportConfig& c) {
  ordered_json j = {{"inputs", c.inputs},
                    {"degree", c.degree},
                    {"time_axis", to_string(c.time_axis)},
                    {"basis", to_string(c.basis)},
                    {"drop_constant_term", c.drop_constant_term}};
  j["market_ticker"] = c.market_ticker ? ordered_json(*c.market_ticker) : ordered_json();
  j["risk_free_rate"] = c.risk_free_rate ? ordered_json(*c.risk_free_rate) : ordered_json();
  j["expected_market_return"] =
      c.expected_market_return ? ordered_json(*c.expected_market_return) : ordered_json();
  j["heatmap"] = c.heatmap ? ordered_json(*c.heatmap) : ordered_json();
  return j;
}

inline ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["config_echo"] = to_json(r.config);
  ordered_json assets = ordered_json::array();
  for (const auto& a : r.per_asset) {
    assets.push_back({{"asset_id", a.asset_id},
                      {"degree", a.degree},
                      {"rmse", a.rmse},
                      {"max_abs_residual", a.max_abs_residual},
                      {"diagnostics", to_json(a.diagnostics)}});
  }
  j["per_asset"] = std::move(assets);
  j["cosine_matrix"] = to_json(r.cosine_matrix);
  j["correlation_matrix"] = to_json(r.correlation_matrix);
  if (r.agreement) {
    j["agreement"] = {{"statistic", r.agreement->statistic}, {"pair_count", r.agreement->pair_count}};
  } else {
    j["agreement"] = {{"error", r.agreement_error.value_or("unavailable")}};
  }
  if (r.capm) {
    ordered_json rows = ordered_json::array();
    for (const auto& e : *r.capm) {
      rows.push_back({{"asset_id", e.asset_id},
                      {"beta", e.beta},
                      {"phi", e.phi},
                      {"expected_return_beta", e.expected_return_beta},
                      {"expected_return_phi", e.expected_return_phi}});
    }
    j["capm"] = std::move(rows);
  } else {
    j["capm"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Atomic output

/// Files staged in memory, then written to temporaries and renamed into
/// place. Nothing is touched until commit().
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string content) {
    files_.emplace_back(std::move(path), std::move(content));
  }

  const std::vector<std::pair<std::filesystem::path, std::string>>& files() const noexcept {
    return files_;
  }

  void commit() const {
    std::vector<std::filesystem::path> temps;
    auto cleanup = [&] {
      std::error_code ec;
      for (const auto& t : temps) std::filesystem::remove(t, ec);
    };
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        temps.push_back(tmp);
        out << content;
        out.close();
        if (!out) throw input_error(tmp.string() + ": write failed");
      }
      for (std::size_t i = 0; i < files_.size(); ++i) {
        std::filesystem::rename(temps[i], files_[i].first);
      }
    } catch (const std::filesystem::filesystem_error& e) {
      cleanup();
      throw input_error(std::string("cannot write outputs: ") + e.what());
    } catch (...) {
      cleanup();
      throw;
    }
  }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace chebfolio
