#pragma once

// The `fit` and `report` commands: ingestion -> fitting -> similarity ->
// capm, staged into an OutputSet. Nothing is written until the caller
// commits the returned outputs.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chebfolio/capm.hpp"
#include "chebfolio/error.hpp"
#include "chebfolio/fitting.hpp"
#include "chebfolio/heatmap.hpp"
#include "chebfolio/ingestion.hpp"
#include "chebfolio/report.hpp"
#include "chebfolio/similarity.hpp"

namespace chebfolio {

struct InputSpec {
  std::vector<std::filesystem::path> files;
  std::optional<std::filesystem::path> manifest;
};

struct LoadedInputs {
  std::vector<PriceSeries> series;
  std::vector<std::string> sources;
  std::optional<std::string> market_from_manifest;
};

/// Messages for the caller's logger.
struct RunLog {
  std::vector<std::string> info;
  std::vector<std::string> warnings;
};

inline LoadedInputs load_inputs(const InputSpec& spec) {
  if (spec.manifest && !spec.files.empty()) {
    throw config_error("give either --manifest or input files, not both");
  }
  LoadedInputs out;
  if (spec.manifest) {
    for (const auto& e : load_manifest(*spec.manifest)) {
      out.series.push_back(parse_csv_file(e.path, e.ticker));
      out.sources.push_back(e.path.string());
      if (e.is_market) {
        if (out.market_from_manifest) throw config_error("manifest marks more than one market series");
        out.market_from_manifest = e.ticker;
      }
    }
  } else {
    for (const auto& f : spec.files) {
      out.series.push_back(parse_csv_file(f));
      out.sources.push_back(f.string());
    }
  }
  if (out.series.empty()) throw input_error("no input series");
  std::set<std::string> seen;
  for (const auto& s : out.series) {
    if (!seen.insert(s.asset_id()).second) throw input_error("duplicate ticker " + s.asset_id());
  }
  return out;
}

/// Aligns (when more than one series) and applies the time axis.
inline std::vector<PriceSeries> prepare_series(const std::vector<PriceSeries>& raw, TimeAxis axis,
                                               RunLog& log) {
  std::vector<PriceSeries> series;
  if (raw.size() >= 2) {
    const AlignedPanel panel = align(raw);
    for (std::size_t i = 0; i < panel.assets(); ++i) {
      if (panel.dropped[i] > 0) {
        log.info.push_back(panel.asset_ids[i] + ": " + std::to_string(panel.dropped[i]) +
                           " observations outside the common grid dropped");
      }
    }
    series = panel.as_series_list();
  } else {
    series = raw;
  }
  if (axis == TimeAxis::index) {
    for (auto& s : series) s = with_index_time(s);
  }
  return series;
}

inline std::vector<CoefficientVector> fit_all(const std::vector<PriceSeries>& series,
                                              const FitConfig& cfg, RunLog& log) {
  std::vector<CoefficientVector> cvs;
  cvs.reserve(series.size());
  for (const auto& s : series) {
    cvs.push_back(fit(s, cfg));
    const auto& d = cvs.back().diagnostics;
    if (d.ill_conditioned) {
      log.warnings.push_back(s.asset_id() + ": ill-conditioned fit (condition estimate " +
                             shortest_repr(d.condition_estimate) + ", rank " + std::to_string(d.rank) +
                             " of " + std::to_string(cfg.degree + 1) + ")");
    }
  }
  return cvs;
}

// ---------------------------------------------------------------------------

struct FitCommand {
  InputSpec inputs;
  unsigned degree = 226;
  TimeAxis time_axis = TimeAxis::days;
  std::filesystem::path output_dir;
};

inline OutputSet run_fit(const FitCommand& cmd, RunLog& log) {
  const LoadedInputs loaded = load_inputs(cmd.inputs);
  const auto series = prepare_series(loaded.series, cmd.time_axis, log);
  const auto cvs = fit_all(series, FitConfig{cmd.degree}, log);

  OutputSet out;
  ordered_json diag = ordered_json::array();
  for (const auto& cv : cvs) {
    out.add(cmd.output_dir / ("coeff_" + cv.asset_id + ".csv"), coefficients_csv(cv));
    diag.push_back({{"asset_id", cv.asset_id},
                    {"degree", cv.degree()},
                    {"t0", cv.domain.t0()},
                    {"t1", cv.domain.t1()},
                    {"rmse", cv.rmse},
                    {"max_abs_residual", cv.max_abs_residual},
                    {"diagnostics", to_json(cv.diagnostics)}});
  }
  ordered_json doc = {{"degree", cmd.degree}, {"time_axis", to_string(cmd.time_axis)}, {"assets", diag}};
  out.add(cmd.output_dir / "diagnostics.json", doc.dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------------------

struct ReportCommand {
  InputSpec inputs;
  ReportConfig config;
  std::filesystem::path output_dir;
};

struct ReportResult {
  RunReport report;
  OutputSet outputs;
};

inline ReportResult run_report(ReportCommand cmd, RunLog& log) {
  ReportConfig& cfg = cmd.config;
  const bool rates_given = cfg.risk_free_rate || cfg.expected_market_return;
  if (cfg.market_ticker && !(cfg.risk_free_rate && cfg.expected_market_return)) {
    throw config_error("--market-ticker requires both --rf and --erm");
  }

  LoadedInputs loaded = load_inputs(cmd.inputs);
  if (!cfg.market_ticker && loaded.market_from_manifest) {
    cfg.market_ticker = loaded.market_from_manifest;
    if (!(cfg.risk_free_rate && cfg.expected_market_return)) {
      throw config_error("manifest designates market " + *cfg.market_ticker + "; --rf and --erm are required");
    }
  } else if (cfg.market_ticker && loaded.market_from_manifest && *cfg.market_ticker != *loaded.market_from_manifest) {
    throw config_error("--market-ticker " + *cfg.market_ticker + " conflicts with manifest market " +
                       *loaded.market_from_manifest);
  }
  if (rates_given && !cfg.market_ticker) throw config_error("--rf/--erm given without a market ticker");
  if (loaded.series.size() < 2) throw input_error("report needs at least 2 input series");
  cfg.inputs = loaded.sources;

  const auto series = prepare_series(loaded.series, cfg.time_axis, log);
  const auto cvs = fit_all(series, FitConfig{cfg.degree}, log);
  const SimilarityOptions opts{cfg.drop_constant_term};

  RunReport r;
  r.config = cfg;
  for (const auto& cv : cvs) r.per_asset.push_back(summarize(cv));
  r.cosine_matrix = cosine_matrix(cvs, opts);
  r.correlation_matrix = pearson_matrix(series, cfg.basis);
  try {
    r.agreement = agreement(r.cosine_matrix, r.correlation_matrix);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical) throw;
    r.agreement_error = e.what();
    log.warnings.push_back(e.what());
  }

  if (cfg.market_ticker) {
    const auto it = std::find_if(series.begin(), series.end(),
                                 [&](const PriceSeries& s) { return s.asset_id() == *cfg.market_ticker; });
    if (it == series.end()) throw config_error("market ticker " + *cfg.market_ticker + " is not among the inputs");
    const CapmInputs in{*cfg.risk_free_rate, *cfg.expected_market_return};
    r.capm = estimate_capm(series, cvs, static_cast<std::size_t>(it - series.begin()), in, opts);
  }

  OutputSet out;
  out.add(cmd.output_dir / "report.json", to_json(r).dump(2) + "\n");
  out.add(cmd.output_dir / "cosine.csv", matrix_csv(r.cosine_matrix));
  out.add(cmd.output_dir / "correlation.csv", matrix_csv(r.correlation_matrix));
  out.add(cmd.output_dir / "agreement.txt", agreement_text(r));
  if (r.capm) out.add(cmd.output_dir / "capm.csv", capm_csv(*r.capm));
  if (cfg.heatmap) {
    std::filesystem::path hp = *cfg.heatmap;
    if (hp.is_relative()) hp = cmd.output_dir / hp;
    out.add(hp, heatmap_svg({{"Cosine of coefficient vectors", &r.cosine_matrix},
                             {"Correlation", &r.correlation_matrix}}));
  }
  return {std::move(r), std::move(out)};
}

}  // namespace chebfolio
