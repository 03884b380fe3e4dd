// chebfolio: Chebyshev coefficient-vector analysis of price series.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "chebfolio/chebfolio.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("chebfolio");
  logger->set_pattern("chebfolio: [%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CHEBFOLIO_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void emit(const chebfolio::RunLog& log) {
  for (const auto& m : log.info) spdlog::info(m);
  for (const auto& m : log.warnings) spdlog::warn(m);
}

void commit(const chebfolio::OutputSet& out) {
  out.commit();
  for (const auto& f : out.files()) spdlog::info("wrote {}", f.first.string());
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Chebyshev coefficient-vector analysis of price series"};
  app.require_subcommand(1);

  const std::map<std::string, chebfolio::TimeAxis> axes{{"days", chebfolio::TimeAxis::days},
                                                        {"index", chebfolio::TimeAxis::index}};
  const std::map<std::string, chebfolio::CorrelationBasis> bases{
      {"prices", chebfolio::CorrelationBasis::prices}, {"returns", chebfolio::CorrelationBasis::returns}};

  std::vector<std::string> files;
  std::string manifest;
  std::string output_dir;
  unsigned degree = 226;
  chebfolio::TimeAxis axis = chebfolio::TimeAxis::days;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("files", files, "Price CSV files (header date,close)");
    cmd->add_option("--manifest", manifest, "JSON manifest of {ticker, path, is_market}");
    cmd->add_option("-o,--output", output_dir, "Output directory")->required();
    cmd->add_option("--degree", degree, "Expansion degree N (N+1 terms)")->capture_default_str();
    cmd->add_option("--time-axis", axis, "Time coordinate: days or index")
        ->transform(CLI::CheckedTransformer(axes, CLI::ignore_case));
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "Write per-asset Chebyshev coefficient files");
  add_common(fit_cmd);

  chebfolio::CorrelationBasis basis = chebfolio::CorrelationBasis::prices;
  bool drop_constant = false;
  std::optional<std::string> market;
  std::optional<double> rf;
  std::optional<double> erm;
  std::optional<std::string> heatmap;
  CLI::App* report_cmd = app.add_subcommand("report", "Cosine and correlation matrices, agreement, CAPM");
  add_common(report_cmd);
  report_cmd->add_option("--basis", basis, "Correlation basis: prices or returns")
      ->transform(CLI::CheckedTransformer(bases, CLI::ignore_case));
  report_cmd->add_flag("--drop-constant-term", drop_constant, "Exclude c_0 from cosines");
  report_cmd->add_option("--market-ticker", market, "Ticker of the market series");
  report_cmd->add_option("--rf", rf, "Risk-free rate per period");
  report_cmd->add_option("--erm", erm, "Expected market return per period");
  report_cmd->add_option("--heatmap", heatmap, "Write an SVG heatmap (relative paths land in the output directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "chebfolio: " << e.what() << "\n";
    return chebfolio::exit_code(chebfolio::ErrorKind::configuration);
  }

  chebfolio::InputSpec inputs;
  for (const auto& f : files) inputs.files.emplace_back(f);
  if (!manifest.empty()) inputs.manifest = manifest;

  try {
    chebfolio::RunLog log;
    if (*fit_cmd) {
      const auto out = chebfolio::run_fit({inputs, degree, axis, output_dir}, log);
      emit(log);
      commit(out);
    } else {
      chebfolio::ReportConfig cfg;
      cfg.degree = degree;
      cfg.time_axis = axis;
      cfg.basis = basis;
      cfg.drop_constant_term = drop_constant;
      cfg.market_ticker = market;
      cfg.risk_free_rate = rf;
      cfg.expected_market_return = erm;
      cfg.heatmap = heatmap;
      const auto result = chebfolio::run_report({inputs, cfg, output_dir}, log);
      emit(log);
      commit(result.outputs);
    }
  } catch (const chebfolio::Error& e) {
    spdlog::error(e.what());
    return chebfolio::exit_code(e.kind());
  } catch (const std::exception& e) {
    spdlog::error(e.what());
    return 1;
  }
  return 0;
}
