#pragma once

// Price series ingestion: CSV parsing, validation, intersection alignment
// and simple returns.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chebfolio/error.hpp"

namespace chebfolio {

/// One asset's observations. Timestamps are day numbers (days since
/// 1970-01-01) or sample indices; both are plain reals here.
class PriceSeries {
 public:
  PriceSeries(std::string asset_id, std::vector<double> timestamps, std::vector<double> values)
      : asset_id_(std::move(asset_id)),
        timestamps_(std::move(timestamps)),
        values_(std::move(values)) {
    if (timestamps_.size() != values_.size()) {
      throw input_error(asset_id_ + ": timestamp and value counts differ");
    }
    if (values_.size() < 2) {
      throw input_error(asset_id_ + ": a price series needs at least 2 observations");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(timestamps_[i])) throw input_error(asset_id_ + ": non-finite timestamp");
      if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
        throw input_error(asset_id_ + ": timestamps must be strictly increasing");
      }
      if (!std::isfinite(values_[i]) || !(values_[i] > 0.0)) {
        throw input_error(asset_id_ + ": prices must be positive and finite");
      }
    }
  }

  const std::string& asset_id() const noexcept { return asset_id_; }
  std::span<const double> timestamps() const noexcept { return timestamps_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::string asset_id_;
  std::vector<double> timestamps_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Dates

/// Days since 1970-01-01 for an ISO-8601 `YYYY-MM-DD` string, or nullopt.
inline std::optional<int> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc{} || ptr != text.data() + pos + len) return std::nullopt;
    return v;
  };
  auto y = field(0, 4);
  auto m = field(5, 2);
  auto d = field(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return static_cast<int>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

inline std::string format_iso_date(int day_number) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day_number}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string shortest_repr(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// CSV

/// Parses `date,close` CSV text. `source` names the input in error messages.
inline PriceSeries parse_csv(std::istream& in, const std::string& asset_id,
                             const std::string& source = "<stream>") {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
  auto chomp = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  if (!std::getline(in, line)) throw input_error(source + ": empty file");
  ++line_no;
  chomp(line);
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (line != "date,close") {
    throw input_error(where() + "expected header 'date,close', got '" + line + "'");
  }

  struct Row {
    int day;
    double price;
    std::size_t line;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw input_error(where() + "expected 2 fields, got '" + line + "'");
    }
    const std::string_view date_text(line.data(), comma);
    const std::string_view price_text(line.data() + comma + 1, line.size() - comma - 1);
    const auto day = parse_iso_date(date_text);
    if (!day) throw input_error(where() + "invalid date '" + std::string(date_text) + "'");
    double price = 0.0;
    auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size() || price_text.empty()) {
      throw input_error(where() + "invalid price '" + std::string(price_text) + "'");
    }
    if (!std::isfinite(price)) throw input_error(where() + "non-finite price");
    if (!(price > 0.0)) {
      throw input_error(where() + "nonpositive price " + std::string(price_text));
    }
    rows.push_back({*day, price, line_no});
  }
  if (rows.empty()) throw input_error(source + ": empty file (no data rows)");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.day < b.day; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].day == rows[i - 1].day) {
      line_no = std::max(rows[i].line, rows[i - 1].line);
      throw input_error(where() + "duplicate date " + format_iso_date(rows[i].day) +
                        " (also on line " + std::to_string(std::min(rows[i].line, rows[i - 1].line)) + ")");
    }
  }
  if (rows.size() < 2) throw input_error(source + ": a price series needs at least 2 observations");

  std::vector<double> days;
  std::vector<double> prices;
  days.reserve(rows.size());
  prices.reserve(rows.size());
  for (const auto& r : rows) {
    days.push_back(r.day);
    prices.push_back(r.price);
  }
  return PriceSeries(asset_id, std::move(days), std::move(prices));
}

/// Reads a CSV file. The asset id is the filename stem unless overridden.
inline PriceSeries parse_csv_file(const std::filesystem::path& path,
                                  std::optional<std::string> asset_id = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path.string() + ": cannot open file");
  return parse_csv(in, asset_id.value_or(path.stem().string()), path.string());
}

/// Serializes a calendar-day series back to `date,close` CSV.
inline std::string to_csv(const PriceSeries& series) {
  std::string out = "date,close\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_iso_date(static_cast<int>(series.timestamps()[i]));
    out += ',';
    out += shortest_repr(series.values()[i]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
  std::string ticker;
  std::filesystem::path path;
  bool is_market = false;
};

/// JSON list of {ticker, path, is_market}; relative paths resolve against
/// the manifest's directory.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path.string() + ": cannot open manifest");
  std::vector<ManifestEntry> entries;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw input_error(path.string() + ": manifest must be a JSON array");
    for (const auto& item : doc) {
      ManifestEntry e;
      e.ticker = item.at("ticker").get<std::string>();
      e.path = item.at("path").get<std::string>();
      e.is_market = item.value("is_market", false);
      if (e.path.is_relative()) e.path = path.parent_path() / e.path;
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(path.string() + ": invalid manifest: " + ex.what());
  }
  if (entries.empty()) throw input_error(path.string() + ": manifest lists no series");
  return entries;
}

// ---------------------------------------------------------------------------
// Alignment

/// Series restricted to their common timestamps. values[i] is asset i's row.
struct AlignedPanel {
  std::vector<std::string> asset_ids;
  std::vector<double> timestamps;
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> dropped;  // per asset, observations outside the intersection

  std::size_t assets() const noexcept { return asset_ids.size(); }
  std::size_t length() const noexcept { return timestamps.size(); }

  PriceSeries series(std::size_t i) const { return {asset_ids[i], timestamps, values[i]}; }

  std::vector<PriceSeries> as_series_list() const {
    std::vector<PriceSeries> out;
    out.reserve(assets());
    for (std::size_t i = 0; i < assets(); ++i) out.push_back(series(i));
    return out;
  }

  friend bool operator==(const AlignedPanel&, const AlignedPanel&) = default;
};

inline AlignedPanel align(std::span<const PriceSeries> series) {
  if (series.size() < 2) throw input_error("alignment needs at least 2 series");

  std::vector<double> common(series[0].timestamps().begin(), series[0].timestamps().end());
  for (const auto& s : series.subspan(1)) {
    std::vector<double> next;
    std::set_intersection(common.begin(), common.end(), s.timestamps().begin(),
                          s.timestamps().end(), std::back_inserter(next));
    common = std::move(next);
  }

  if (common.size() < 3) {
    std::ostringstream msg;
    msg << "insufficient overlap: " << common.size()
        << " common timestamps (need 3); pairwise intersection sizes:";
    for (std::size_t i = 0; i < series.size(); ++i) {
      for (std::size_t j = i + 1; j < series.size(); ++j) {
        std::vector<double> both;
        std::set_intersection(series[i].timestamps().begin(), series[i].timestamps().end(),
                              series[j].timestamps().begin(), series[j].timestamps().end(),
                              std::back_inserter(both));
        msg << ' ' << series[i].asset_id() << '/' << series[j].asset_id() << '=' << both.size();
      }
    }
    throw input_error(msg.str());
  }

  AlignedPanel panel;
  panel.timestamps = common;
  for (const auto& s : series) {
    panel.asset_ids.push_back(s.asset_id());
    std::vector<double> row;
    row.reserve(common.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.size() && k < common.size(); ++i) {
      if (s.timestamps()[i] == common[k]) {
        row.push_back(s.values()[i]);
        ++k;
      }
    }
    panel.values.push_back(std::move(row));
    panel.dropped.push_back(s.size() - common.size());
  }
  return panel;
}

// ---------------------------------------------------------------------------
// Returns and time axis

/// r_t = (p_{t+1} - p_t) / p_t.
inline std::vector<double> simple_returns(std::span<const double> prices) {
  if (prices.size() < 2) throw input_error("simple returns need at least 2 prices");
  std::vector<double> out(prices.size() - 1);
  for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
    out[t] = (prices[t + 1] - prices[t]) / prices[t];
  }
  return out;
}

inline std::vector<double> simple_returns(const PriceSeries& series) {
  return simple_returns(series.values());
}

enum class TimeAxis { days, index };

/// Replaces timestamps by sample indices 0..n-1.
inline PriceSeries with_index_time(const PriceSeries& series) {
  std::vector<double> idx(series.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
  return {series.asset_id(), std::move(idx),
          std::vector<double>(series.values().begin(), series.values().end())};
}

}  // namespace chebfolio
