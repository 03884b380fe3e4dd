#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chebfolio/ingestion.hpp"
#include "oracles.hpp"

using namespace chebfolio;

namespace {

PriceSeries parse(const std::string& text, const std::string& id = "T") {
  std::istringstream in(text);
  return parse_csv(in, id, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseCsv, Basic) {
  const auto s = parse("date,close\n2021-01-04,512.0\n2021-01-05,515.5");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.asset_id(), "T");
  EXPECT_EQ(s.timestamps()[0], 18631.0);
  EXPECT_EQ(s.timestamps()[1], 18632.0);
  EXPECT_EQ(s.values()[1], 515.5);
}

TEST(ParseCsv, CrlfBomAndUnsortedRows) {
  const auto s = parse("\xEF\xBB\xBF" "date,close\r\n2021-01-06,3\r\n2021-01-04,1\r\n2021-01-05,2\r\n\r\n");
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()), (std::vector<double>{1, 2, 3}));
}

TEST(ParseCsv, Errors) {
  EXPECT_NE(error_of("date,close\n2021-01-04,1\n2021-01-05,2\n2021-01-04,3\n").find("test.csv:4: duplicate date"),
            std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-01-04,1\n2021-01-05,0\n").find("nonpositive price"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-01-04,1\n2021-01-05,-3\n").find(":3:"), std::string::npos);
  EXPECT_NE(error_of("").find("empty file"), std::string::npos);
  EXPECT_NE(error_of("date,close\n").find("empty file"), std::string::npos);
  EXPECT_NE(error_of("time,price\n2021-01-04,1\n").find("header"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-02-30,1\n2021-03-01,1\n").find("test.csv:2: invalid date"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-01-04,abc\n").find("invalid price"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-01-04,1,2\n").find("2 fields"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2021-01-04,1\n").find("at least 2"), std::string::npos);
}

TEST(ParseCsv, FileStemIsTicker) {
  const auto path = std::filesystem::temp_directory_path() / "chebfolio_ingest_ERST.csv";
  std::ofstream(path) << "date,close\n2021-01-04,10\n2021-01-05,11\n";
  EXPECT_EQ(parse_csv_file(path).asset_id(), "chebfolio_ingest_ERST");
  EXPECT_EQ(parse_csv_file(path, "ERST").asset_id(), "ERST");
  std::filesystem::remove(path);
  EXPECT_THROW(parse_csv_file(path), Error);
}

TEST(ParseCsv, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> days;
    double d = 18000 + static_cast<double>(rng() % 1000);
    for (int i = 0; i < 30; ++i) days.push_back(d += 1 + static_cast<double>(rng() % 4));
    const PriceSeries s("RT", days, oracle::random_walk(rng, 30, 123.456, 0.05));
    EXPECT_EQ(parse(to_csv(s), "RT"), s);
  }
}

TEST(Dates, IsoConversion) {
  EXPECT_EQ(parse_iso_date("1970-01-01"), 0);
  EXPECT_EQ(parse_iso_date("2020-02-29"), 18321);
  EXPECT_FALSE(parse_iso_date("2021-02-29"));
  EXPECT_FALSE(parse_iso_date("2021-1-04"));
  EXPECT_EQ(format_iso_date(18631), "2021-01-04");
}

TEST(Align, IdenticalGrid) {
  std::mt19937_64 rng(10);
  std::vector<double> t(250);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const std::vector<PriceSeries> s{{"A", t, oracle::random_walk(rng, 250)}, {"B", t, oracle::random_walk(rng, 250)}};
  const auto p = align(s);
  EXPECT_EQ(p.length(), 250u);
  EXPECT_EQ(p.dropped, (std::vector<std::size_t>{0, 0}));
}

TEST(Align, Intersection) {
  const std::vector<PriceSeries> s{{"A", {1, 2, 3, 4}, {10, 20, 30, 40}}, {"B", {2, 3, 4, 5}, {2, 3, 4, 5}}};
  const auto p = align(s);
  EXPECT_EQ(p.timestamps, (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(p.values[0], (std::vector<double>{20, 30, 40}));
  EXPECT_EQ(p.values[1], (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(p.dropped, (std::vector<std::size_t>{1, 1}));
}

TEST(Align, InsufficientOverlap) {
  const std::vector<PriceSeries> s{{"A", {1, 2, 3}, {1, 1, 1}}, {"B", {4, 5, 6}, {1, 1, 1}}};
  try {
    align(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("A/B=0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(align(std::vector<PriceSeries>{s[0]}), Error);
}

TEST(Align, IdempotentAndPermutationEquivariant) {
  std::mt19937_64 rng(11);
  std::vector<PriceSeries> s;
  for (int a = 0; a < 5; ++a) {
    std::vector<double> t;
    for (int i = 0; i < 40; ++i) {
      if (rng() % 5) t.push_back(i);
    }
    s.emplace_back("S" + std::to_string(a), t, oracle::random_walk(rng, t.size()));
  }
  const auto p = align(s);
  auto again = align(p.as_series_list());
  EXPECT_EQ(again.timestamps, p.timestamps);
  EXPECT_EQ(again.values, p.values);
  EXPECT_EQ(again.asset_ids, p.asset_ids);

  std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  std::vector<PriceSeries> shuffled;
  for (auto i : perm) shuffled.push_back(s[i]);
  const auto q = align(shuffled);
  EXPECT_EQ(q.timestamps, p.timestamps);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    EXPECT_EQ(q.asset_ids[k], p.asset_ids[perm[k]]);
    EXPECT_EQ(q.values[k], p.values[perm[k]]);
    EXPECT_EQ(q.dropped[k], p.dropped[perm[k]]);
  }
}

TEST(SimpleReturns, Examples) {
  EXPECT_EQ(simple_returns(std::vector<double>{100, 110})[0], (110.0 - 100.0) / 100.0);
  EXPECT_NEAR(simple_returns(std::vector<double>{100, 110})[0], 0.10, 1e-15);
  EXPECT_EQ(simple_returns(std::vector<double>{5, 5, 5}), (std::vector<double>{0, 0}));
  EXPECT_EQ(simple_returns(std::vector<double>{100, 50, 100}), (std::vector<double>{-0.5, 1.0}));
  EXPECT_THROW(simple_returns(std::vector<double>{1}), Error);
}

TEST(SimpleReturns, ScaleFree) {
  // Powers of two scale exactly, so the returns must match bit for bit.
  std::mt19937_64 rng(12);
  const auto p = oracle::random_walk(rng, 100);
  std::vector<double> q = p;
  for (double& v : q) v *= 8.0;
  EXPECT_EQ(simple_returns(p), simple_returns(q));
}

TEST(Manifest, LoadsEntries) {
  const auto dir = std::filesystem::temp_directory_path() / "chebfolio_manifest_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "m.json") << R"([{"ticker":"AAA","path":"a.csv"},{"ticker":"MKT","path":"/x/m.csv","is_market":true}])";
  const auto entries = load_manifest(dir / "m.json");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].path, dir / "a.csv");
  EXPECT_FALSE(entries[0].is_market);
  EXPECT_TRUE(entries[1].is_market);
  EXPECT_EQ(entries[1].path, "/x/m.csv");
  std::ofstream(dir / "bad.json") << R"({"ticker":"AAA"})";
  EXPECT_THROW(load_manifest(dir / "bad.json"), Error);
  std::filesystem::remove_all(dir);
}
