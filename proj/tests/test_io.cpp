#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "fidnp/error.hpp"
#include "fidnp/io.hpp"

using namespace fidnp;

namespace {

std::string message_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("grouped CSV: order of first appearance, quoting, default label") {
  const auto d = io::parse_grouped_csv("arm,time\nB,2.5\n\"A\",1.0\nB,0.5\n\"A, late\",3\n", "arm");
  REQUIRE(d.groups.size() == 3);
  CHECK(d.groups[0].label == "B");
  CHECK(d.groups[0].values == std::vector<double>{0.5, 2.5});
  CHECK(d.groups[1].label == "A");
  CHECK(d.groups[2].label == "A, late");

  const auto single = io::parse_grouped_csv("time,other\n2,x\n1,y\n\n", std::nullopt);
  REQUIRE(single.groups.size() == 1);
  CHECK(single.groups[0].label == "all");
  CHECK(single.groups[0].values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("grouped CSV errors carry positions and are never silent") {
  CHECK(kind_of([] { io::parse_grouped_csv("value\n1\n", std::nullopt); }) == ErrorKind::Config);
  CHECK(kind_of([] { io::parse_grouped_csv("time\n1\n", std::string("arm")); }) == ErrorKind::Config);
  CHECK(kind_of([] { io::parse_grouped_csv("", std::nullopt); }) == ErrorKind::Config);
  CHECK(kind_of([] { io::parse_grouped_csv("time\n", std::nullopt); }) == ErrorKind::Config);

  const auto bad_number = message_of([] { io::parse_grouped_csv("g,time\na,1\na,abc\n", "g", "time", "d.csv"); });
  CHECK(bad_number.find("d.csv:3:3") != std::string::npos);

  const auto ragged = message_of([] { io::parse_grouped_csv("time\n1\n2,3\n", std::nullopt, "time", "r.csv"); });
  CHECK(ragged.find("r.csv:3") != std::string::npos);

  const auto nonpos = message_of([] { io::parse_grouped_csv("time\n1\n0\n2\n-4\n", std::nullopt); });
  CHECK(nonpos.find("2 nonpositive") != std::string::npos);
  CHECK(nonpos.find("3, 5") != std::string::npos);

  CHECK(kind_of([] { io::parse_grouped_csv("time\n\"1\n", std::nullopt); }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::read_grouped_csv("/nonexistent/dir/x.csv", std::nullopt); }) == ErrorKind::Io);
}

TEST_CASE("grid specification") {
  const auto g = io::parse_grid("0.5:2.5:5");
  CHECK(g == std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5});
  CHECK(io::parse_grid("1:3:1") == std::vector<double>{1.0});
  for (const char* bad : {"1:2", "0:1:5", "2:1:3", "1:2:0", "1:2:2.5", "a:2:3"}) {
    CHECK_THROWS_AS(io::parse_grid(bad), Error);
  }
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 0.6464466094067263}) {
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("data digest depends on values and labels only") {
  const auto a = io::parse_grouped_csv("g,time\nx,1\nx,2\n", "g");
  const auto b = io::parse_grouped_csv("time,g\n2,x\n1,x\n", "g");
  const auto c = io::parse_grouped_csv("g,time\ny,1\ny,2\n", "g");
  CHECK(io::data_digest(a) == io::data_digest(b));
  CHECK(io::data_digest(a) != io::data_digest(c));
  CHECK(io::data_digest(a).rfind("fnv1a64:", 0) == 0);
  CHECK(io::data_digest(a).size() == 8 + 16);
}

TEST_CASE("ensemble dump round trip reproduces focus samples") {
  const auto sample = ObservedSample::make({0.7, 1.3, 2.2, 4.0});
  const RngStream rng(31, 0);
  const auto e = fit_ensemble(sample, SelectionRule::MonotoneSpline, 50, rng);
  const std::string csv = io::ensemble_csv(e);
  CHECK(csv.rfind("replicate_index,u_1,u_2,u_3,u_4\n", 0) == 0);
  const auto back = io::parse_ensemble_csv(csv, sample, SelectionRule::MonotoneSpline, rng);
  REQUIRE(back.draws() == 50);
  for (const FocusParameter& f : {FocusParameter{CdfAt{1.7, {}}}, FocusParameter{Quantile{0.4, {}}}}) {
    CHECK(extract(std::span(&e, 1), f).values == extract(std::span(&back, 1), f).values);
  }
  CHECK_THROWS_AS(io::parse_ensemble_csv("replicate_index,u_1\n0,0.5\n", sample, SelectionRule::LogLinear, rng), Error);

  const auto meta = io::ensemble_metadata(e, "fnv1a64:0000000000000000");
  CHECK(meta["seed"] == 31);
  CHECK(meta["rule"] == "spline");
  CHECK(meta["m"] == 50);
  CHECK(meta["n"] == 4);
}

TEST_CASE("band CSV rows are ordered lower <= median <= upper") {
  const auto sample = ObservedSample::make({0.4, 0.9, 1.1, 2.0, 3.5});
  const auto e = fit_ensemble(sample, SelectionRule::LogLinear, 400, RngStream(2, 0));
  const std::vector<double> grid{0.2, 1.0, 2.0, 5.0};
  const std::vector<double> levels{0.8, 0.95};
  std::istringstream csv(io::band_csv(e, grid, levels));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "level,t,F_lower,F_median,F_upper");
  std::size_t rows = 0;
  double prev_level = 0.0;
  while (std::getline(csv, line)) {
    double level = 0, t = 0, lo = 0, med = 0, hi = 0;
    char c = 0;
    std::istringstream(line) >> level >> c >> t >> c >> lo >> c >> med >> c >> hi;
    CHECK(level >= prev_level);
    prev_level = level;
    CHECK(lo <= med);
    CHECK(med <= hi);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    ++rows;
  }
  CHECK(rows == grid.size() * levels.size());
}

TEST_CASE("focus report JSON fields") {
  const auto sample = ObservedSample::make({1.0, 2.0, 3.0});
  const auto e = fit_ensemble(sample, SelectionRule::LogLinear, 200, RngStream(3, 0));
  const std::vector<double> levels{0.9};
  const auto j = io::focus_report(extract(std::span(&e, 1), Quantile{0.5, {}}), levels);
  for (const char* key : {"focus", "m", "m_effective", "sentinels", "mean", "sd", "quantiles", "intervals"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["m"] == 200);
  CHECK(j["intervals"].size() == 1);
}

}  // TEST_SUITE
