#include <set>
#include <sstream>

#include "doctest.h"
#include "mpr/figures.hpp"

using namespace mpr;

namespace {

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_SUITE("figures") {

TEST_CASE("every recipe yields a table and a plot") {
  FigureOptions quick;
  quick.iterations = 3;
  for (const auto& id : figure_ids()) {
    CAPTURE(id);
    const auto out = reproduce_figure(id, quick);
    CHECK(out.id == id);
    CHECK_FALSE(out.table.rows.empty());
    CHECK_FALSE(out.plot.series.empty());
    const auto svg = render_svg(out.plot);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  CHECK_THROWS_AS(reproduce_figure("fig99"), std::invalid_argument);
}

TEST_CASE("fig5 schema and sawtooth") {
  const auto out = reproduce_figure("fig5");
  CHECK(out.table.columns == std::vector<std::string>{"delay_ns", "distance_m"});
  CHECK(out.table.rows.size() == 1001);
  CHECK(std::stod(out.table.rows[0][1]) == doctest::Approx(30.0));
  CHECK(std::stod(out.table.rows[500][1]) == doctest::Approx(std::stod(out.table.rows[0][1])));
}

TEST_CASE("fig15 centres on half the rollover distance") {
  const auto out = reproduce_figure("fig15");
  const auto col = column(out.table, "fitted_distance_m");
  double sum = 0.0;
  for (const auto& row : out.table.rows) sum += std::stod(row[col]);
  CHECK(sum / out.table.rows.size() == doctest::Approx(37.5).epsilon(0.1));
}

TEST_CASE("fig12 emits both hop sizes and both settings") {
  FigureOptions quick;
  quick.iterations = 2;
  const auto out = reproduce_figure("fig12", quick);
  const auto hop = column(out.table, "hop_mhz");
  const auto setting = column(out.table, "setting");
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : out.table.rows) seen.emplace(row[hop], row[setting]);
  CHECK(seen.size() == 4);
  CHECK(out.table.rows.size() == 4 * default_snr_grid().size());
}

TEST_CASE("csv writer") {
  Table t{{"a", "b"}, {}};
  t.add_row({"1", "x"});
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "a,b\n1,x\n");
  CHECK_THROWS_AS(t.add_row({"1"}), std::logic_error);
}

TEST_CASE("svg escapes labels and skips non-finite points") {
  Plot p{"a < b & c", "x", "y", {{"s", {0.0, 1.0, 2.0}, {0.0, NAN, 1.0}, false}}};
  const auto svg = render_svg(p);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(render_svg(Plot{}).find("</svg>") != std::string::npos);
}

TEST_CASE("default detector threshold reproduces from its calibration") {
  const auto points = calibrate_detector({{"ism", FrequencyPlan::ism_profile()}}, {20.0}, {64}, 5000, 99.0, 1);
  REQUIRE(points.size() == 1);
  CHECK(points[0].threshold_rad == doctest::Approx(kDefaultDetectorThreshold).epsilon(1e-3));
  const auto table = calibration_table(points);
  CHECK(table.columns.back() == "threshold_rad");
}

}  // TEST_SUITE
