#include <doctest.h>

#include "qkdbound/io.hpp"

using namespace qkdbound;

TEST_CASE("fixed9 formatting") {
  CHECK(format_fixed9(1.0) == "1.000000000");
  CHECK(format_fixed9(0.35483870967741937) == "0.354838710");
  CHECK(format_fixed9(0.0) == "0.000000000");
  CHECK(format_fixed9(1.5849625007211562) == "1.584962501");
}

TEST_CASE("rate curve CSV layout and round trip") {
  KeyRateBound row;
  row.visibility = 0.99;
  row.rate = 0.87654321055;
  row.objective = 0.87654321055;
  row.p_question = 0.9;
  row.settings = "zbasis|zbasis";
  row.gamma_feasible = false;
  row.convention = ThresholdConvention::AsDerived;
  KeyRateBound zero;
  zero.visibility = 0.25;
  zero.settings = "none";
  zero.gamma_feasible = true;

  const std::string csv = rate_curve_csv({zero, row});
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        std::vector<std::string>{"v", "rate_bits", "objective_bits",
                                 "p_question", "settings_descriptor",
                                 "gamma_feasible", "convention"});
  CHECK(rows[2][0] == "0.990000000");
  CHECK(rows[2][1] == "0.876543211");
  CHECK(rows[2][5] == "false");
  CHECK(rows[2][6] == "as_derived");

  // parse back and re-format: identical at the emitted precision
  for (std::size_t r = 1; r < rows.size(); ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(format_fixed9(std::stod(rows[r][c])) == rows[r][c]);
}

TEST_CASE("repeater CSV layout") {
  RepeaterRatePoint point;
  point.repeaters = 3;
  point.bound.rate = 0.125;
  const std::string csv = repeater_curve_csv({point});
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"n", "rate_bits"});
  CHECK(rows[1] == std::vector<std::string>{"3", "0.125000000"});
}

TEST_CASE("svg rendering") {
  SvgSeries two_points{"L=0.1", {{0.4, 0.0}, {1.0, 0.9}}};
  const std::string svg = render_svg({two_points}, "visibility", "rate");
  CHECK(svg.find("<svg") == 0);

  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  CHECK(polylines == 1);
  // two coordinate pairs in the single polyline
  const std::size_t points_at = svg.find("points=\"");
  const std::size_t points_end = svg.find('"', points_at + 8);
  const std::string coords = svg.substr(points_at + 8, points_end - points_at - 8);
  CHECK(std::count(coords.begin(), coords.end(), ',') == 2);

  SvgSeries a{"L=0.1", {{0.0, 0.0}, {1.0, 1.0}}};
  SvgSeries b{"L=0.2", {{0.0, 0.0}, {1.0, 0.8}}};
  SvgSeries c{"L=0.3", {{0.0, 0.0}, {1.0, 0.6}}};
  const std::string three = render_svg({a, b, c}, "v", "rate");
  polylines = 0;
  pos = 0;
  while ((pos = three.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  CHECK(polylines == 3);

  CHECK(render_svg({a, b, c}, "v", "rate") == three);  // deterministic bytes
  CHECK_THROWS_AS(render_svg({}, "x", "y"), std::invalid_argument);
}
