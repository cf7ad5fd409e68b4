#include "doctest.h"
#include "palm/io.hpp"
#include "palm/palm.hpp"
#include "palm/synthdata.hpp"
#include "test_support.hpp"

using namespace palm;

TEST_CASE("points CSV round-trips through snapping") {
  auto grid = GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0);
  auto truth = gen_true_partition(3, 3, 3, 0.4, grid);
  auto data = sample_histogram(truth, 200, 4);

  auto csv = points_to_csv(data);
  auto parsed = parse_points_csv(csv);
  auto back = snap_to_grid(parsed, grid);
  CHECK(back.points == data.points);

  // And the emitted file is stable.
  CHECK(points_to_csv(back) == csv);
}

TEST_CASE("points CSV errors carry line numbers") {
  CHECK_THROWS_AS(parse_points_csv("x,y\n0.1,0.2\na,b\n"), CsvError);
  try {
    parse_points_csv("x,y\n0.1,0.2\na,b\n");
  } catch (const CsvError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_points_csv("foo,bar\n1,2\n"), CsvError);
  CHECK(parse_points_csv("").empty());
}

TEST_CASE("partition JSON round-trips structurally") {
  auto grid = GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0);
  auto truth = gen_true_partition(8, 4, 4, 0.5, grid);
  auto data = sample_histogram(truth, 3000, 9);
  PalmConfig config;
  config.k_max = 12;
  auto fit = palm_fit(data, config);

  PartitionDoc doc{fit.partition, fit.densities, {}};
  doc.meta.n = data.n();
  doc.meta.total_bits = fit.total_bits.total_bits();
  doc.meta.k_max = config.k_max;

  auto text = partition_to_json(doc);
  auto loaded = partition_from_json(text);
  CHECK(loaded.partition.grid == doc.partition.grid);
  REQUIRE(loaded.partition.k() == doc.partition.k());
  for (int64_t j = 0; j < doc.partition.k(); ++j) {
    auto js = static_cast<size_t>(j);
    CHECK(loaded.partition.regions[js].rects == doc.partition.regions[js].rects);
    CHECK(loaded.partition.regions[js].count == doc.partition.regions[js].count);
    CHECK(loaded.densities.values[js] == doc.densities.values[js]);
  }
  CHECK(loaded.meta.n == data.n());
  CHECK(loaded.meta.total_bits == doc.meta.total_bits);

  // Serialization is byte-stable across a load/save cycle.
  CHECK(partition_to_json(loaded) == text);
}

TEST_CASE("truth JSON reconstructs every kind") {
  auto grid = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);

  auto part = gen_true_partition(5, 3, 3, 0.4, grid);
  auto loaded = truth_from_json(truth_to_json(part, 5));
  CHECK(loaded.kind == GroundTruth::Kind::partition);
  CHECK(loaded.partition.k() == part.partition.k());
  CHECK(loaded.density(0.305, 0.705) == doctest::Approx(part.density(0.305, 0.705)));

  auto [qd, quad] = gen_quadrant(6, 100, grid);
  auto lq = truth_from_json(truth_to_json(quad, 6));
  CHECK(lq.kind == GroundTruth::Kind::quadrant);
  CHECK(lq.cut_x == quad.cut_x);
  CHECK(lq.cut_y == quad.cut_y);

  auto [sd, sine] = gen_sine(3, 99, 7, grid);
  auto ls = truth_from_json(truth_to_json(sine, 7));
  CHECK(ls.kind == GroundTruth::Kind::sine);
  CHECK(ls.sine_m == 3);
  CHECK(ls.level_above == doctest::Approx(sine.level_above));

  auto gg = GridSpec::from_extent(0.05, -5.0, -5.0, 10.0, 10.0);
  auto [gd, gauss] = gen_gaussian(0.5, 10, 8, gg);
  auto lg = truth_from_json(truth_to_json(gauss, 8));
  CHECK(lg.kind == GroundTruth::Kind::gaussian);
  CHECK(lg.correlation == 0.5);
  CHECK(lg.density(0.125, -0.375) == doctest::Approx(gauss.density(0.125, -0.375)));
}

TEST_CASE("eval report serializes infinities as strings") {
  EvalReport r;
  r.mise = 0.5;
  r.l_true = std::numeric_limits<double>::infinity();
  r.l_true_mean = std::numeric_limits<double>::infinity();
  r.learned_boundary_empty = true;
  auto text = eval_report_to_json(r);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(text.find("\"mise\": 0.5") != std::string::npos);
}
