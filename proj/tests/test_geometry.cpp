#include <vector>

#include "doctest.h"
#include "palm/geometry.hpp"
#include "palm/synthdata.hpp"
#include "test_support.hpp"

using namespace palm;

TEST_CASE("snap_to_grid rounds and rejects") {
  auto g = GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0);

  std::vector<std::pair<double, double>> ok{{0.2503, 0.999}, {0.0005, 0.0}};
  auto data = snap_to_grid(ok, g);
  CHECK(data.points[0] == GridPoint{250, 999});
  CHECK(data.points[1] == GridPoint{1, 0});  // half-up tie
  CHECK(data.coord(0).first == doctest::Approx(0.250).epsilon(1e-12));

  std::vector<std::pair<double, double>> bad{{0.5, 0.5}, {1.2, 0.5}};
  try {
    snap_to_grid(bad, g);
    FAIL("expected SnapError");
  } catch (const SnapError& e) {
    REQUIRE(e.indices().size() == 1);
    CHECK(e.indices()[0] == 1);
  }
}

TEST_CASE("count_points half-open with closed top boundary") {
  auto g = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);
  Dataset2D data;
  data.grid = g;
  data.points.push_back({1, 1});  // the point (0.5, 0.5)

  Region left = make_region({Rect{0, 0, 1, 2}});
  CHECK(count_points(left, data) == 0);

  Region right = make_region({Rect{1, 0, 2, 2}});
  CHECK(count_points(right, data) == 1);

  Dataset2D spread;
  spread.grid = g;
  spread.points = {{0, 0}, {1, 0}, {0, 2}, {2, 2}};  // includes boundary points
  Region all = make_region({Rect{0, 0, 2, 2}});
  CHECK(count_points(all, spread) == 4);
}

TEST_CASE("are_neighbors shares an edge, not a corner") {
  Region a = make_region({Rect{0, 0, 5, 10}});
  Region b = make_region({Rect{5, 0, 10, 10}});
  CHECK(are_neighbors(a, b));
  CHECK(are_neighbors(b, a));

  Region c = make_region({Rect{0, 0, 5, 5}});
  Region d = make_region({Rect{5, 5, 10, 10}});
  CHECK_FALSE(are_neighbors(c, d));

  Region e = make_region({Rect{0, 0, 2, 10}});
  CHECK_FALSE(are_neighbors(e, b));
  CHECK_FALSE(are_neighbors(a, a));  // irreflexive
}

TEST_CASE("project returns the requested coordinate in input order") {
  auto g = GridSpec::from_extent(0.1, 0.0, 0.0, 1.0, 1.0);
  Dataset2D data;
  data.grid = g;
  data.points = {{1, 9}, {3, 2}};
  Rect all{0, 0, 10, 10};

  auto xs = project(data, all, Direction::vertical);
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == doctest::Approx(0.1));
  CHECK(xs[1] == doctest::Approx(0.3));

  auto ys = project(data, all, Direction::horizontal);
  CHECK(ys[0] == doctest::Approx(0.9));
  CHECK(ys[1] == doctest::Approx(0.2));

  Rect empty_rect{5, 5, 7, 7};
  CHECK(project(data, empty_rect, Direction::vertical).empty());
}

TEST_CASE("random partitions cover all points exactly once") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto grid = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);
    auto truth = gen_true_partition(seed, 3, 3, 0.3, grid);
    validate_partition(truth.partition);

    auto data = sample_histogram(truth, 500, seed * 77 + 1);
    int64_t total = 0;
    int64_t area = 0;
    for (const auto& region : truth.partition.regions) {
      total += count_points(region, data);
      area += region.area_units;
    }
    CHECK(total == data.n());
    CHECK(area == grid.cells());

    // Symmetry and irreflexivity of adjacency.
    const auto& regions = truth.partition.regions;
    for (size_t i = 0; i < regions.size(); ++i) {
      CHECK_FALSE(are_neighbors(regions[i], regions[i]));
      for (size_t j = i + 1; j < regions.size(); ++j)
        CHECK(are_neighbors(regions[i], regions[j]) == are_neighbors(regions[j], regions[i]));
    }
  }
}

TEST_CASE("validate_partition catches broken caches") {
  auto g = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);
  Partition p = testing::grid_partition(g, {1}, {{}, {}});
  validate_partition(p);

  Partition hole;
  hole.grid = g;
  hole.regions.push_back(make_region({Rect{0, 0, 1, 2}}));
  CHECK_THROWS_AS(validate_partition(hole), std::logic_error);

  Partition wrong_count = p;
  wrong_count.regions[0].count = 5;
  Dataset2D data;
  data.grid = g;
  CHECK_THROWS_AS(validate_partition(wrong_count, data), std::logic_error);
}
