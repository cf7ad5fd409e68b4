#include <cmath>

#include "doctest.h"
#include "palm/eval.hpp"
#include "palm/nml.hpp"
#include "test_support.hpp"

using namespace palm;

namespace {

GroundTruth uniform_truth(const GridSpec& g) {
  GroundTruth truth;
  truth.kind = GroundTruth::Kind::partition;
  truth.grid = g;
  truth.partition.grid = g;
  truth.partition.regions.push_back(make_region({Rect{0, 0, g.width, g.height}}));
  truth.densities.values = {1.0 / (g.extent_x() * g.extent_y())};
  truth.region_raster = rasterize_partition(truth.partition);
  return truth;
}

}  // namespace

TEST_CASE("mise_single hand values") {
  auto g = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);
  auto truth = uniform_truth(g);

  // Identical estimate: zero error.
  CHECK(mise_single(truth, truth.partition, truth.densities) == 0.0);

  // Halves at densities 1.5 / 0.5 against the uniform truth: integral 0.25.
  Partition halves = testing::grid_partition(g, {50}, {{}, {}});
  DensityVector d{{1.5, 0.5}};
  CHECK(mise_single(truth, halves, d) == doctest::Approx(0.25).epsilon(1e-9));

  // An equal-density partition drawn differently is still exact.
  Partition quarters = testing::grid_partition(g, {30}, {{40}, {60}});
  DensityVector ones{{1.0, 1.0, 1.0, 1.0}};
  CHECK(mise_single(truth, quarters, ones) == 0.0);
}

TEST_CASE("boundary_pixels basic shapes") {
  auto g = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);

  Partition whole;
  whole.grid = g;
  whole.regions.push_back(make_region({Rect{0, 0, g.width, g.height}}));
  CHECK(boundary_pixels(whole, 0.01).pixels.empty());

  Partition halves = testing::grid_partition(g, {50}, {{}, {}});
  auto pixels = boundary_pixels(halves, 0.01);
  CHECK(pixels.pixels.size() == 100);
  for (const auto& p : pixels.pixels) CHECK(p[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(boundary_pixels(halves, 0.015), std::invalid_argument);
}

TEST_CASE("L-shaped pair produces pixels only along the staircase") {
  auto g = GridSpec::from_extent(0.25, 0.0, 0.0, 1.0, 1.0);  // 4x4 cells
  Partition p;
  p.grid = g;
  p.regions.push_back(make_region({Rect{0, 0, 2, 4}, Rect{2, 0, 4, 2}}));  // L shape
  p.regions.push_back(make_region({Rect{2, 2, 4, 4}}));
  validate_partition(p);

  auto segs = inner_segments(p);
  REQUIRE(segs.size() == 2);  // vertical x=0.5 on top half, horizontal y=0.5 on right half
  for (const auto& seg : segs) {
    if (seg.vertical) {
      CHECK(seg.pos == 2);
      CHECK(seg.lo == 2);
      CHECK(seg.hi == 4);
    } else {
      CHECK(seg.pos == 2);
      CHECK(seg.lo == 2);
      CHECK(seg.hi == 4);
    }
  }

  auto pixels = boundary_pixels(p, 0.25);
  CHECK(pixels.pixels.size() == 4);  // two per half-length segment
}

TEST_CASE("boundary_losses identities and shifts") {
  auto g = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);
  Partition at50 = testing::grid_partition(g, {50}, {{}, {}});
  Partition at51 = testing::grid_partition(g, {51}, {{}, {}});
  auto p50 = boundary_pixels(at50, 0.01);
  auto p51 = boundary_pixels(at51, 0.01);

  auto same = boundary_losses(p50, p50);
  CHECK(same.l_learn == 0.0);
  CHECK(same.l_true == 0.0);

  auto shifted = boundary_losses(p51, p50);
  CHECK(shifted.l_learn == doctest::Approx(100 * 0.01 * 0.01).epsilon(1e-9));
  CHECK(shifted.l_true == doctest::Approx(0.01).epsilon(1e-9));

  // Superset: extra spurious segment pays in l_learn only.
  Partition two_lines = testing::grid_partition(g, {50, 70}, {{}, {}, {}});
  auto p_extra = boundary_pixels(two_lines, 0.01);
  auto losses = boundary_losses(p_extra, p50);
  CHECK(losses.l_true == 0.0);
  CHECK(losses.l_learn == doctest::Approx(100 * 0.2 * 0.2).epsilon(1e-9));

  // Swapping the arguments swaps the outputs.
  auto forward = boundary_losses(p_extra, p50);
  auto backward = boundary_losses(p50, p_extra);
  CHECK(forward.l_learn == backward.l_true);
  CHECK(forward.l_true == backward.l_learn);
}

TEST_CASE("empty learned boundary yields the infinity sentinel") {
  auto g = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);
  Partition whole;
  whole.grid = g;
  whole.regions.push_back(make_region({Rect{0, 0, g.width, g.height}}));
  auto none = boundary_pixels(whole, 0.01);
  auto some = boundary_pixels(testing::grid_partition(g, {50}, {{}, {}}), 0.01);

  auto losses = boundary_losses(none, some);
  CHECK(losses.l_learn == 0.0);
  CHECK(std::isinf(losses.l_true));

  auto both_empty = boundary_losses(none, none);
  CHECK(both_empty.l_learn == 0.0);
  CHECK(both_empty.l_true == 0.0);
}

TEST_CASE("fixed_grid shapes") {
  auto g = GridSpec::from_extent(0.01, 0.0, 0.0, 1.0, 1.0);
  Dataset2D data;
  data.grid = g;
  Rng rng(12);
  for (int i = 0; i < 500; ++i)
    data.points.push_back({static_cast<int64_t>(rng.next_below(100)),
                           static_cast<int64_t>(rng.next_below(100))});

  auto [p4, d4] = fixed_grid(data, 4);
  CHECK(p4.k() == 4);
  validate_partition(p4, data);

  auto [p5, d5] = fixed_grid(data, 5);
  CHECK(p5.k() == 6);  // 3x2, the smallest near-square cover of 5

  auto [p1, d1] = fixed_grid(data, 1);
  CHECK(p1.k() == 1);

  double mass = 0.0;
  for (size_t j = 0; j < d4.values.size(); ++j) mass += d4.values[j] * p4.regions[j].area(g);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sine curve pixels lie on the curve at the requested spacing") {
  auto g = GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0);
  auto pixels = sine_curve_pixels(2, g, 0.01);
  REQUIRE(pixels.pixels.size() > 50);
  for (const auto& p : pixels.pixels)
    CHECK(p[1] == doctest::Approx(sine_boundary(2, p[0])).epsilon(1e-6));
  // Arc length of the m=2 curve exceeds 1, so there are more than 100 pixels.
  CHECK(pixels.pixels.size() >= 100);
}
