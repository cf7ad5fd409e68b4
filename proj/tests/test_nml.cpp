#include <cmath>

#include "doctest.h"
#include "palm/nml.hpp"
#include "test_support.hpp"

using namespace palm;

TEST_CASE("log_comp base cases") {
  CHECK(log_comp(5, 1).at(1) == 0.0);
  CHECK(log_comp(1, 2).at(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_comp(2, 2).at(2) == doctest::Approx(std::log2(2.5)).epsilon(1e-12));
  CHECK(log_comp(2, 3).at(3) == doctest::Approx(std::log2(4.5)).epsilon(1e-12));
  CHECK(log_comp(0, 4).at(3) == 0.0);
  CHECK_THROWS_AS(log_comp(3, 0), std::invalid_argument);
}

TEST_CASE("log_comp_brute examples and limits") {
  CHECK(log_comp_brute(1, 3) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(log_comp_brute(0, 5) == 0.0);
  CHECK(log_comp_brute(2, 2) == doctest::Approx(std::log2(2.5)).epsilon(1e-12));
  CHECK_THROWS_AS(log_comp_brute(16, 2), std::invalid_argument);
  CHECK_THROWS_AS(log_comp_brute(3, 9), std::invalid_argument);
}

TEST_CASE("recursion matches brute force for n <= 12, K <= 6") {
  for (int64_t n = 0; n <= 12; ++n) {
    auto table = log_comp(n, 6);
    for (int k = 1; k <= 6; ++k)
      CHECK(std::abs(table.at(k) - log_comp_brute(n, k)) <= 1e-9);
  }
}

TEST_CASE("comp table is monotone in K") {
  auto table = log_comp(100, 12);
  for (int k = 2; k <= 12; ++k) CHECK(table.at(k) >= table.at(k - 1));
}

namespace {

Partition halves(const GridSpec& g) {
  Partition p;
  p.grid = g;
  p.regions.push_back(make_region({Rect{0, 0, g.width / 2, g.height}}));
  p.regions.push_back(make_region({Rect{g.width / 2, 0, g.width, g.height}}));
  return p;
}

}  // namespace

TEST_CASE("comp_brute_2d equals the multinomial complexity") {
  auto g = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);  // 2x2 cells

  Partition whole;
  whole.grid = g;
  whole.regions.push_back(make_region({Rect{0, 0, 2, 2}}));
  CHECK(comp_brute_2d(3, whole) == doctest::Approx(0.0).epsilon(1e-12));

  auto two = halves(g);
  CHECK(std::abs(comp_brute_2d(2, two) - std::log2(2.5)) <= 1e-9);
  CHECK(std::abs(comp_brute_2d(2, two) - log_comp(2, 2).at(2)) <= 1e-9);

  Partition three;
  three.grid = g;
  three.regions.push_back(make_region({Rect{0, 0, 1, 2}}));
  three.regions.push_back(make_region({Rect{1, 0, 2, 1}}));
  three.regions.push_back(make_region({Rect{1, 1, 2, 2}}));
  CHECK(std::abs(comp_brute_2d(1, three) - std::log2(3.0)) <= 1e-9);
  CHECK(std::abs(comp_brute_2d(1, three) - log_comp(1, 3).at(3)) <= 1e-9);

  auto big = GridSpec::from_extent(0.25, 0.0, 0.0, 1.0, 1.0);  // 16 cells
  Partition too_big;
  too_big.grid = big;
  too_big.regions.push_back(make_region({Rect{0, 0, 4, 4}}));
  CHECK_THROWS_AS(comp_brute_2d(2, too_big), std::invalid_argument);
}

TEST_CASE("data_code_length_2d hand examples") {
  // Whole sample space, eps = 0.001: n * log2(1e6) bits.
  auto g = GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0);
  Partition whole;
  whole.grid = g;
  whole.regions.push_back(make_region({Rect{0, 0, g.width, g.height}}, 7));
  Dataset2D data;
  data.grid = g;
  for (int i = 0; i < 7; ++i) data.points.push_back({int64_t{10} * i, int64_t{20} * i});
  CHECK(data_code_length_2d(whole, data) ==
        doctest::Approx(7.0 * std::log2(1e6)).epsilon(1e-12));

  // Halves with eps = 0.5, one point each: 4 + log2 2.5 bits.
  auto g2 = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);
  auto p2 = halves(g2);
  Dataset2D d2;
  d2.grid = g2;
  d2.points.push_back({0, 0});
  d2.points.push_back({1, 1});
  recount(p2, d2);
  CHECK(data_code_length_2d(p2, d2) ==
        doctest::Approx(4.0 + std::log2(2.5)).epsilon(1e-12));

  // Empty data: zero bits for any partition.
  Dataset2D empty;
  empty.grid = g2;
  auto p3 = halves(g2);
  recount(p3, empty);
  CHECK(data_code_length_2d(p3, empty) == 0.0);
}

TEST_CASE("data_code_length_2d invariances") {
  auto g = GridSpec::from_extent(0.25, 0.0, 0.0, 1.0, 1.0);
  Dataset2D data;
  data.grid = g;
  Rng rng(99);
  for (int i = 0; i < 40; ++i)
    data.points.push_back({static_cast<int64_t>(rng.next_below(5)),
                           static_cast<int64_t>(rng.next_below(5))});

  Partition p = testing::grid_partition(g, {1, 3}, {{2}, {1, 3}, {2}});
  recount(p, data);
  double bits = data_code_length_2d(p, data);

  Partition relabeled;
  relabeled.grid = g;
  for (auto it = p.regions.rbegin(); it != p.regions.rend(); ++it) relabeled.regions.push_back(*it);
  CHECK(data_code_length_2d(relabeled, data) == doctest::Approx(bits).epsilon(1e-14));

  // Translating S leaves every count and cell area unchanged.
  auto shifted = GridSpec::from_extent(0.25, 3.0, -2.0, 1.0, 1.0);
  Partition q = p;
  q.grid = shifted;
  Dataset2D moved = data;
  moved.grid = shifted;
  CHECK(data_code_length_2d(q, moved) == bits);
}

TEST_CASE("ml_densities") {
  auto g = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);
  auto p = halves(g);
  Dataset2D data;
  data.grid = g;
  data.points.push_back({0, 0});
  data.points.push_back({0, 1});
  recount(p, data);

  auto d = ml_densities(p, data);
  CHECK(d.values[0] == doctest::Approx(2.0));
  CHECK(d.values[1] == 0.0);

  double mass = 0.0;
  for (size_t j = 0; j < d.values.size(); ++j) mass += d.values[j] * p.regions[j].area(g);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  Partition whole;
  whole.grid = g;
  whole.regions.push_back(make_region({Rect{0, 0, 2, 2}}, 2));
  CHECK(ml_densities(whole, data).values[0] == doctest::Approx(1.0));

  Dataset2D empty;
  empty.grid = g;
  CHECK_THROWS_AS(ml_densities(p, empty), std::invalid_argument);
}

TEST_CASE("quarters with equal counts give density one") {
  auto g = GridSpec::from_extent(0.5, 0.0, 0.0, 1.0, 1.0);
  Partition p = testing::grid_partition(g, {1}, {{1}, {1}});
  Dataset2D data;
  data.grid = g;
  data.points.push_back({0, 0});
  data.points.push_back({1, 0});
  data.points.push_back({0, 1});
  data.points.push_back({1, 1});
  recount(p, data);
  for (double v : ml_densities(p, data).values) CHECK(v == doctest::Approx(1.0));
}
