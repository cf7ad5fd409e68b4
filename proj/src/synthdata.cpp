#include "palm/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace palm {

GridSpec unit_grid() { return GridSpec::from_extent(0.001, 0.0, 0.0, 1.0, 1.0); }

GridSpec gaussian_grid() { return GridSpec::from_extent(0.001, -5.0, -5.0, 10.0, 10.0); }

double sine_boundary(int m, double x) {
  return 0.25 * std::sin(2.0 * m * std::numbers::pi_v<double> * x) + 0.5;
}

std::shared_ptr<const std::vector<int32_t>> rasterize_partition(const Partition& p) {
  const auto& g = p.grid;
  auto raster = std::make_shared<std::vector<int32_t>>(static_cast<size_t>(g.cells()), -1);
  for (size_t j = 0; j < p.regions.size(); ++j)
    for (const auto& r : p.regions[j].rects)
      for (int64_t cy = r.y0; cy < r.y1; ++cy) {
        auto* row = raster->data() + cy * g.width;
        for (int64_t cx = r.x0; cx < r.x1; ++cx) row[cx] = static_cast<int32_t>(j);
      }
  return raster;
}

namespace {

// Distinct interior cut positions, uniform on 1..units-1, sorted.
std::vector<int64_t> draw_cuts(Rng& rng, int count, int64_t units) {
  if (count > units - 1) throw std::invalid_argument("extent too small for requested cuts");
  std::set<int64_t> cuts;
  while (static_cast<int>(cuts.size()) < count)
    cuts.insert(1 + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(units - 1))));
  return {cuts.begin(), cuts.end()};
}

struct GaussTables {
  std::shared_ptr<const std::vector<double>> x_table;
  std::shared_ptr<const std::vector<double>> u_table;
  double norm = 1.0;
};

// exp tables at quarter-lattice offsets plus the grid-sum normalizer,
// cached per (correlation, grid) since building them scans every cell.
GaussTables gaussian_tables(double rho, const GridSpec& g) {
  using Key = std::tuple<double, double, double, double, int64_t, int64_t>;
  static std::map<Key, GaussTables> cache;
  static std::mutex mutex;
  Key key{rho, g.epsilon, g.origin_x, g.origin_y, g.width, g.height};
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  double s = std::sqrt(1.0 - rho * rho);
  double quarter = g.epsilon / 4.0;
  auto xt = std::make_shared<std::vector<double>>(static_cast<size_t>(4 * g.width) + 1);
  for (size_t k = 0; k < xt->size(); ++k) {
    double x = g.origin_x + static_cast<double>(k) * quarter;
    (*xt)[k] = std::exp(-0.5 * x * x);
  }
  double max_ax = std::max(std::abs(g.origin_x), std::abs(g.origin_x + g.extent_x()));
  double max_ay = std::max(std::abs(g.origin_y), std::abs(g.origin_y + g.extent_y()));
  auto u_len = static_cast<size_t>(std::ceil((max_ay + std::abs(rho) * max_ax) / quarter)) + 8;
  auto ut = std::make_shared<std::vector<double>>(u_len);
  for (size_t k = 0; k < u_len; ++k) {
    double u = static_cast<double>(k) * quarter;
    (*ut)[k] = std::exp(-u * u / (2.0 * s * s));
  }

  double c0 = 1.0 / (2.0 * std::numbers::pi_v<double> * s);
  double cell = g.epsilon * g.epsilon;
  double sum = 0.0;
  double base_u = (g.origin_y - rho * g.origin_x) / quarter;
  for (int64_t j = 0; j < g.height; ++j) {
    double row = 0.0;
    for (int64_t i = 0; i < g.width; ++i) {
      double qu = base_u + static_cast<double>(4 * j + 2) - rho * static_cast<double>(4 * i + 2);
      auto ku = static_cast<int64_t>(std::llround(qu));
      double eu;
      if (std::abs(qu - static_cast<double>(ku)) < 1e-6 &&
          static_cast<size_t>(std::abs(ku)) < u_len) {
        eu = (*ut)[static_cast<size_t>(std::abs(ku))];
      } else {
        double u = qu * quarter;
        eu = std::exp(-u * u / (2.0 * s * s));
      }
      row += (*xt)[static_cast<size_t>(4 * i + 2)] * eu;
    }
    sum += row;
  }
  GaussTables t{std::move(xt), std::move(ut), c0 * sum * cell};

  std::lock_guard lock(mutex);
  cache.emplace(key, t);
  return t;
}

}  // namespace

double GroundTruth::density(double x, double y) const {
  const auto& g = grid;
  switch (kind) {
    case Kind::partition:
    case Kind::quadrant: {
      auto cx = static_cast<int64_t>(std::floor((x - g.origin_x) / g.epsilon));
      auto cy = static_cast<int64_t>(std::floor((y - g.origin_y) / g.epsilon));
      cx = std::clamp<int64_t>(cx, 0, g.width - 1);
      cy = std::clamp<int64_t>(cy, 0, g.height - 1);
      auto id = (*region_raster)[static_cast<size_t>(cy * g.width + cx)];
      return densities.values[static_cast<size_t>(id)];
    }
    case Kind::sine:
      return y > sine_boundary(sine_m, x) ? level_above : level_below;
    case Kind::gaussian: {
      double s = std::sqrt(1.0 - correlation * correlation);
      double c0 = 1.0 / (2.0 * std::numbers::pi_v<double> * s);
      double quarter = g.epsilon / 4.0;
      double qx = (x - g.origin_x) / quarter;
      double u = y - correlation * x;
      double qu = u / quarter;
      auto kx = static_cast<int64_t>(std::llround(qx));
      auto ku = static_cast<int64_t>(std::llround(qu));
      double ex, eu;
      if (std::abs(qx - static_cast<double>(kx)) < 1e-6 && kx >= 0 &&
          static_cast<size_t>(kx) < gauss_x_table->size()) {
        ex = (*gauss_x_table)[static_cast<size_t>(kx)];
      } else {
        ex = std::exp(-0.5 * x * x);
      }
      if (std::abs(qu - static_cast<double>(ku)) < 1e-6 &&
          static_cast<size_t>(std::abs(ku)) < gauss_u_table->size()) {
        eu = (*gauss_u_table)[static_cast<size_t>(std::abs(ku))];
      } else {
        eu = std::exp(-u * u / (2.0 * s * s));
      }
      return c0 * ex * eu / gauss_norm;
    }
  }
  return 0.0;
}

double GroundTruth::grid_integral() const {
  const auto& g = grid;
  double cell = g.epsilon * g.epsilon;
  double sum = 0.0;
  for (int64_t j = 0; j < g.height; ++j) {
    double row = 0.0;
    double y = g.origin_y + (static_cast<double>(j) + 0.5) * g.epsilon;
    for (int64_t i = 0; i < g.width; ++i)
      row += density(g.origin_x + (static_cast<double>(i) + 0.5) * g.epsilon, y);
    sum += row;
  }
  return sum * cell;
}

GroundTruth gen_true_partition(uint64_t seed, int k1, int k2_each, double p_merge,
                               const GridSpec& grid) {
  if (k1 < 1 || k2_each < 1) throw std::invalid_argument("k1 and k2_each must be >= 1");
  if (p_merge < 0.0 || p_merge > 1.0) throw std::invalid_argument("p_merge must be in [0,1]");
  Rng rng(seed);

  auto x_cuts = draw_cuts(rng, k1 - 1, grid.width);
  std::vector<int64_t> x_edges{0};
  x_edges.insert(x_edges.end(), x_cuts.begin(), x_cuts.end());
  x_edges.push_back(grid.width);

  std::vector<Rect> rects;
  for (int col = 0; col < k1; ++col) {
    auto y_cuts = draw_cuts(rng, k2_each - 1, grid.height);
    std::vector<int64_t> y_edges{0};
    y_edges.insert(y_edges.end(), y_cuts.begin(), y_cuts.end());
    y_edges.push_back(grid.height);
    for (int row = 0; row < k2_each; ++row)
      rects.push_back({x_edges[static_cast<size_t>(col)], y_edges[static_cast<size_t>(row)],
                       x_edges[static_cast<size_t>(col + 1)], y_edges[static_cast<size_t>(row + 1)]});
  }

  // Merge each neighboring pair independently, in index order.
  size_t m = rects.size();
  std::vector<size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      Region ra = make_region({rects[i]});
      Region rb = make_region({rects[j]});
      if (!are_neighbors(ra, rb)) continue;
      if (rng.next_double() < p_merge) parent[std::max(find(i), find(j))] = std::min(find(i), find(j));
    }

  std::map<size_t, std::vector<Rect>> groups;
  for (size_t i = 0; i < m; ++i) groups[find(i)].push_back(rects[i]);

  GroundTruth truth;
  truth.kind = GroundTruth::Kind::partition;
  truth.grid = grid;
  truth.partition.grid = grid;
  for (auto& [root, rs] : groups) truth.partition.regions.push_back(make_region(std::move(rs)));

  double norm = 0.0;
  for (const auto& region : truth.partition.regions) {
    double f = rng.next_double();
    truth.densities.values.push_back(f);
    norm += f * region.area(grid);
  }
  if (norm <= 0.0) throw std::logic_error("degenerate density draw");
  for (auto& f : truth.densities.values) f /= norm;

  truth.region_raster = rasterize_partition(truth.partition);
  return truth;
}

Dataset2D sample_histogram(const GroundTruth& truth, int64_t n, uint64_t seed) {
  if (truth.kind != GroundTruth::Kind::partition && truth.kind != GroundTruth::Kind::quadrant)
    throw std::invalid_argument("sample_histogram needs a partition-kind truth");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  Rng rng(seed);
  const auto& g = truth.grid;

  std::vector<double> cum;
  double acc = 0.0;
  for (size_t j = 0; j < truth.partition.regions.size(); ++j) {
    acc += truth.densities.values[j] * truth.partition.regions[j].area(g);
    cum.push_back(acc);
  }

  Dataset2D data;
  data.grid = g;
  data.points.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    double u = rng.next_double() * acc;
    size_t j = static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (j >= cum.size()) j = cum.size() - 1;
    const auto& region = truth.partition.regions[j];
    auto t = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(region.area_units)));
    for (const auto& r : region.rects) {
      if (t >= r.area_units()) {
        t -= r.area_units();
        continue;
      }
      data.points.push_back({r.x0 + t % r.width(), r.y0 + t / r.width()});
      break;
    }
  }
  return data;
}

std::pair<Dataset2D, GroundTruth> gen_sine(int m, int64_t n, uint64_t seed, const GridSpec& grid) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  Rng rng(seed);
  int64_t above = (2 * n + 2) / 3;  // ceil(2n/3); the rest goes below
  int64_t below = n - above;

  GroundTruth truth;
  truth.kind = GroundTruth::Kind::sine;
  truth.grid = grid;
  truth.sine_m = m;
  // Renormalize the two levels on the evaluation grid so the midpoint
  // integral is exactly one (2:1 density ratio preserved).
  int64_t cells_above = 0;
  for (int64_t i = 0; i < grid.width; ++i) {
    double gx = sine_boundary(m, grid.origin_x + (static_cast<double>(i) + 0.5) * grid.epsilon);
    auto first_above = static_cast<int64_t>(
        std::floor((gx - grid.origin_y) / grid.epsilon - 0.5)) + 1;  // centers j+0.5 > gx
    first_above = std::clamp<int64_t>(first_above, 0, grid.height);
    cells_above += grid.height - first_above;
  }
  int64_t cells_below = grid.cells() - cells_above;
  double cell = grid.epsilon * grid.epsilon;
  double unit = 1.0 / ((2.0 * static_cast<double>(cells_above) + static_cast<double>(cells_below)) * cell);
  truth.level_above = 2.0 * unit;
  truth.level_below = unit;

  // Uniform over the lattice cells of S (matching the sampling convention
  // of sample_histogram), accepted by which side of the curve the snapped
  // coordinate falls on.
  Dataset2D data;
  data.grid = grid;
  data.points.reserve(static_cast<size_t>(n));
  auto draw = [&](bool want_above) {
    while (true) {
      auto ix = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(grid.width)));
      auto iy = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(grid.height)));
      bool is_above = grid.coord_y(iy) > sine_boundary(m, grid.coord_x(ix));
      if (is_above == want_above) {
        data.points.push_back({ix, iy});
        return;
      }
    }
  };
  for (int64_t i = 0; i < above; ++i) draw(true);
  for (int64_t i = 0; i < below; ++i) draw(false);
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset2D, GroundTruth> gen_gaussian(double correlation, int64_t n, uint64_t seed,
                                               const GridSpec& grid) {
  if (!(std::abs(correlation) < 1.0)) throw std::invalid_argument("|correlation| must be < 1");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  Rng rng(seed);
  double s = std::sqrt(1.0 - correlation * correlation);

  Dataset2D data;
  data.grid = grid;
  data.points.reserve(static_cast<size_t>(n));
  while (data.n() < n) {
    double z1, z2;
    rng.next_normal_pair(z1, z2);
    double x = z1;
    double y = correlation * z1 + s * z2;
    int64_t ix = snap_offset((x - grid.origin_x) / grid.epsilon);
    int64_t iy = snap_offset((y - grid.origin_y) / grid.epsilon);
    if (ix < 0 || ix > grid.width || iy < 0 || iy > grid.height) continue;
    data.points.push_back({ix, iy});
  }

  GroundTruth truth;
  truth.kind = GroundTruth::Kind::gaussian;
  truth.grid = grid;
  truth.correlation = correlation;
  auto tables = gaussian_tables(correlation, grid);
  truth.gauss_x_table = tables.x_table;
  truth.gauss_u_table = tables.u_table;
  truth.gauss_norm = tables.norm;
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset2D, GroundTruth> gen_quadrant(uint64_t seed, int64_t n, const GridSpec& grid) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  Rng rng(seed);
  auto draw_line = [&](int64_t units) {
    while (true) {
      auto pos = snap_offset(rng.next_double() * static_cast<double>(units));
      if (pos > 0 && pos < units) return pos;
    }
  };
  int64_t vx = draw_line(grid.width);
  int64_t hy = draw_line(grid.height);

  std::vector<Rect> quads{{0, 0, vx, hy},
                          {vx, 0, grid.width, hy},
                          {0, hy, vx, grid.height},
                          {vx, hy, grid.width, grid.height}};

  GroundTruth truth;
  truth.kind = GroundTruth::Kind::quadrant;
  truth.grid = grid;
  truth.partition.grid = grid;
  truth.cut_x = grid.coord_x(vx);
  truth.cut_y = grid.coord_y(hy);

  Dataset2D data;
  data.grid = grid;
  data.points.reserve(static_cast<size_t>(n));
  int64_t base = n / 4, rem = n % 4;
  for (size_t q = 0; q < 4; ++q) {
    const Rect& r = quads[q];
    int64_t count = base + (static_cast<int64_t>(q) < rem ? 1 : 0);
    for (int64_t i = 0; i < count; ++i) {
      auto t = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(r.area_units())));
      data.points.push_back({r.x0 + t % r.width(), r.y0 + t / r.width()});
    }
    Region region = make_region({r}, count);
    truth.partition.regions.push_back(region);
    double mass = n > 0 ? static_cast<double>(count) / static_cast<double>(n) : 0.25;
    truth.densities.values.push_back(mass / region.area(grid));
  }
  truth.region_raster = rasterize_partition(truth.partition);
  return {std::move(data), std::move(truth)};
}

}  // namespace palm
