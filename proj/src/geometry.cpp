#include "palm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace palm {

int64_t snap_offset(double q) {
  double f = std::floor(q);
  double frac = q - f;
  auto k = static_cast<int64_t>(f);
  if (frac >= 0.5 - 1e-9) ++k;
  return k;
}

GridSpec GridSpec::from_extent(double epsilon, double origin_x, double origin_y,
                               double extent_x, double extent_y) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(extent_x > 0.0) || !(extent_y > 0.0))
    throw std::invalid_argument("extent must be positive");
  GridSpec g;
  g.epsilon = epsilon;
  g.origin_x = origin_x;
  g.origin_y = origin_y;
  g.width = snap_offset(extent_x / epsilon);
  g.height = snap_offset(extent_y / epsilon);
  if (g.width < 1 || g.height < 1)
    throw std::invalid_argument("extent smaller than one lattice cell");
  return g;
}

Dataset2D snap_to_grid(std::span<const std::pair<double, double>> raw, const GridSpec& grid) {
  if (!(grid.epsilon > 0.0) || grid.width < 1 || grid.height < 1)
    throw std::invalid_argument("invalid grid");
  Dataset2D out;
  out.grid = grid;
  out.points.reserve(raw.size());
  std::vector<size_t> rejected;
  for (size_t i = 0; i < raw.size(); ++i) {
    const auto& [x, y] = raw[i];
    if (!std::isfinite(x) || !std::isfinite(y)) {
      rejected.push_back(i);
      continue;
    }
    int64_t ix = snap_offset((x - grid.origin_x) / grid.epsilon);
    int64_t iy = snap_offset((y - grid.origin_y) / grid.epsilon);
    if (ix < 0 || ix > grid.width || iy < 0 || iy > grid.height) {
      rejected.push_back(i);
      continue;
    }
    out.points.push_back({ix, iy});
  }
  if (!rejected.empty()) {
    std::ostringstream msg;
    msg << rejected.size() << " point(s) outside sample space after snapping; indices:";
    for (size_t j = 0; j < rejected.size() && j < 16; ++j) msg << ' ' << rejected[j];
    if (rejected.size() > 16) msg << " ...";
    throw SnapError(msg.str(), std::move(rejected));
  }
  return out;
}

Region make_region(std::vector<Rect> rects, int64_t count) {
  Region r;
  r.rects = std::move(rects);
  if (r.rects.empty()) throw std::invalid_argument("region needs at least one rect");
  r.area_units = 0;
  for (const auto& rect : r.rects) {
    if (rect.x0 >= rect.x1 || rect.y0 >= rect.y1)
      throw std::invalid_argument("degenerate rect");
    r.area_units += rect.area_units();
  }
  r.count = count;
  return r;
}

int64_t count_points(const Region& region, const Dataset2D& data) {
  int64_t total = 0;
  for (size_t i = 0; i < data.points.size(); ++i) {
    int64_t cx = data.cell_x(i);
    int64_t cy = data.cell_y(i);
    for (const auto& rect : region.rects) {
      if (rect.contains_cell(cx, cy)) {
        ++total;
        break;
      }
    }
  }
  return total;
}

void recount(Partition& partition, const Dataset2D& data) {
  for (auto& region : partition.regions) region.count = count_points(region, data);
}

namespace {

bool rects_share_edge(const Rect& a, const Rect& b) {
  if (a.x1 == b.x0 || b.x1 == a.x0) {
    int64_t lo = std::max(a.y0, b.y0), hi = std::min(a.y1, b.y1);
    if (hi - lo > 0) return true;
  }
  if (a.y1 == b.y0 || b.y1 == a.y0) {
    int64_t lo = std::max(a.x0, b.x0), hi = std::min(a.x1, b.x1);
    if (hi - lo > 0) return true;
  }
  return false;
}

}  // namespace

bool are_neighbors(const Region& a, const Region& b) {
  if (&a == &b) return false;
  for (const auto& ra : a.rects)
    for (const auto& rb : b.rects)
      if (rects_share_edge(ra, rb)) return true;
  return false;
}

std::vector<double> project(const Dataset2D& data, const Rect& rect, Direction axis) {
  std::vector<double> out;
  for (size_t i = 0; i < data.points.size(); ++i) {
    if (!rect.contains_cell(data.cell_x(i), data.cell_y(i))) continue;
    out.push_back(axis == Direction::vertical ? data.grid.coord_x(data.points[i].x)
                                              : data.grid.coord_y(data.points[i].y));
  }
  return out;
}

void validate_partition(const Partition& p) {
  const auto& g = p.grid;
  int64_t area = 0;
  std::vector<const Rect*> all;
  for (const auto& region : p.regions) {
    if (region.rects.empty()) throw std::logic_error("empty region");
    int64_t ra = 0;
    for (const auto& r : region.rects) {
      if (r.x0 >= r.x1 || r.y0 >= r.y1) throw std::logic_error("degenerate rect");
      if (r.x0 < 0 || r.y0 < 0 || r.x1 > g.width || r.y1 > g.height)
        throw std::logic_error("rect outside sample space");
      ra += r.area_units();
      all.push_back(&r);
    }
    if (ra != region.area_units) throw std::logic_error("cached area mismatch");
    area += ra;
  }
  if (area != g.cells()) throw std::logic_error("partition does not cover S");
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      const Rect& a = *all[i];
      const Rect& b = *all[j];
      if (std::max(a.x0, b.x0) < std::min(a.x1, b.x1) &&
          std::max(a.y0, b.y0) < std::min(a.y1, b.y1))
        throw std::logic_error("overlapping rects");
    }
}

void validate_partition(const Partition& p, const Dataset2D& data) {
  validate_partition(p);
  int64_t total = 0;
  for (const auto& region : p.regions) {
    int64_t c = count_points(region, data);
    if (c != region.count) throw std::logic_error("cached count mismatch");
    total += c;
  }
  if (total != data.n()) throw std::logic_error("counts do not sum to n");
}

}  // namespace palm
