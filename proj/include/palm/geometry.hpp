#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace palm {

/// Cutting / projection direction. Vertical means vertical cut lines,
/// i.e. the x-extent is being partitioned and projections return x values.
enum class Direction { vertical, horizontal };

inline Direction flip(Direction d) {
  return d == Direction::vertical ? Direction::horizontal : Direction::vertical;
}

/// Rounds a lattice offset q = (coord - origin) / epsilon to the nearest
/// integer, ties toward +inf. A small slack absorbs the representation error
/// of decimal epsilons so that e.g. 0.0005 / 0.001 still counts as a tie.
int64_t snap_offset(double q);

/// The sample space S: a lattice of spacing `epsilon` anchored at `origin`,
/// spanning `width` x `height` lattice units. All rectangle corners and data
/// coordinates live on this lattice; geometry is done in integer units.
struct GridSpec {
  double epsilon = 1.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  int64_t width = 1;   // lattice units, > 0
  int64_t height = 1;  // lattice units, > 0

  static GridSpec from_extent(double epsilon, double origin_x, double origin_y,
                              double extent_x, double extent_y);

  double extent_x() const { return static_cast<double>(width) * epsilon; }
  double extent_y() const { return static_cast<double>(height) * epsilon; }
  double coord_x(int64_t ix) const { return origin_x + static_cast<double>(ix) * epsilon; }
  double coord_y(int64_t iy) const { return origin_y + static_cast<double>(iy) * epsilon; }
  int64_t cells() const { return width * height; }

  bool operator==(const GridSpec&) const = default;
};

/// A data point as snapped lattice offsets from the grid origin.
/// Offsets may equal width/height: points on the top/right boundary of S
/// belong to the last cell (the boundary rows are closed there).
struct GridPoint {
  int64_t x = 0;
  int64_t y = 0;
  bool operator==(const GridPoint&) const = default;
};

/// Snapped two-dimensional dataset together with its sample space.
struct Dataset2D {
  GridSpec grid;
  std::vector<GridPoint> points;

  int64_t n() const { return static_cast<int64_t>(points.size()); }
  std::pair<double, double> coord(size_t i) const {
    return {grid.coord_x(points[i].x), grid.coord_y(points[i].y)};
  }
  /// Cell index of a point along x/y: offsets clamped so that boundary
  /// points fall into the last cell. Cells are half-open elsewhere.
  int64_t cell_x(size_t i) const { return std::min(points[i].x, grid.width - 1); }
  int64_t cell_y(size_t i) const { return std::min(points[i].y, grid.height - 1); }
};

/// Raised when input points land outside S; carries the offending indices.
class SnapError : public std::runtime_error {
 public:
  SnapError(std::string msg, std::vector<size_t> indices)
      : std::runtime_error(std::move(msg)), indices_(std::move(indices)) {}
  const std::vector<size_t>& indices() const { return indices_; }

 private:
  std::vector<size_t> indices_;
};

/// Snaps raw coordinates to the grid lattice (nearest, ties toward +inf).
/// Throws SnapError listing every point that falls outside S after snapping.
Dataset2D snap_to_grid(std::span<const std::pair<double, double>> raw, const GridSpec& grid);

/// Axis-aligned rectangle in lattice units, x0 < x1 and y0 < y1.
/// Contains cells [x0, x1) x [y0, y1).
struct Rect {
  int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int64_t width() const { return x1 - x0; }
  int64_t height() const { return y1 - y0; }
  int64_t area_units() const { return width() * height(); }
  bool contains_cell(int64_t cx, int64_t cy) const {
    return cx >= x0 && cx < x1 && cy >= y0 && cy < y1;
  }
  bool operator==(const Rect&) const = default;
};

/// A partition element: a union of interior-disjoint rectangles with its
/// cached cell area and point count (h_j).
struct Region {
  std::vector<Rect> rects;
  int64_t area_units = 0;
  int64_t count = 0;

  /// Area |S_j| in coordinate units.
  double area(const GridSpec& g) const {
    return static_cast<double>(area_units) * g.epsilon * g.epsilon;
  }
};

Region make_region(std::vector<Rect> rects, int64_t count = 0);

/// Disjoint regions covering S.
struct Partition {
  GridSpec grid;
  std::vector<Region> regions;

  int64_t k() const { return static_cast<int64_t>(regions.size()); }
};

/// Per-region density values f_j; for a fitted model sum f_j |S_j| = 1.
struct DensityVector {
  std::vector<double> values;
};

/// Number of data points inside the region, half-open convention with the
/// top/right boundary of S closed.
int64_t count_points(const Region& region, const Dataset2D& data);

/// Recomputes every cached region count from the data.
void recount(Partition& partition, const Dataset2D& data);

/// True iff the two regions share a boundary segment of positive length.
/// Corner-only contact does not count.
bool are_neighbors(const Region& a, const Region& b);

/// Coordinates (x for vertical, y for horizontal) of every point inside
/// the rectangle, input order preserved.
std::vector<double> project(const Dataset2D& data, const Rect& rect, Direction axis);

/// Checks partition invariants: lattice-aligned disjoint rects covering S
/// exactly, cached areas consistent. Throws std::logic_error on violation.
void validate_partition(const Partition& p);

/// Additionally checks cached counts against a recount.
void validate_partition(const Partition& p, const Dataset2D& data);

}  // namespace palm
