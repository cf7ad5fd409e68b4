#include "palm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "palm/nml.hpp"

namespace palm {

namespace {

struct Edge {
  int64_t lo, hi;
  int32_t region;
};

// Intersects the sorted left-side and right-side edge lists on one line and
// keeps the pieces where the regions differ.
void line_pieces(std::vector<Edge>& left, std::vector<Edge>& right,
                 std::vector<std::pair<int64_t, int64_t>>& out) {
  auto by_lo = [](const Edge& a, const Edge& b) { return a.lo < b.lo; };
  std::sort(left.begin(), left.end(), by_lo);
  std::sort(right.begin(), right.end(), by_lo);
  size_t i = 0, j = 0;
  while (i < left.size() && j < right.size()) {
    int64_t lo = std::max(left[i].lo, right[j].lo);
    int64_t hi = std::min(left[i].hi, right[j].hi);
    if (hi > lo && left[i].region != right[j].region) out.emplace_back(lo, hi);
    if (left[i].hi <= right[j].hi)
      ++i;
    else
      ++j;
  }
}

void merge_pieces(std::vector<std::pair<int64_t, int64_t>>& pieces, bool vertical, int64_t pos,
                  std::vector<BoundarySegment>& out) {
  std::sort(pieces.begin(), pieces.end());
  size_t i = 0;
  while (i < pieces.size()) {
    int64_t lo = pieces[i].first, hi = pieces[i].second;
    size_t j = i + 1;
    while (j < pieces.size() && pieces[j].first <= hi) {
      hi = std::max(hi, pieces[j].second);
      ++j;
    }
    out.push_back({vertical, pos, lo, hi});
    i = j;
  }
}

}  // namespace

std::vector<BoundarySegment> inner_segments(const Partition& partition) {
  const auto& g = partition.grid;
  // line position -> (left-of-line edges, right-of-line edges)
  std::map<int64_t, std::pair<std::vector<Edge>, std::vector<Edge>>> vertical, horizontal;
  for (size_t r = 0; r < partition.regions.size(); ++r) {
    auto id = static_cast<int32_t>(r);
    for (const auto& rect : partition.regions[r].rects) {
      if (rect.x0 > 0) vertical[rect.x0].second.push_back({rect.y0, rect.y1, id});
      if (rect.x1 < g.width) vertical[rect.x1].first.push_back({rect.y0, rect.y1, id});
      if (rect.y0 > 0) horizontal[rect.y0].second.push_back({rect.x0, rect.x1, id});
      if (rect.y1 < g.height) horizontal[rect.y1].first.push_back({rect.x0, rect.x1, id});
    }
  }
  std::vector<BoundarySegment> segments;
  std::vector<std::pair<int64_t, int64_t>> pieces;
  for (auto& [pos, sides] : vertical) {
    pieces.clear();
    line_pieces(sides.first, sides.second, pieces);
    merge_pieces(pieces, true, pos, segments);
  }
  for (auto& [pos, sides] : horizontal) {
    pieces.clear();
    line_pieces(sides.first, sides.second, pieces);
    merge_pieces(pieces, false, pos, segments);
  }
  return segments;
}

PixelSet boundary_pixels(const Partition& partition, double pixel_size) {
  const auto& g = partition.grid;
  double ratio = pixel_size / g.epsilon;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 || ratio < 1.0 - 1e-6)
    throw std::invalid_argument("pixel_size must be a positive multiple of epsilon");

  PixelSet set;
  set.pixel_size = pixel_size;
  for (const auto& seg : inner_segments(partition)) {
    double length = static_cast<double>(seg.hi - seg.lo) * g.epsilon;
    auto npix = std::max<int64_t>(1, std::llround(length / pixel_size));
    double step = length / static_cast<double>(npix);
    double along0 = (seg.vertical ? g.origin_y : g.origin_x) +
                    static_cast<double>(seg.lo) * g.epsilon;
    double fixed = (seg.vertical ? g.origin_x : g.origin_y) +
                   static_cast<double>(seg.pos) * g.epsilon;
    for (int64_t t = 0; t < npix; ++t) {
      double along = along0 + (static_cast<double>(t) + 0.5) * step;
      if (seg.vertical)
        set.pixels.push_back({fixed, along});
      else
        set.pixels.push_back({along, fixed});
    }
  }
  std::sort(set.pixels.begin(), set.pixels.end());
  set.pixels.erase(std::unique(set.pixels.begin(), set.pixels.end()), set.pixels.end());
  return set;
}

PixelSet sine_curve_pixels(int m, const GridSpec& grid, double spacing) {
  PixelSet set;
  set.pixel_size = spacing;
  double x0 = grid.origin_x;
  double x1 = grid.origin_x + grid.extent_x();
  double step = grid.epsilon / 4.0;
  double acc = spacing / 2.0;  // emit the first pixel half a spacing in
  double px = x0, py = sine_boundary(m, x0);
  for (double x = x0 + step; x <= x1 + step / 2; x += step) {
    double y = sine_boundary(m, x);
    acc += std::hypot(x - px, y - py);
    if (acc >= spacing) {
      set.pixels.push_back({x, y});
      acc -= spacing;
    }
    px = x;
    py = y;
  }
  std::sort(set.pixels.begin(), set.pixels.end());
  return set;
}

namespace {

// Uniform-bucket nearest-neighbor index over pixel centers. Ring expansion
// stops once the best squared distance cannot be beaten by any bucket
// farther out, so results are exact.
class PixelIndex {
 public:
  explicit PixelIndex(const PixelSet& set) : pts_(set.pixels), cell_(set.pixel_size) {
    if (pts_.empty()) return;
    min_x_ = pts_[0][0];
    min_y_ = pts_[0][1];
    for (const auto& p : pts_) {
      min_x_ = std::min(min_x_, p[0]);
      min_y_ = std::min(min_y_, p[1]);
    }
    for (uint32_t i = 0; i < pts_.size(); ++i) {
      int64_t ix = bx(pts_[i][0]), iy = by(pts_[i][1]);
      max_bx_ = std::max(max_bx_, ix);
      max_by_ = std::max(max_by_, iy);
      buckets_[key(ix, iy)].push_back(i);
    }
  }

  double nearest_sq(double x, double y) const {
    if (pts_.empty()) return std::numeric_limits<double>::infinity();
    int64_t cx = bx(x), cy = by(y);
    // Every point lives in a bucket within [0, max_b]; once the rings have
    // swept that range everything has been scanned.
    int64_t cap = std::max({cx, max_bx_ - cx, cy, max_by_ - cy, int64_t{0}}) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (int64_t r = 0; r <= cap; ++r) {
      for (int64_t ix = cx - r; ix <= cx + r; ++ix)
        for (int64_t iy = cy - r; iy <= cy + r; ++iy) {
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != r) continue;
          auto it = buckets_.find(key(ix, iy));
          if (it == buckets_.end()) continue;
          for (uint32_t id : it->second) {
            double dx = pts_[id][0] - x, dy = pts_[id][1] - y;
            best = std::min(best, dx * dx + dy * dy);
          }
        }
      double reach = static_cast<double>(r) * cell_;
      if (best <= reach * reach) break;
    }
    return best;
  }

 private:
  int64_t bx(double x) const { return static_cast<int64_t>(std::floor((x - min_x_) / cell_)); }
  int64_t by(double y) const { return static_cast<int64_t>(std::floor((y - min_y_) / cell_)); }
  static uint64_t key(int64_t a, int64_t b) {
    return (static_cast<uint64_t>(a) << 32) ^ static_cast<uint64_t>(b & 0xffffffff);
  }

  const std::vector<std::array<double, 2>>& pts_;
  double cell_;
  double min_x_ = 0.0, min_y_ = 0.0;
  int64_t max_bx_ = 0, max_by_ = 0;
  std::unordered_map<uint64_t, std::vector<uint32_t>> buckets_;
};

double directed_loss(const PixelSet& from, const PixelIndex& to_index, bool to_empty) {
  if (from.pixels.empty()) return 0.0;
  if (to_empty) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& p : from.pixels) sum += to_index.nearest_sq(p[0], p[1]);
  return sum;
}

}  // namespace

double nearest_sq(const PixelSet& set, double x, double y) {
  PixelIndex index(set);
  return index.nearest_sq(x, y);
}

BoundaryLosses boundary_losses(const PixelSet& learned, const PixelSet& truth) {
  PixelIndex learned_index(learned);
  PixelIndex truth_index(truth);
  BoundaryLosses losses;
  losses.l_learn = directed_loss(learned, truth_index, truth.pixels.empty());
  losses.l_true = directed_loss(truth, learned_index, learned.pixels.empty());
  return losses;
}

double mise_single(const GroundTruth& truth, const Partition& est, const DensityVector& densities) {
  const auto& g = est.grid;
  double sum = 0.0;
  for (size_t j = 0; j < est.regions.size(); ++j) {
    double fj = densities.values[j];
    for (const auto& rect : est.regions[j].rects) {
      for (int64_t cy = rect.y0; cy < rect.y1; ++cy) {
        double y = g.origin_y + (static_cast<double>(cy) + 0.5) * g.epsilon;
        double row = 0.0;
        for (int64_t cx = rect.x0; cx < rect.x1; ++cx) {
          double x = g.origin_x + (static_cast<double>(cx) + 0.5) * g.epsilon;
          double d = truth.density(x, y) - fj;
          row += d * d;
        }
        sum += row;
      }
    }
  }
  return sum * g.epsilon * g.epsilon;
}

std::pair<Partition, DensityVector> fixed_grid(const Dataset2D& data, int64_t target) {
  if (target < 1) throw std::invalid_argument("target must be >= 1");
  const auto& g = data.grid;
  int64_t best_a = 1, best_b = 1;
  auto best_key = std::tuple<int64_t, int64_t, int64_t>{
      std::numeric_limits<int64_t>::max(), std::numeric_limits<int64_t>::max(), 0};
  for (int64_t a = 1; a <= target; ++a) {
    int64_t b = (target + a - 1) / a;
    auto key = std::tuple<int64_t, int64_t, int64_t>{std::max(a, b), a * b, -a};
    if (key < best_key) {
      best_key = key;
      best_a = a;
      best_b = b;
    }
  }
  int64_t a = std::min(best_a, g.width);
  int64_t b = std::min(best_b, g.height);

  auto edges = [](int64_t units, int64_t parts) {
    std::vector<int64_t> e(static_cast<size_t>(parts) + 1);
    for (int64_t i = 0; i <= parts; ++i)
      e[static_cast<size_t>(i)] =
          std::llround(static_cast<double>(i) * static_cast<double>(units) / static_cast<double>(parts));
    return e;
  };
  auto xe = edges(g.width, a);
  auto ye = edges(g.height, b);

  std::vector<int64_t> counts(static_cast<size_t>(a * b), 0);
  for (size_t i = 0; i < data.points.size(); ++i) {
    int64_t cx = data.cell_x(i), cy = data.cell_y(i);
    auto col = static_cast<int64_t>(std::upper_bound(xe.begin() + 1, xe.end() - 1, cx) -
                                    (xe.begin() + 1));
    auto row = static_cast<int64_t>(std::upper_bound(ye.begin() + 1, ye.end() - 1, cy) -
                                    (ye.begin() + 1));
    ++counts[static_cast<size_t>(row * a + col)];
  }

  Partition p;
  p.grid = g;
  for (int64_t row = 0; row < b; ++row)
    for (int64_t col = 0; col < a; ++col) {
      Rect r{xe[static_cast<size_t>(col)], ye[static_cast<size_t>(row)],
             xe[static_cast<size_t>(col + 1)], ye[static_cast<size_t>(row + 1)]};
      p.regions.push_back(make_region({r}, counts[static_cast<size_t>(row * a + col)]));
    }
  if (data.n() >= 1) return {p, ml_densities(p, data)};
  return {p, DensityVector{std::vector<double>(p.regions.size(), 0.0)}};
}

}  // namespace palm
