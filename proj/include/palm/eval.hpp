#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "palm/geometry.hpp"
#include "palm/synthdata.hpp"

namespace palm {

/// A maximal straight piece of a partition's inner boundary, lattice units.
/// Vertical: x = pos, y in [lo, hi]; horizontal: y = pos, x in [lo, hi].
struct BoundarySegment {
  bool vertical = true;
  int64_t pos = 0;
  int64_t lo = 0;
  int64_t hi = 0;
};

/// Inner-boundary segments of a partition: pieces where two different
/// regions meet. Seams between rects of the same region dissolve; the outer
/// boundary of S is excluded. Collinear touching pieces are merged.
std::vector<BoundarySegment> inner_segments(const Partition& partition);

/// Pixel centers discretizing inner boundaries at `pixel_size` spacing.
struct PixelSet {
  double pixel_size = 0.01;
  std::vector<std::array<double, 2>> pixels;  // sorted, unique
};

/// Discretizes every inner-boundary segment into pixel centers.
/// pixel_size must be a multiple of the grid epsilon.
PixelSet boundary_pixels(const Partition& partition, double pixel_size);

/// Pixels along the sine boundary curve, spaced by arc length.
PixelSet sine_curve_pixels(int m, const GridSpec& grid, double spacing);

/// Directed sums of squared nearest-neighbor distances between pixel sets.
/// An empty source side contributes 0; a nonempty source against an empty
/// target yields +inf (flagged by the caller via PixelSet sizes).
struct BoundaryLosses {
  double l_learn = 0.0;  // sum over learned pixels of squared distance to truth
  double l_true = 0.0;   // sum over truth pixels of squared distance to learned
};
BoundaryLosses boundary_losses(const PixelSet& learned, const PixelSet& truth);

/// Squared nearest distance from one point to a pixel set (+inf if empty).
double nearest_sq(const PixelSet& set, double x, double y);

/// Integral of (f - f_hat)^2 over S, midpoint rule on the epsilon grid.
/// The expectation over repetitions is the caller's mean of these values.
double mise_single(const GroundTruth& truth, const Partition& est, const DensityVector& densities);

/// Equally-spaced a x b baseline grid with a*b >= target: smallest maximum
/// side first, then smallest cell count, ties toward more columns. Edges are
/// rounded to the lattice; densities are the ML estimates.
std::pair<Partition, DensityVector> fixed_grid(const Dataset2D& data, int64_t target);

/// One evaluation run of a learned partition against a ground truth.
struct EvalReport {
  double mise = 0.0;
  double l_learn = 0.0;
  double l_true = 0.0;
  double l_learn_mean = 0.0;  // per-pixel means, reported as an extension
  double l_true_mean = 0.0;
  int64_t region_count_learned = 0;
  int64_t region_count_true = 0;
  double runtime_seconds = 0.0;
  bool learned_boundary_empty = false;
  bool truth_boundary_empty = false;
  bool has_boundary_losses = true;  // false for truths without boundaries
};

}  // namespace palm
