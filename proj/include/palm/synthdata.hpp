#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

#include "palm/geometry.hpp"
#include "palm/rng.hpp"

namespace palm {

/// A data-generating density on S, exposing whatever the evaluation needs:
/// a density handle (renormalized on the epsilon grid so that the midpoint
/// integral is exactly 1), and the true partition when one exists.
struct GroundTruth {
  enum class Kind { partition, sine, gaussian, quadrant };

  Kind kind = Kind::partition;
  GridSpec grid;

  // partition / quadrant
  Partition partition;
  DensityVector densities;

  // sine
  int sine_m = 0;
  double level_above = 0.0;
  double level_below = 0.0;

  // gaussian
  double correlation = 0.0;

  // quadrant cut lines, coordinate units
  double cut_x = 0.0;
  double cut_y = 0.0;

  /// True density at a point (typically queried at cell centers).
  double density(double x, double y) const;

  /// Midpoint-rule integral of the density over S on the epsilon grid.
  double grid_integral() const;

  std::shared_ptr<const std::vector<int32_t>> region_raster;  // partition kinds
  std::shared_ptr<const std::vector<double>> gauss_x_table;   // exp(-x^2/2) at quarter steps
  std::shared_ptr<const std::vector<double>> gauss_u_table;   // exp(-u^2/(2(1-rho^2)))
  double gauss_norm = 1.0;
};

/// S = [0,1]^2 at the paper-scale precision 0.001.
GridSpec unit_grid();

/// S = [-5,5]^2 at precision 0.001.
GridSpec gaussian_grid();

/// Sine boundary used by the sine family: g(x) = sin(2 m pi x) / 4 + 1/2.
double sine_boundary(int m, double x);

/// Region id per lattice cell, row-major; -1 would mean uncovered.
std::shared_ptr<const std::vector<int32_t>> rasterize_partition(const Partition& p);

/// Random partition of S: k1 random vertical columns, k2_each random rows
/// per column, then every adjacent region pair merged independently with
/// probability p_merge. Densities drawn Uniform(0,1) and normalized.
GroundTruth gen_true_partition(uint64_t seed, int k1, int k2_each, double p_merge,
                               const GridSpec& grid = unit_grid());

/// n i.i.d. draws from a partition-kind truth: region by its probability
/// mass, position uniform over the region's lattice cells.
Dataset2D sample_histogram(const GroundTruth& truth, int64_t n, uint64_t seed);

/// Uniform data above/below the sine curve with 2:1 densities:
/// ceil(2n/3) points above, floor(n/3) below, by rejection sampling.
std::pair<Dataset2D, GroundTruth> gen_sine(int m, int64_t n, uint64_t seed,
                                           const GridSpec& grid = unit_grid());

/// Bivariate standard normal with the given correlation (Cholesky of the
/// covariance), truncated to S = [-5,5]^2 by rejection.
std::pair<Dataset2D, GroundTruth> gen_gaussian(double correlation, int64_t n, uint64_t seed,
                                               const GridSpec& grid = gaussian_grid());

/// One vertical and one horizontal cut at Uniform(0,1) positions
/// (lattice-snapped, boundary positions redrawn), equal point counts per
/// quadrant with any remainder distributed round-robin.
std::pair<Dataset2D, GroundTruth> gen_quadrant(uint64_t seed, int64_t n,
                                               const GridSpec& grid = unit_grid());

}  // namespace palm
