#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "palm/geometry.hpp"
#include "palm/hist1d.hpp"
#include "palm/nml.hpp"

namespace palm {

/// Configuration for a PALM fit.
struct PalmConfig {
  int k_max = 300;  // maximum bins per partitioning step, >= 2
  Direction initial_direction = Direction::vertical;
  /// Sample space as {x0, y0, x1, y1}; nullopt means the smallest
  /// lattice-aligned rectangle covering the data (resolved before snapping).
  std::optional<std::array<double, 4>> sample_space;
};

/// Builds the grid for a fit: explicit sample space when configured,
/// otherwise the smallest lattice-aligned bounding box of the raw points.
GridSpec resolve_grid(const PalmConfig& config, double epsilon,
                      std::span<const std::pair<double, double>> raw);

/// One trace entry per partitioning pass / accepted merge.
struct TraceEntry {
  enum class Phase { partition, merge };
  Phase phase = Phase::partition;
  int64_t region_count = 0;
  double code_bits = 0.0;  // NML data code length of the current partition
};

/// Result of a full fit.
struct FitResult {
  Partition partition;
  DensityVector densities;
  CodeLength total_bits;
  std::vector<TraceEntry> trace;
};

/// Alternating per-region partitioning. Starting from {S}, each pass finds
/// per-region MDL-optimal cut lines in the current direction and splits;
/// the direction flips between passes. Halts after a pass with no splits in
/// one direction followed by a confirming no-split pass in the other.
/// Every region of the result is a single rectangle.
Partition partition_step(const Dataset2D& data, const PalmConfig& config);

/// Greedy merging of neighboring regions: repeatedly merges the pair that
/// minimizes -log2 P(x^n | merged) + log2 COMP(n, K-1), as long as that
/// score does not exceed the current partition's score (ties merge).
Partition merge_step(const Partition& partition, const Dataset2D& data);

/// partition_step followed by merge_step, with densities and trace.
FitResult palm_fit(const Dataset2D& data, const PalmConfig& config);

/// Thread budget for internal parallelism: the PALM_THREADS environment
/// variable caps it, 0 or unset meaning the hardware concurrency.
unsigned palm_thread_budget();

}  // namespace palm
