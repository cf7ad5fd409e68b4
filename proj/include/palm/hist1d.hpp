#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "palm/nml.hpp"

namespace palm::hist1d {

/// Lattice-aligned 1-D sample space [lo, hi] with spacing epsilon.
/// There are `units` cells and units - 1 interior candidate cut positions.
struct Extent1D {
  double lo = 0.0;
  double hi = 1.0;
  double epsilon = 1.0;
  int64_t units = 1;

  static Extent1D from_bounds(double lo, double hi, double epsilon);

  int64_t interior_positions() const { return units - 1; }  // E
  double coord(int64_t pos) const { return lo + static_cast<double>(pos) * epsilon; }
};

/// Sorted interior cut positions defining a histogram's bins.
struct CutSet {
  Extent1D extent;
  std::vector<double> cuts;
};

/// Per-bin-count search result. Infeasible K (more cuts than retained
/// candidates) keeps loglik at -inf and total at +inf.
struct PerK {
  bool feasible = false;
  double loglik_bits = -std::numeric_limits<double>::infinity();
  double total_bits = std::numeric_limits<double>::infinity();
  std::vector<int64_t> cut_units;
};

/// Outcome of the per-K dynamic program and the model selection over K.
struct DpResult {
  Extent1D extent;
  std::vector<PerK> per_k;  // index K, [0] unused
  int chosen_k = 1;
  double total_bits = 0.0;

  const PerK& chosen() const { return per_k[static_cast<size_t>(chosen_k)]; }
  CutSet cuts_of(int k) const;
  CutSet chosen_cuts() const { return cuts_of(chosen_k); }
};

/// Point multiplicities at lattice positions 0..units (position `units`
/// is the closed top boundary; those points count into the last cell).
struct PositionHistogram {
  int64_t units = 1;
  std::vector<int64_t> occ;  // size units + 1

  int64_t n() const;
  static PositionHistogram from_values(std::span<const double> z, const Extent1D& extent);
};

/// Candidate positions retained by the data-free-gap rule: an interior
/// position c survives iff some data point lies within one lattice step of
/// it (positions c-1, c, or c+1). Any candidate inside a wider data-free
/// gap can never be part of an optimal cut set.
std::vector<int64_t> candidate_cut_units(const PositionHistogram& hist);

/// Coordinate-space wrapper over candidate_cut_units.
std::vector<double> candidate_cuts(std::span<const double> z, const Extent1D& extent);

/// Maximum-likelihood cut sets for each K = 1..k_max over the retained
/// candidates. Likelihood only; model terms are not filled in.
DpResult dp_best_cuts(std::span<const double> z, const Extent1D& extent, int k_max);

/// Full model selection: total bits per K are
///   -loglik + log2 COMP(n, K) + log2 C(E, K-1),
/// where E counts ALL interior lattice positions (the pruning is a search
/// shortcut, not a coding change). Ties choose the smaller K.
DpResult select_mdl_histogram(std::span<const double> z, const Extent1D& extent, int k_max);

/// Integer-domain entry point (used by the 2-D partitioner).
DpResult select_from_histogram(const PositionHistogram& hist, const Extent1D& extent, int k_max);

namespace detail {

/// Bin score arithmetic shared by the DP and the test oracles: identical
/// operations in identical order make exact-equality comparisons valid.
struct BinScorer {
  int64_t n = 0;
  std::vector<double> lg;  // lg[i] = log2(i), i = 0..max(n, units)

  BinScorer(int64_t n, int64_t units);

  /// h * (log2 h - log2 n - log2 width), 0 for empty bins.
  double term(int64_t h, int64_t width_units) const {
    if (h == 0) return 0.0;
    return static_cast<double>(h) *
           (lg[static_cast<size_t>(h)] - lg[static_cast<size_t>(n)] - lg[static_cast<size_t>(width_units)]);
  }
};

/// Model-selection assembly shared with the oracles.
double total_bits(double loglik_bits, int k, const CompTable& comp,
                  const std::vector<double>& lf, int64_t interior_positions);

/// Clamped-cell prefix counts: prefix[p] = number of points in cells < p.
std::vector<int64_t> cell_prefix(const PositionHistogram& hist);

}  // namespace detail

}  // namespace palm::hist1d
