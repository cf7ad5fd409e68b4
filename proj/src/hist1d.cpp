#include "palm/hist1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace palm::hist1d {

Extent1D Extent1D::from_bounds(double lo, double hi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(hi > lo)) throw std::invalid_argument("extent requires lo < hi");
  Extent1D e;
  e.lo = lo;
  e.hi = hi;
  e.epsilon = epsilon;
  e.units = snap_offset((hi - lo) / epsilon);
  if (e.units < 1) e.units = 1;  // final partial cell attaches to the last bin
  return e;
}

CutSet DpResult::cuts_of(int k) const {
  CutSet c;
  c.extent = extent;
  for (int64_t u : per_k[static_cast<size_t>(k)].cut_units) c.cuts.push_back(extent.coord(u));
  return c;
}

int64_t PositionHistogram::n() const {
  int64_t total = 0;
  for (int64_t v : occ) total += v;
  return total;
}

PositionHistogram PositionHistogram::from_values(std::span<const double> z, const Extent1D& extent) {
  PositionHistogram h;
  h.units = extent.units;
  h.occ.assign(static_cast<size_t>(extent.units) + 1, 0);
  for (double v : z) {
    int64_t pos = snap_offset((v - extent.lo) / extent.epsilon);
    if (pos < 0 || pos > extent.units) throw std::invalid_argument("value outside extent");
    ++h.occ[static_cast<size_t>(pos)];
  }
  return h;
}

std::vector<int64_t> candidate_cut_units(const PositionHistogram& hist) {
  std::vector<int64_t> cands;
  for (int64_t c = 1; c < hist.units; ++c) {
    if (hist.occ[static_cast<size_t>(c - 1)] > 0 || hist.occ[static_cast<size_t>(c)] > 0 ||
        hist.occ[static_cast<size_t>(c + 1)] > 0)
      cands.push_back(c);
  }
  return cands;
}

std::vector<double> candidate_cuts(std::span<const double> z, const Extent1D& extent) {
  auto hist = PositionHistogram::from_values(z, extent);
  std::vector<double> out;
  for (int64_t c : candidate_cut_units(hist)) out.push_back(extent.coord(c));
  return out;
}

namespace detail {

BinScorer::BinScorer(int64_t n_, int64_t units) : n(n_) {
  int64_t top = std::max<int64_t>(std::max(n_, units), 1);
  lg.resize(static_cast<size_t>(top) + 1);
  lg[0] = 0.0;  // never used with h or width 0
  for (int64_t i = 1; i <= top; ++i) lg[static_cast<size_t>(i)] = std::log2(static_cast<double>(i));
}

double total_bits(double loglik_bits, int k, const CompTable& comp,
                  const std::vector<double>& lf, int64_t interior_positions) {
  return -loglik_bits + comp.at(k) + palm::log2_choose(lf, interior_positions, k - 1);
}

std::vector<int64_t> cell_prefix(const PositionHistogram& hist) {
  auto units = static_cast<size_t>(hist.units);
  std::vector<int64_t> prefix(units + 1, 0);
  for (size_t c = 0; c < units; ++c) {
    int64_t in_cell = hist.occ[c];
    if (c == units - 1) in_cell += hist.occ[units];  // closed top boundary
    prefix[c + 1] = prefix[c] + in_cell;
  }
  return prefix;
}

}  // namespace detail

namespace {

// Likelihood DP over the retained candidates. Positions array is the
// candidate list plus the terminal position `units`; layer k entry i holds
// the best log-likelihood of covering [0, pos[i]) with k bins whose inner
// cuts are candidates. Left-to-right accumulation keeps every path sum
// bitwise identical to a direct rescoring of the same cut set.
void run_dp(DpResult& res, const PositionHistogram& hist, int k_max) {
  auto prefix = detail::cell_prefix(hist);
  int64_t n = prefix.back();
  detail::BinScorer scorer(n, hist.units);
  auto cands = candidate_cut_units(hist);
  size_t m = cands.size();

  std::vector<int64_t> pos(cands);
  pos.push_back(hist.units);
  size_t last = m;  // index of the terminal position

  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1), cur(m + 1);
  std::vector<std::vector<int32_t>> parent(static_cast<size_t>(k_max) + 1);
  std::vector<int64_t> cnt(m + 1);
  for (size_t i = 0; i <= last; ++i) cnt[i] = prefix[static_cast<size_t>(pos[i])];

  res.per_k.assign(static_cast<size_t>(k_max) + 1, PerK{});

  for (size_t i = 0; i <= last; ++i) prev[i] = scorer.term(cnt[i], pos[i]);
  res.per_k[1].feasible = true;
  res.per_k[1].loglik_bits = prev[last];

  const double* lg = scorer.lg.data();
  const double lg_n = n > 0 ? lg[n] : 0.0;

  for (int k = 2; k <= k_max; ++k) {
    if (m < static_cast<size_t>(k - 1)) break;
    auto& par = parent[static_cast<size_t>(k)];
    par.assign(m + 1, -1);
    size_t j_begin = k >= 3 ? static_cast<size_t>(k - 2) : 0;
    for (size_t i = j_begin + 1; i <= last; ++i) {
      double best = neg_inf;
      int32_t arg = -1;
      const int64_t pi = pos[i];
      const int64_t ci = cnt[i];
      // j ranges over candidate cut indices strictly left of position i;
      // ascending scan with strict improvement keeps the leftmost tie.
      const size_t j_end = std::min(i, m);
      for (size_t j = j_begin; j < j_end; ++j) {
        if (prev[j] == neg_inf) continue;
        const int64_t h = ci - cnt[j];
        double v = prev[j];
        if (h > 0) v += static_cast<double>(h) * (lg[h] - lg_n - lg[pi - pos[j]]);
        if (v > best) {
          best = v;
          arg = static_cast<int32_t>(j);
        }
      }
      cur[i] = best;
      par[i] = arg;
    }
    for (size_t i = 0; i <= std::min(j_begin, last); ++i) cur[i] = neg_inf;
    auto& slot = res.per_k[static_cast<size_t>(k)];
    slot.feasible = cur[last] != neg_inf;
    if (slot.feasible) {
      slot.loglik_bits = cur[last];
      slot.cut_units.resize(static_cast<size_t>(k - 1));
      size_t at = last;
      for (int kk = k; kk >= 2; --kk) {
        at = static_cast<size_t>(parent[static_cast<size_t>(kk)][at]);
        slot.cut_units[static_cast<size_t>(kk - 2)] = pos[at];
      }
    }
    std::swap(prev, cur);
  }
}

}  // namespace

DpResult select_from_histogram(const PositionHistogram& hist, const Extent1D& extent, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  DpResult res;
  res.extent = extent;
  run_dp(res, hist, k_max);

  int64_t n = hist.n();
  int64_t e = extent.interior_positions();
  auto comp = log_comp(n, k_max);
  auto lf = palm::log2_factorials(std::max<int64_t>(e, 1));
  res.chosen_k = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    auto& slot = res.per_k[static_cast<size_t>(k)];
    if (!slot.feasible) continue;
    slot.total_bits = detail::total_bits(slot.loglik_bits, k, comp, lf, e);
    if (slot.total_bits < best) {
      best = slot.total_bits;
      res.chosen_k = k;
    }
  }
  res.total_bits = best;
  return res;
}

DpResult dp_best_cuts(std::span<const double> z, const Extent1D& extent, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  auto hist = PositionHistogram::from_values(z, extent);
  DpResult res;
  res.extent = extent;
  run_dp(res, hist, k_max);
  return res;
}

DpResult select_mdl_histogram(std::span<const double> z, const Extent1D& extent, int k_max) {
  auto hist = PositionHistogram::from_values(z, extent);
  return select_from_histogram(hist, extent, k_max);
}

}  // namespace palm::hist1d
