#include "palm/nml.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace palm {

std::vector<double> log2_factorials(int64_t up_to) {
  std::vector<double> lf(static_cast<size_t>(up_to) + 1, 0.0);
  for (int64_t i = 2; i <= up_to; ++i)
    lf[static_cast<size_t>(i)] = lf[static_cast<size_t>(i - 1)] + std::log2(static_cast<double>(i));
  return lf;
}

double log2_choose(const std::vector<double>& lf, int64_t n, int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return lf[static_cast<size_t>(n)] - lf[static_cast<size_t>(k)] - lf[static_cast<size_t>(n - k)];
}

double log2_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp2(std::min(a, b) - m)) / std::numbers::ln2_v<double>;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log2 of one composition term: C(n; h_1..h_K) * prod (h_j/n)^{h_j}.
// h log2(h/n) with the 0 log 0 = 0 convention.
double h_term(int64_t h, int64_t n) {
  if (h == 0) return 0.0;
  return static_cast<double>(h) * std::log2(static_cast<double>(h) / static_cast<double>(n));
}

// log2 COMP(n, 2) by direct summation over h = 0..n.
double log_comp2(int64_t n, const std::vector<double>& lf) {
  double acc = kNegInf;
  for (int64_t h = 0; h <= n; ++h) {
    double term = log2_choose(lf, n, h) + h_term(h, n) + h_term(n - h, n);
    acc = log2_add(acc, term);
  }
  return acc;
}

}  // namespace

CompTable log_comp(int64_t n, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  CompTable t;
  t.n = n;
  t.bits.assign(static_cast<size_t>(k_max) + 1, 0.0);
  if (n == 0 || k_max == 1) return t;  // COMP(0, K) = COMP(n, 1) = 1
  auto lf = log2_factorials(n);
  t.bits[2] = log_comp2(n, lf);
  double log2_n = std::log2(static_cast<double>(n));
  for (int k = 3; k <= k_max; ++k) {
    double rec = log2_n - std::log2(static_cast<double>(k - 2)) + t.bits[static_cast<size_t>(k - 2)];
    t.bits[static_cast<size_t>(k)] = log2_add(t.bits[static_cast<size_t>(k - 1)], rec);
  }
  return t;
}

double log_comp_brute(int64_t n, int k) {
  if (n < 0 || n > 15 || k < 1 || k > 8) throw std::invalid_argument("log_comp_brute limits: n <= 15, K <= 8");
  if (n == 0) return 0.0;
  auto lf = log2_factorials(n);
  std::vector<int64_t> h(static_cast<size_t>(k), 0);
  double acc = kNegInf;
  // Odometer over compositions of n into k nonnegative parts.
  h[0] = n;
  while (true) {
    double term = lf[static_cast<size_t>(n)];
    for (int j = 0; j < k; ++j) {
      term -= lf[static_cast<size_t>(h[static_cast<size_t>(j)])];
      term += h_term(h[static_cast<size_t>(j)], n);
    }
    acc = log2_add(acc, term);
    // Next composition: move one unit in colex order.
    int j = 0;
    while (j < k - 1 && h[static_cast<size_t>(j)] == 0) ++j;
    if (j == k - 1) break;
    int64_t v = h[static_cast<size_t>(j)];
    h[static_cast<size_t>(j)] = 0;
    h[0] = v - 1;
    h[static_cast<size_t>(j + 1)] += 1;
  }
  return acc;
}

double comp_brute_2d(int64_t n, const Partition& partition) {
  const auto& g = partition.grid;
  int64_t cells = g.cells();
  if (cells > 9 || n > 4 || n < 0) throw std::invalid_argument("comp_brute_2d caps: |S|/eps^2 <= 9, n <= 4");
  if (n == 0) return 0.0;
  // Region id per cell.
  std::vector<int> owner(static_cast<size_t>(cells), -1);
  for (size_t j = 0; j < partition.regions.size(); ++j)
    for (const auto& r : partition.regions[j].rects)
      for (int64_t cy = r.y0; cy < r.y1; ++cy)
        for (int64_t cx = r.x0; cx < r.x1; ++cx)
          owner[static_cast<size_t>(cy * g.width + cx)] = static_cast<int>(j);
  size_t k = partition.regions.size();
  std::vector<int64_t> region_cells(k, 0);
  for (int id : owner) {
    if (id < 0) throw std::logic_error("partition does not cover S");
    ++region_cells[static_cast<size_t>(id)];
  }
  std::vector<int64_t> seq(static_cast<size_t>(n), 0);
  std::vector<int64_t> h(k, 0);
  double sum = 0.0;  // linear accumulation is safe at these caps
  while (true) {
    std::fill(h.begin(), h.end(), 0);
    for (int64_t c : seq) ++h[static_cast<size_t>(owner[static_cast<size_t>(c)])];
    double p = 1.0;
    for (size_t j = 0; j < k; ++j) {
      if (h[j] == 0) continue;
      double base = static_cast<double>(h[j]) /
                    (static_cast<double>(n) * static_cast<double>(region_cells[j]));
      p *= std::pow(base, static_cast<double>(h[j]));
    }
    sum += p;
    int64_t pos = n - 1;
    while (pos >= 0 && seq[static_cast<size_t>(pos)] == cells - 1) {
      seq[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++seq[static_cast<size_t>(pos)];
  }
  return std::log2(sum);
}

double data_code_length_2d(const Partition& partition, const Dataset2D& data) {
  int64_t n = data.n();
  if (n == 0) return 0.0;
  double neg_loglik = 0.0;
  for (const auto& region : partition.regions) {
    if (region.area_units <= 0) throw std::logic_error("region with zero area");
    if (region.count == 0) continue;
    double ratio = static_cast<double>(region.count) /
                   (static_cast<double>(n) * static_cast<double>(region.area_units));
    neg_loglik -= static_cast<double>(region.count) * std::log2(ratio);
  }
  auto comp = log_comp(n, static_cast<int>(partition.regions.size()));
  return neg_loglik + comp.bits.back();
}

DensityVector ml_densities(const Partition& partition, const Dataset2D& data) {
  int64_t n = data.n();
  if (n < 1) throw std::invalid_argument("ml_densities requires n >= 1");
  DensityVector d;
  d.values.reserve(partition.regions.size());
  for (const auto& region : partition.regions)
    d.values.push_back(static_cast<double>(region.count) /
                       (static_cast<double>(n) * region.area(partition.grid)));
  return d;
}

}  // namespace palm
