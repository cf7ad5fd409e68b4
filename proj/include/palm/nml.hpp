#pragma once

#include <cstdint>
#include <vector>

#include "palm/geometry.hpp"

namespace palm {

/// A code length in bits split into its data and model parts.
struct CodeLength {
  double data_bits = 0.0;
  double model_bits = 0.0;
  double total_bits() const { return data_bits + model_bits; }
};

/// log2 COMP(n, K) for K = 1..k_max, all in bits.
///
/// COMP(n, K) is the multinomial parametric complexity: the sum of maximum
/// likelihoods over every length-n sequence the K-bin model can generate.
/// It depends only on n and K, never on region geometry or dimensionality.
struct CompTable {
  int64_t n = 0;
  std::vector<double> bits;  // index K, [0] unused

  int k_max() const { return static_cast<int>(bits.size()) - 1; }
  double at(int k) const { return bits.at(static_cast<size_t>(k)); }
};

/// Builds the COMP table in O(n + k_max): COMP(n,1) = 1, COMP(n,2) by direct
/// log-sum-exp summation over bin splits, and for K >= 3 the recursion
/// COMP(n,K) = COMP(n,K-1) + n/(K-2) * COMP(n,K-2), carried in log space.
/// n = 0 yields all zeros.
CompTable log_comp(int64_t n, int k_max);

/// Independent oracle: evaluates the defining sum directly by enumerating
/// all compositions h_1+...+h_K = n with multinomial weights, in log space.
/// Limited to n <= 15, K <= 8.
double log_comp_brute(int64_t n, int k);

/// Literal evaluation of the parametric complexity of a 2-D histogram model:
/// sums the maximum likelihood over every sequence of n lattice cells of S.
/// Test-only oracle; capped at |S|/eps^2 <= 9 cells and n <= 4.
double comp_brute_2d(int64_t n, const Partition& partition);

/// NML code length of the data given the partition, in bits:
/// -log2 prod_j (h_j eps^2 / (n |S_j|))^{h_j} + log2 COMP(n, K),
/// with 0 log 0 = 0 for empty regions. Uses the cached region counts.
double data_code_length_2d(const Partition& partition, const Dataset2D& data);

/// Maximum-likelihood densities f_j = h_j / (n |S_j|). Requires n >= 1.
DensityVector ml_densities(const Partition& partition, const Dataset2D& data);

/// Cumulative base-2 log-factorials: result[i] = log2(i!), i = 0..up_to.
std::vector<double> log2_factorials(int64_t up_to);

/// log2 C(n, k) from a shared factorial table.
double log2_choose(const std::vector<double>& lf, int64_t n, int64_t k);

/// log2(2^a + 2^b), tolerant of -inf inputs.
double log2_add(double a, double b);

}  // namespace palm
