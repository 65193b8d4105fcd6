#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "coh/sampler.hpp"

namespace coh {

/// Largest absolute pairwise correlation of a matrix and the pair that
/// attains it. Indices are zero-based with i < j.
struct CoherenceResult {
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  bool centered = true;
  /// log(1 − value²); −∞ iff value == 1.
  double t_stat = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
};

struct KernelOptions {
  /// 0 = default_threads().
  unsigned threads = 0;
  /// Columns per block; 0 picks a size that keeps two blocks in L2.
  /// Rounded up to a multiple of the 8-column panel width.
  std::size_t block_columns = 0;
};

/// log(1 − L²) computed without cancellation near L = 1.
double log_one_minus_square(double L);

/// Coherence L_n (centered = true, Pearson correlations) or L̃_n
/// (centered = false, cosines of the raw columns).
///
/// Columns are normalized once, packed into 8-wide panels and compared
/// block against block; each block pair reduces to its own maximum and
/// the maxima are combined under the order (larger value, then smaller
/// (i, j)). Every pair's value is computed by the same instruction
/// sequence whatever the block and thread layout, so the result is
/// bit-identical across thread counts.
///
/// Throws ShapeError for p < 2 or n < 2, DegenerateColumnError for a
/// constant column (centered) or zero column (uncentered).
CoherenceResult coherence(const SampleMatrix& m, bool centered,
                          const KernelOptions& options = {});

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Correlations of the listed pairs, each in [−1, 1]. RangeError unless
/// i < j < p for every pair.
std::vector<double> pair_correlations(const SampleMatrix& m,
                                      std::span<const IndexPair> pairs,
                                      bool centered);

}  // namespace coh
