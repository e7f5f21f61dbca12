#pragma once

#include <span>
#include <vector>

#include "mogc/common.hpp"

namespace mogc {

// Joint label counts.  Positions where either side is negative (unlabeled)
// are skipped; cluster ids need not be dense, rows/cols are remapped.
struct ContingencyTable {
  int rows = 0, cols = 0;
  std::vector<long long> cell;  // rows x cols, row-major
  std::vector<long long> row_sum, col_sum;
  long long total = 0;
};

ContingencyTable contingency(std::span<const int> a, std::span<const int> b);

// Permutation-model adjusted Rand index in [-1, 1].  Degenerate pairs where
// the adjustment denominator vanishes (both partitions trivial in the same
// way) score 1.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// Fraction of node pairs on which the partitions agree; 1 for fewer than
// two labeled nodes.
double rand_index(std::span<const int> a, std::span<const int> b);

enum class NmiNorm { arithmetic, geometric };

// Mutual information over the arithmetic (default) or geometric mean of the
// entropies, natural log.  Two constant partitions score 1, one constant
// partition scores 0.
double normalized_mutual_information(std::span<const int> a, std::span<const int> b,
                                     NmiNorm norm = NmiNorm::arithmetic);

}  // namespace mogc
