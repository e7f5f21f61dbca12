#pragma once

#include <cstdint>
#include <vector>

#include "mogc/linalg.hpp"

namespace mogc {

struct KmeansResult {
  std::vector<int> labels;
  std::vector<double> centroids;  // k x dim, row-major
  double wcss = 0.0;
  int iterations = 0;  // Lloyd iterations of the winning restart
};

// Lloyd iterations with k-means++ seeding, best of `restarts` starts by
// within-cluster sum of squares.  A restart stops when no centroid moves
// more than 1e-8 or after 300 rounds; emptied clusters are re-seeded from
// the point farthest from its centroid.  Ties (seeding and assignment)
// break toward the lower index, and centroid sums accumulate in point
// order, so a given (points, k, seed) is bit-reproducible regardless of
// thread count.  row_normalize applies to a copy of the points.
KmeansResult kmeans(const Embedding& points, int k, std::uint64_t seed, int restarts = 10,
                    bool row_normalize = false);

}  // namespace mogc
