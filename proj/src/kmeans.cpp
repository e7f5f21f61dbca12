#include "mogc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mogc {

namespace {

double dist2(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int c = 0; c < dim; ++c) {
    double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

struct Run {
  std::vector<int> labels;
  std::vector<double> centroids;
  double wcss = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

Run lloyd_once(const std::vector<double>& pts, int n, int dim, int k, std::mt19937_64& rng) {
  Run run;
  run.centroids.assign(static_cast<std::size_t>(k) * dim, 0.0);
  std::vector<double> d2(n);

  // k-means++: spread the seeds proportionally to squared distance.
  int first = static_cast<int>(rng_index(rng, n));
  std::copy_n(&pts[static_cast<std::size_t>(first) * dim], dim, run.centroids.begin());
  for (int i = 0; i < n; ++i) d2[i] = dist2(&pts[std::size_t(i) * dim], run.centroids.data(), dim);
  for (int c = 1; c < k; ++c) {
    double total = det_sum(d2);
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng_index(rng, n));
    } else {
      double r = rng_unit(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    }
    double* cen = &run.centroids[static_cast<std::size_t>(c) * dim];
    std::copy_n(&pts[static_cast<std::size_t>(pick) * dim], dim, cen);
    for (int i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], dist2(&pts[std::size_t(i) * dim], cen, dim));
  }

  run.labels.assign(n, 0);
  std::vector<double> sums(static_cast<std::size_t>(k) * dim);
  std::vector<int> counts(k);
  std::vector<double> next(run.centroids.size());
  for (int iter = 0; iter < 300; ++iter) {
    run.iterations = iter + 1;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = dist2(&pts[std::size_t(i) * dim], run.centroids.data(), dim);
      for (int c = 1; c < k; ++c) {
        double d = dist2(&pts[std::size_t(i) * dim], &run.centroids[std::size_t(c) * dim], dim);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      run.labels[i] = best;
      d2[i] = bd;
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {  // serial, point order: reproducible sums
      int c = run.labels[i];
      ++counts[c];
      for (int a = 0; a < dim; ++a) sums[std::size_t(c) * dim + a] += pts[std::size_t(i) * dim + a];
    }
    std::copy(run.centroids.begin(), run.centroids.end(), next.begin());
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0)
        for (int a = 0; a < dim; ++a)
          next[std::size_t(c) * dim + a] = sums[std::size_t(c) * dim + a] / counts[c];
    // Re-seed emptied clusters from the farthest point.
    std::vector<std::uint8_t> taken(n, 0);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far = -1;
      double fd = -1.0;
      for (int i = 0; i < n; ++i)
        if (!taken[i] && d2[i] > fd) {
          fd = d2[i];
          far = i;
        }
      if (far < 0) break;
      taken[far] = 1;
      std::copy_n(&pts[static_cast<std::size_t>(far) * dim], dim,
                  next.begin() + static_cast<std::size_t>(c) * dim);
    }
    double moved = 0.0;
    for (int c = 0; c < k; ++c)
      moved = std::max(moved,
                       std::sqrt(dist2(&run.centroids[std::size_t(c) * dim],
                                       &next[std::size_t(c) * dim], dim)));
    run.centroids.swap(next);
    if (moved < 1e-8) break;
  }
  // Final assignment against the settled centroids.
  double wcss = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bd = dist2(&pts[std::size_t(i) * dim], run.centroids.data(), dim);
    for (int c = 1; c < k; ++c) {
      double d = dist2(&pts[std::size_t(i) * dim], &run.centroids[std::size_t(c) * dim], dim);
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    run.labels[i] = best;
    wcss += bd;
  }
  run.wcss = wcss;
  return run;
}

}  // namespace

KmeansResult kmeans(const Embedding& points, int k, std::uint64_t seed, int restarts,
                    bool row_normalize) {
  const int n = points.n, dim = points.k;
  if (k < 1 || k > n) throw InvalidArgument("cluster count out of range");
  if (restarts < 1) throw InvalidArgument("need at least one restart");

  std::vector<double> pts(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < dim; ++c) pts[std::size_t(i) * dim + c] = points.at(i, c);
  if (row_normalize) {
    for (int i = 0; i < n; ++i) {
      double* row = &pts[std::size_t(i) * dim];
      double s = 0.0;
      for (int c = 0; c < dim; ++c) s += row[c] * row[c];
      if (s > 0.0) {
        double inv = 1.0 / std::sqrt(s);
        for (int c = 0; c < dim; ++c) row[c] *= inv;
      }
    }
  }

  Run best;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1));
    Run run = lloyd_once(pts, n, dim, k, rng);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  KmeansResult out;
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.wcss = best.wcss;
  out.iterations = best.iterations;
  return out;
}

}  // namespace mogc
