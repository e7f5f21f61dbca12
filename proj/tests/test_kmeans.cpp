#include <doctest.h>

#include <cmath>
#include <random>

#include "mogc/kmeans.hpp"
#include "mogc/metrics.hpp"

using namespace mogc;

namespace {

// three tight blobs in 2d
Embedding blobs(int per, std::uint64_t seed, std::vector<int>* truth) {
  const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
  Embedding e(3 * per, 2);
  truth->resize(3 * per);
  std::mt19937_64 rng(seed);
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < per; ++i) {
      int row = b * per + i;
      (*truth)[row] = b;
      e.at(row, 0) = centers[b][0] + rng_unit(rng) - 0.5;
      e.at(row, 1) = centers[b][1] + rng_unit(rng) - 0.5;
    }
  return e;
}

}  // namespace

TEST_CASE("separated blobs are recovered exactly") {
  std::vector<int> truth;
  auto pts = blobs(30, 5, &truth);
  auto r = kmeans(pts, 3, 1);
  CHECK(adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
  CHECK(r.wcss > 0.0);
  CHECK(r.centroids.size() == 6);
}

TEST_CASE("same seed gives identical results, bitwise") {
  std::vector<int> truth;
  auto pts = blobs(20, 9, &truth);
  auto a = kmeans(pts, 3, 42, 4);
  auto b = kmeans(pts, 3, 42, 4);
  CHECK(a.labels == b.labels);
  CHECK(a.wcss == b.wcss);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("more restarts never worsen the objective") {
  std::vector<int> truth;
  auto pts = blobs(15, 13, &truth);
  auto one = kmeans(pts, 3, 7, 1);
  auto many = kmeans(pts, 3, 7, 12);
  CHECK(many.wcss <= one.wcss + 1e-12);
}

TEST_CASE("degenerate cluster counts behave") {
  std::vector<int> truth;
  auto pts = blobs(4, 3, &truth);
  auto all = kmeans(pts, 1, 1);
  for (int l : all.labels) CHECK(l == 0);
  auto each = kmeans(pts, pts.n, 1);
  CHECK(each.wcss == doctest::Approx(0.0));
  CHECK_THROWS_AS(kmeans(pts, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, pts.n + 1, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, 2, 1, 0), InvalidArgument);
}

TEST_CASE("duplicated points with excess clusters still terminate") {
  Embedding e(6, 1);
  for (int i = 0; i < 6; ++i) e.at(i, 0) = (i < 3) ? 0.0 : 5.0;
  auto r = kmeans(e, 2, 11);
  CHECK(r.labels[0] == r.labels[1]);
  CHECK(r.labels[0] == r.labels[2]);
  CHECK(r.labels[3] == r.labels[4]);
  CHECK(r.labels[0] != r.labels[3]);
  // more clusters than distinct locations: empty clusters get reseeded, the
  // run must still finish with a finite objective
  auto tight = kmeans(e, 4, 11);
  CHECK(std::isfinite(tight.wcss));
}

TEST_CASE("row normalization clusters by direction") {
  // two rays from the origin; radii vary wildly so unnormalized k-means
  // would split by magnitude
  Embedding e(40, 2);
  std::vector<int> truth(40);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    double r = 0.1 + 20.0 * rng_unit(rng);
    bool up = i % 2 == 0;
    truth[i] = up ? 0 : 1;
    e.at(i, 0) = r * (up ? 1.0 : 1.0);
    e.at(i, 1) = r * (up ? 1.0 : -1.0);
  }
  auto r = kmeans(e, 2, 3, 10, true);
  CHECK(adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
}
