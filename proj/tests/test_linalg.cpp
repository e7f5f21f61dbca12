#include <doctest.h>

#include <cmath>
#include <random>

#include "mogc/linalg.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mogc;
using testutil::erdos_renyi;
using testutil::graph_from_edges;

namespace {

EigResult solve_pencil(const Graph& g, int k, const EigOptions& opt = {}) {
  auto a = g.adjacency();
  auto lap = laplacian(a).to_csr();
  auto d = degree(a);
  for (auto& x : d)
    if (x <= 0.0) x = 1e-8;
  return smallest_generalized_eigenpairs(lap, d, k, opt);
}

double pencil_residual(const Graph& g, const EigResult& r) {
  auto a = g.adjacency();
  auto lap = laplacian(a).to_csr();
  auto d = degree(a);
  for (auto& x : d)
    if (x <= 0.0) x = 1e-8;
  double worst = 0.0;
  std::vector<double> y(g.n);
  for (int c = 0; c < r.u.k; ++c) {
    csr_matvec_serial(lap, r.u.col(c), y.data());
    for (int i = 0; i < g.n; ++i) y[i] -= d[i] * r.u.at(i, c) * r.eigenvalues[c];
    worst = std::max(worst, std::sqrt(det_norm2(y)));
  }
  return worst;
}

double ortho_error(const Graph& g, const EigResult& r) {
  auto d = degree(g.adjacency());
  for (auto& x : d)
    if (x <= 0.0) x = 1e-8;
  double worst = 0.0;
  for (int a = 0; a < r.u.k; ++a)
    for (int b = 0; b < r.u.k; ++b) {
      double s = 0.0;
      for (int i = 0; i < g.n; ++i) s += r.u.at(i, a) * d[i] * r.u.at(i, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("conjugate gradients solves small SPD systems") {
  // tridiagonal system with known solution
  const int n = 50;
  auto apply = [n](const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
      y[i] = 4.0 * x[i];
      if (i > 0) y[i] -= x[i - 1];
      if (i + 1 < n) y[i] -= x[i + 1];
    }
  };
  std::vector<double> want(n);
  std::mt19937_64 rng(3);
  for (auto& v : want) v = rng_unit(rng) - 0.5;
  std::vector<double> b(n);
  apply(want.data(), b.data());
  auto res = conjugate_gradient(apply, b);
  REQUIRE(res.converged);
  for (int i = 0; i < n; ++i) CHECK(res.x[i] == doctest::Approx(want[i]).epsilon(1e-9));

  auto capped = conjugate_gradient(apply, b, 1e-14, 2);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 2);

  auto again = conjugate_gradient(apply, b);
  CHECK(again.x == res.x);  // bitwise deterministic
}

TEST_CASE("laplacian and degree basics") {
  auto g = graph_from_edges(3, {{0, 1}, {1, 2}}, 2.0);
  auto a = g.adjacency();
  auto d = degree(a);
  CHECK(d == std::vector<double>{2.0, 4.0, 2.0});
  auto lap = laplacian(a);
  Csr c = lap.to_csr();
  std::vector<double> ones(3, 1.0), y(3);
  csr_matvec_serial(c, ones.data(), y.data());
  for (double v : y) CHECK(v == doctest::Approx(0.0));  // L 1 = 0
}

TEST_CASE("three-node path has pencil spectrum 0, 1, 2") {
  auto g = graph_from_edges(3, {{0, 1}, {1, 2}});
  auto r = solve_pencil(g, 3);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(r.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(r.eigenvalues[2] == doctest::Approx(2.0));
  CHECK(r.used_dense_path);  // tiny problems go straight to the dense route
}

TEST_CASE("triangle ground vector is the scaled all-ones") {
  auto g = testutil::complete_graph(3);
  auto r = solve_pencil(g, 2);
  CHECK(r.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.5));
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(r.u.at(i, 0)) == doctest::Approx(1.0 / std::sqrt(6.0)));
}

TEST_CASE("lanczos route matches the dense oracle") {
  for (std::uint64_t seed : {11ull, 12ull}) {
    Graph g = erdos_renyi(260, 0.04, seed);
    CAPTURE(seed);
    int k = 5;
    auto r = solve_pencil(g, k);
    auto want = oracle::dense_embedding(g.adjacency(), k);
    for (int c = 0; c < k; ++c)
      CHECK(r.eigenvalues[c] == doctest::Approx(want.eigenvalues[c]).epsilon(1e-7));
    CHECK(pencil_residual(g, r) < 1e-6 * std::max(1.0, g.adjacency().frobenius_norm()));
    CHECK(ortho_error(g, r) < 1e-8);
    // compare spanned subspaces when the spectral gap is clean
    auto tail = oracle::dense_embedding(g.adjacency(), k + 1);
    if (tail.eigenvalues[k] - tail.eigenvalues[k - 1] > 1e-6) {
      auto d = degree(g.adjacency());
      for (auto& x : d)
        if (x <= 0.0) x = 1e-8;
      CHECK(oracle::subspace_distance(r.u, want.u, d) < 1e-5);
    }
  }
}

TEST_CASE("repeated zero eigenvalues from disconnected graphs are recovered") {
  // five disjoint triangles: eigenvalue 0 with multiplicity 5
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < 5; ++t) {
    int b = 3 * t;
    pairs.insert(pairs.end(), {{b, b + 1}, {b + 1, b + 2}, {b, b + 2}});
  }
  // pad with a larger random component so the problem takes the Lanczos route
  Graph pad = erdos_renyi(220, 0.05, 77);
  for (const auto& e : pad.edges) pairs.emplace_back(e.u + 15, e.v + 15);
  Graph g = testutil::graph_from_edges(235, std::move(pairs));

  auto r = solve_pencil(g, 6);
  for (int c = 0; c < 5; ++c) CHECK(std::abs(r.eigenvalues[c]) < 1e-8);
  CHECK(ortho_error(g, r) < 1e-8);
  CHECK(pencil_residual(g, r) < 1e-6 * std::max(1.0, g.adjacency().frobenius_norm()));
  auto want = oracle::dense_embedding(g.adjacency(), 6);
  for (int c = 0; c < 6; ++c)
    CHECK(r.eigenvalues[c] == doctest::Approx(want.eigenvalues[c]).epsilon(1e-6));
}

TEST_CASE("warm starts reproduce the cold solve") {
  Graph g = erdos_renyi(300, 0.035, 21);
  auto cold = solve_pencil(g, 4);
  EigOptions opt;
  opt.warm = &cold.u;
  auto warm = solve_pencil(g, 4, opt);
  for (int c = 0; c < 4; ++c)
    CHECK(warm.eigenvalues[c] == doctest::Approx(cold.eigenvalues[c]).epsilon(1e-8));
  CHECK(pencil_residual(g, warm) < 1e-6 * std::max(1.0, g.adjacency().frobenius_norm()));

  // nonsense warm start must not break correctness
  Embedding junk(g.n, 4);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < g.n; ++i) junk.at(i, c) = 1.0;
  EigOptions bad;
  bad.warm = &junk;
  auto r = solve_pencil(g, 4, bad);
  for (int c = 0; c < 4; ++c)
    CHECK(r.eigenvalues[c] == doctest::Approx(cold.eigenvalues[c]).epsilon(1e-8));
}

TEST_CASE("eigensolver validates its input") {
  Graph g = erdos_renyi(20, 0.2, 5);
  auto lap = laplacian(g.adjacency()).to_csr();
  auto d = degree(g.adjacency());
  CHECK_THROWS_AS(smallest_generalized_eigenpairs(lap, d, 0), InvalidArgument);
  CHECK_THROWS_AS(smallest_generalized_eigenpairs(lap, d, 21), InvalidArgument);
  std::vector<double> short_d(19, 1.0);
  CHECK_THROWS_AS(smallest_generalized_eigenpairs(lap, short_d, 2), InvalidArgument);
  std::vector<double> neg_d(20, -1.0);
  CHECK_THROWS_AS(smallest_generalized_eigenpairs(lap, neg_d, 2), InvalidArgument);
}
