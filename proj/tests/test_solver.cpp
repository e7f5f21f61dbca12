#include <doctest.h>

#include <cmath>
#include <random>

#include "mogc/motif.hpp"
#include "mogc/metrics.hpp"
#include "mogc/solver.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mogc;
using testutil::erdos_renyi;
using testutil::graph_from_edges;

namespace {

MotifBundle bundle_for(const Graph& g, std::initializer_list<const char*> names) {
  std::vector<MotifAdjacency> mas;
  for (const char* nm : names) mas.push_back(build_motif_adjacency(g, motif_by_name(nm)));
  return MotifBundle::assemble(std::move(mas));
}

WeightMatrix random_row_stochastic(const MotifBundle& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightMatrix w(b.n, b.m());
  for (int i = 0; i < b.n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < b.m(); ++j)
      if (b.motifs[j].active[i]) {
        w.at(i, j) = 0.05 + rng_unit(rng);
        sum += w.at(i, j);
      }
    for (int j = 0; j < b.m(); ++j)
      if (sum > 0.0) w.at(i, j) /= sum;
  }
  return w;
}

Embedding random_embedding(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Embedding u(n, k);
  for (auto& v : u.data) v = rng_unit(rng) - 0.5;
  return u;
}

// two triangles joined by nothing
Graph two_triangles() {
  return graph_from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

}  // namespace

TEST_CASE("fused adjacency matches the dense formula") {
  for (std::uint64_t seed : {2ull, 8ull}) {
    Graph g = erdos_renyi(25, 0.25, seed);
    auto b = bundle_for(g, {"edge", "m3_2", "m3_3"});
    auto w = random_row_stochastic(b, seed + 100);
    auto fused = fuse_adjacency(b, w);
    auto dense = oracle::fuse_dense(b, w);
    // collect the sparse result densely
    std::vector<std::vector<double>> got(b.n, std::vector<double>(b.n, 0.0));
    for (const auto& t : fused.upper()) {
      got[t.row][t.col] += t.value;
      if (t.row != t.col) got[t.col][t.row] += t.value;
    }
    for (int i = 0; i < b.n; ++i)
      for (int j = 0; j < b.n; ++j)
        CHECK(got[i][j] == doctest::Approx(dense[i][j]).epsilon(1e-13));
  }
}

TEST_CASE("compiled refresh reproduces the one-shot fusion bitwise") {
  Graph g = erdos_renyi(30, 0.2, 4);
  auto b = bundle_for(g, {"edge", "m3_3"});
  FusedStructure fs(b);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto w = random_row_stochastic(b, seed);
    fs.refresh(w, 1e-8);
    auto snapshot = fs.fused();
    auto direct = fuse_adjacency(b, w);
    REQUIRE(snapshot.upper().size() == direct.upper().size());
    for (std::size_t e = 0; e < direct.upper().size(); ++e) {
      CHECK(snapshot.upper()[e].row == direct.upper()[e].row);
      CHECK(snapshot.upper()[e].col == direct.upper()[e].col);
      CHECK(snapshot.upper()[e].value == direct.upper()[e].value);  // bitwise
    }
  }
}

TEST_CASE("compiled motif matvec equals the standalone matrices") {
  Graph g = erdos_renyi(28, 0.2, 6);
  auto b = bundle_for(g, {"edge", "m3_2"});
  FusedStructure fs(b);
  std::mt19937_64 rng(5);
  std::vector<double> x(b.n), y1(b.n), y2(b.n);
  for (auto& v : x) v = rng_unit(rng) - 0.5;
  for (int j = 0; j < b.m(); ++j) {
    fs.motif_matvec(j, x.data(), y1.data());
    csr_matvec_serial(b.motifs[j].matrix.to_csr(), x.data(), y2.data());
    for (int i = 0; i < b.n; ++i) CHECK(y1[i] == y2[i]);
  }
}

TEST_CASE("uniform weights spread over active motifs only") {
  Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  auto b = bundle_for(g, {"edge", "m3_3"});  // node 3 in no triangle
  auto w = uniform_weights(b);
  CHECK(w.at(0, 0) == 0.5);
  CHECK(w.at(0, 1) == 0.5);
  CHECK(w.at(3, 0) == 1.0);
  CHECK(w.at(3, 1) == 0.0);

  Graph iso = graph_from_edges(3, {{0, 1}});  // node 2 isolated
  auto bi = bundle_for(iso, {"edge"});
  CHECK_THROWS_AS(uniform_weights(bi), InvalidArgument);
}

TEST_CASE("subproblem data satisfies both trace identities") {
  for (std::uint64_t seed : {3ull, 7ull}) {
    Graph g = erdos_renyi(22, 0.28, seed);
    auto b = bundle_for(g, {"edge", "m3_2", "m3_3"});
    auto u = random_embedding(b.n, 3, seed + 1);
    auto prob = build_lambda_problem(b, u);
    // the identities are linear in the weights, so any test point works
    auto w = random_row_stochastic(b, seed + 2);

    auto fused = fuse_adjacency(b, w);
    auto lap = laplacian(fused).to_csr();
    auto deg = degree(fused);
    Csr af = fused.to_csr();

    std::vector<double> x(static_cast<std::size_t>(b.n) * b.m());
    for (int j = 0; j < b.m(); ++j)
      for (int i = 0; i < b.n; ++i) x[static_cast<std::size_t>(j) * b.n + i] = w.at(i, j);

    std::vector<double> y(b.n);
    double trace = 0.0;
    for (int c = 0; c < u.k; ++c) {
      // u_c^T D u_c vs p_c . x
      double quad = 0.0;
      for (int i = 0; i < b.n; ++i) quad += deg[i] * u.at(i, c) * u.at(i, c);
      double lin = det_dot(prob.p[c], x);
      CHECK(lin == doctest::Approx(quad).epsilon(1e-10));
      csr_matvec_serial(lap, u.col(c), y.data());
      trace += det_dot(std::span<const double>(u.col(c), b.n), y);
    }
    CHECK(det_dot(prob.v, x) == doctest::Approx(trace).epsilon(1e-9));
  }
}

TEST_CASE("weight subproblem matches the projection oracle") {
  for (std::uint64_t seed : {1ull, 4ull, 9ull}) {
    CAPTURE(seed);
    Graph g = erdos_renyi(16, 0.3, seed);
    auto b = bundle_for(g, {"edge", "m3_2", "m3_3"});
    // a realistic U: eigenvectors of the uniformly fused adjacency
    auto w0 = uniform_weights(b);
    auto eig = solve_u(fuse_adjacency(b, w0), 3);
    auto prob = build_lambda_problem(b, eig.u);
    for (double alpha : {0.3, 1.0, 6.0}) {
      CAPTURE(alpha);
      auto sol = solve_lambda(prob, alpha);
      auto want = oracle::lambda_projection(prob, alpha);
      for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.m(); ++j)
          CHECK(sol.lambda_raw.at(i, j) == doctest::Approx(want.at(i, j)).epsilon(5e-5));
      // returned weights: nonnegative rows summing to one on active nodes
      for (int i = 0; i < b.n; ++i) {
        double rs = 0.0;
        for (int j = 0; j < b.m(); ++j) {
          CHECK(sol.lambda.at(i, j) >= 0.0);
          rs += sol.lambda.at(i, j);
        }
        CHECK(rs == doctest::Approx(1.0).epsilon(1e-12));
      }
      CHECK(sol.info.coupling_residual < 1e-7);
    }
  }
}

TEST_CASE("single-motif weights collapse to ones") {
  Graph g = erdos_renyi(14, 0.3, 2);
  auto b = bundle_for(g, {"edge"});
  auto eig = solve_u(fuse_adjacency(b, uniform_weights(b)), 2);
  auto prob = build_lambda_problem(b, eig.u);
  auto sol = solve_lambda(prob, 1.0);
  for (int i = 0; i < b.n; ++i) CHECK(sol.lambda.at(i, 0) == 1.0);
}

TEST_CASE("duplicated structure splits the weight evenly") {
  Graph g = erdos_renyi(15, 0.3, 6);
  auto e1 = build_motif_adjacency(g, motif_by_name("edge"));
  auto e2 = e1;
  e2.spec.name = "edge_copy";
  auto b = MotifBundle::assemble({e1, e2});
  auto eig = solve_u(fuse_adjacency(b, uniform_weights(b)), 2);
  auto prob = build_lambda_problem(b, eig.u);
  auto sol = solve_lambda(prob, 2.0);
  for (int i = 0; i < b.n; ++i) {
    CHECK(sol.lambda.at(i, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.lambda.at(i, 1) == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("objective helper equals a from-scratch evaluation") {
  Graph g = erdos_renyi(18, 0.3, 12);
  auto b = bundle_for(g, {"edge", "m3_3"});
  auto w = random_row_stochastic(b, 3);
  auto u = random_embedding(b.n, 2, 4);
  double got = objective(b, w, u, 1.7);

  auto lap = laplacian(fuse_adjacency(b, w)).to_csr();
  std::vector<double> y(b.n);
  double trace = 0.0;
  for (int c = 0; c < u.k; ++c) {
    csr_matvec_serial(lap, u.col(c), y.data());
    trace += det_dot(std::span<const double>(u.col(c), b.n), y);
  }
  double frob = 0.0;
  for (double v : w.w) frob += v * v;
  CHECK(got == doctest::Approx(trace + 1.7 * frob).epsilon(1e-12));
}

TEST_CASE("alternating solve separates disconnected cliques") {
  auto b = bundle_for(two_triangles(), {"edge", "m3_3"});
  MOGCConfig cfg;
  cfg.k = 2;
  cfg.alpha = 1.0;
  auto st = mogc_cluster(b, cfg);
  CHECK(st.converged);
  CHECK(st.labels[0] == st.labels[1]);
  CHECK(st.labels[1] == st.labels[2]);
  CHECK(st.labels[3] == st.labels[4]);
  CHECK(st.labels[4] == st.labels[5]);
  CHECK(st.labels[0] != st.labels[3]);
  // both smallest eigenvalues vanish on a two-component graph
  CHECK(std::abs(st.eigenvalues[0]) < 1e-8);
  CHECK(std::abs(st.eigenvalues[1]) < 1e-8);
  // weight rows are distributions
  for (int i = 0; i < b.n; ++i) {
    double rs = 0.0;
    for (int j = 0; j < b.m(); ++j) rs += st.lambda.at(i, j);
    CHECK(rs == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("objective history is non-increasing") {
  for (std::uint64_t seed : {5ull, 8ull}) {
    Graph g = erdos_renyi(40, 0.15, seed);
    auto b = bundle_for(g, {"edge", "m3_2"});
    MOGCConfig cfg;
    cfg.k = 3;
    cfg.alpha = 0.8;
    auto st = mogc_cluster(b, cfg);
    REQUIRE(st.objective_history.size() >= 2);
    for (std::size_t i = 1; i < st.objective_history.size(); ++i)
      CHECK(st.objective_history[i] <=
            st.objective_history[i - 1] + 1e-7 * std::max(1.0, std::abs(st.objective_history[i - 1])));
    CHECK(st.trace_identity_max_rel_err < 1e-8);
  }
}

TEST_CASE("runs are bit-reproducible") {
  Graph g = erdos_renyi(35, 0.18, 10);
  auto b = bundle_for(g, {"edge", "m3_3"});
  MOGCConfig cfg;
  cfg.k = 2;
  cfg.alpha = 2.0;
  auto a1 = mogc_cluster(b, cfg);
  auto a2 = mogc_cluster(b, cfg);
  CHECK(a1.labels == a2.labels);
  CHECK(a1.u.data == a2.u.data);
  CHECK(a1.lambda.w == a2.lambda.w);
  CHECK(a1.objective_history == a2.objective_history);
  CHECK(a1.kmeans_wcss == a2.kmeans_wcss);
}

TEST_CASE("public-op iteration tracks the packaged solver") {
  Graph g = erdos_renyi(20, 0.25, 14);
  auto b = bundle_for(g, {"edge", "m3_2"});
  MOGCConfig cfg;
  cfg.k = 2;
  cfg.alpha = 1.5;
  cfg.max_iter = 1;
  auto st = mogc_cluster(b, cfg);

  auto w0 = uniform_weights(b);
  auto eig = solve_u(fuse_adjacency(b, w0), 2);
  auto prob = build_lambda_problem(b, eig.u);
  auto sol = solve_lambda(prob, cfg.alpha);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.m(); ++j)
      CHECK(st.lambda.at(i, j) == doctest::Approx(sol.lambda.at(i, j)).epsilon(1e-9));
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < b.n; ++i)
      CHECK(std::abs(st.u.at(i, c)) == doctest::Approx(std::abs(eig.u.at(i, c))).epsilon(1e-7));
}

TEST_CASE("solver validates configuration and coverage") {
  auto b = bundle_for(two_triangles(), {"edge"});
  MOGCConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(mogc_cluster(b, cfg), InvalidArgument);
  cfg.alpha = 1.0;
  cfg.k = 1;
  CHECK_THROWS_AS(mogc_cluster(b, cfg), InvalidArgument);
  cfg.k = 7;
  CHECK_THROWS_AS(mogc_cluster(b, cfg), InvalidArgument);
  cfg.k = 2;
  cfg.max_iter = 0;
  CHECK_THROWS_AS(mogc_cluster(b, cfg), InvalidArgument);

  // a node no motif covers is rejected: the caller must restrict first
  Graph iso = graph_from_edges(4, {{0, 1}, {1, 2}});  // node 3 isolated
  auto bi = bundle_for(iso, {"edge"});
  MOGCConfig ok;
  ok.k = 2;
  CHECK_THROWS_AS(mogc_cluster(bi, ok), InvalidArgument);
}

TEST_CASE("planted partition, mixed structures, end to end") {
  std::vector<int> truth;
  Graph g = oracle::sbm(3, 20, 0.45, 0.03, 42, &truth);
  auto b = bundle_for(g, {"edge", "m3_3"});
  MOGCConfig cfg;
  cfg.k = 3;
  cfg.alpha = 1.0;
  auto st = mogc_cluster(b, cfg);
  CHECK(adjusted_rand_index(st.labels, truth) > 0.9);
}

TEST_CASE("compiled-structure entry point matches the bundle one") {
  Graph g = erdos_renyi(24, 0.22, 19);
  auto b = bundle_for(g, {"edge", "m3_3"});
  MOGCConfig cfg;
  cfg.k = 2;
  auto s1 = mogc_cluster(b, cfg);
  FusedStructure fs(b);
  auto s2 = mogc_cluster(fs, cfg);
  CHECK(s1.labels == s2.labels);
  CHECK(s1.lambda.w == s2.lambda.w);
  CHECK(s1.u.data == s2.u.data);
  // and the structure can be reused for another run right after
  cfg.alpha = 3.0;
  auto s3 = mogc_cluster(fs, cfg);
  CHECK(s3.converged);
}
