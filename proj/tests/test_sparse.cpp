#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "mogc/sparse.hpp"

using namespace mogc;

namespace {

SparseSymMatrix random_sym(int n, int nnz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Triplet> ts;
  for (int e = 0; e < nnz; ++e) {
    int i = rng_index(rng, n), j = rng_index(rng, n);
    if (i > j) std::swap(i, j);
    // mix of scales so the round-trip test is not trivially exact
    double v = (rng_unit(rng) - 0.25) * std::pow(10.0, static_cast<int>(rng_index(rng, 8)) - 4);
    ts.push_back({i, j, v});
  }
  return SparseSymMatrix::from_triplets(n, std::move(ts));
}

std::filesystem::path temp_file(const char* stem) {
  return std::filesystem::temp_directory_path() / stem;
}

}  // namespace

TEST_CASE("from_triplets merges duplicates and drops zeros") {
  auto a = SparseSymMatrix::from_triplets(
      3, {{0, 1, 2.0}, {1, 0, 3.0}, {2, 2, 1.0}, {0, 2, 5.0}, {0, 2, -5.0}});
  CHECK(a.dim() == 3);
  CHECK(a.stored_nnz() == 2);  // (0,1) merged across the mirror, (0,2) cancelled
  REQUIRE(a.upper().size() == 2);
  CHECK(a.upper()[0].row == 0);
  CHECK(a.upper()[0].col == 1);
  CHECK(a.upper()[0].value == 5.0);
  CHECK(a.upper()[1].value == 1.0);
}

TEST_CASE("from_triplets rejects out-of-range indices") {
  CHECK_THROWS_AS(SparseSymMatrix::from_triplets(2, {{0, 2, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(SparseSymMatrix::from_triplets(2, {{-1, 0, 1.0}}), InvalidArgument);
}

TEST_CASE("csr expansion is symmetric and matches row_sums") {
  auto a = random_sym(40, 160, 17);
  Csr c = a.to_csr();
  REQUIRE(c.n == 40);
  // symmetry: value at (i,j) appears at (j,i)
  for (int i = 0; i < c.n; ++i)
    for (std::int64_t s = c.ptr[i]; s < c.ptr[i + 1]; ++s) {
      int j = c.col[s];
      bool found = false;
      for (std::int64_t t = c.ptr[j]; t < c.ptr[j + 1]; ++t)
        if (c.col[t] == i && c.val[t] == c.val[s]) found = true;
      CHECK(found);
    }
  auto rs = row_sums(a);
  for (int i = 0; i < c.n; ++i) {
    double s = 0.0;
    for (std::int64_t t = c.ptr[i]; t < c.ptr[i + 1]; ++t) s += c.val[t];
    CHECK(rs[i] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("parallel matvec equals serial bitwise") {
  auto a = random_sym(300, 3000, 5);
  Csr c = a.to_csr();
  std::mt19937_64 rng(9);
  std::vector<double> x(300), ys(300), yp(300);
  for (auto& v : x) v = rng_unit(rng) - 0.5;
  csr_matvec_serial(c, x.data(), ys.data());
  csr_matvec(c, x.data(), yp.data());
  for (int i = 0; i < 300; ++i) CHECK(ys[i] == yp[i]);
}

TEST_CASE("save/load round-trips bit-exactly") {
  auto a = random_sym(60, 400, 23);
  auto path = temp_file("mogc_sparse_roundtrip.smat");
  save_sparse(path, a);
  auto b = load_sparse(path);
  CHECK(a == b);
  std::filesystem::remove(path);
}

TEST_CASE("load_sparse rejects malformed files") {
  auto path = temp_file("mogc_sparse_bad.smat");
  auto write = [&](const char* text) {
    FILE* f = std::fopen(path.c_str(), "w");
    std::fputs(text, f);
    std::fclose(f);
  };
  write("not a header\n");
  CHECK_THROWS_AS(load_sparse(path), ParseError);
  write("3 1\n2 1 5.0\n");  // lower-triangle entry
  CHECK_THROWS_AS(load_sparse(path), ParseError);
  write("3 2\n0 1 5.0\n");  // count mismatch
  CHECK_THROWS_AS(load_sparse(path), ParseError);
  CHECK_THROWS_AS(load_sparse(temp_file("mogc_does_not_exist.smat")), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("frobenius norm counts off-diagonal entries twice") {
  auto a = SparseSymMatrix::from_triplets(2, {{0, 1, 3.0}, {1, 1, 4.0}});
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(9.0 + 9.0 + 16.0)));
}

TEST_CASE("deterministic reductions are order-stable") {
  std::mt19937_64 rng(31);
  std::vector<double> xs(10000);
  for (auto& v : xs) v = (rng_unit(rng) - 0.5) * 1e6;
  double s1 = det_sum(xs);
  double s2 = det_sum(xs);
  CHECK(s1 == s2);
  CHECK(det_dot(xs, xs) == det_norm2(xs));
}
