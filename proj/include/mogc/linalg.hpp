#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mogc/sparse.hpp"

namespace mogc {

// n x k column-major embedding; column c holds one eigenvector / feature.
struct Embedding {
  int n = 0;
  int k = 0;
  std::vector<double> data;

  Embedding() = default;
  Embedding(int n_, int k_) : n(n_), k(k_), data(static_cast<std::size_t>(n_) * k_, 0.0) {}
  double* col(int c) { return data.data() + static_cast<std::size_t>(c) * n; }
  const double* col(int c) const { return data.data() + static_cast<std::size_t>(c) * n; }
  double& at(int i, int c) { return data[static_cast<std::size_t>(c) * n + i]; }
  double at(int i, int c) const { return data[static_cast<std::size_t>(c) * n + i]; }
};

std::vector<double> degree(const SparseSymMatrix& a);   // row sums
SparseSymMatrix laplacian(const SparseSymMatrix& a);    // diag(degree) - a

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Plain conjugate gradients on a matrix-free SPD operator.  apply(x, y)
// writes y = A x.  Stops at ||r|| <= tol * ||b||; callers decide whether a
// cap overrun is fatal.  Fully deterministic (fixed-order reductions).
CgResult conjugate_gradient(const std::function<void(const double*, double*)>& apply,
                            std::span<const double> b, double tol = 1e-12, int max_iter = 10000);

struct EigResult {
  Embedding u;                     // D-orthonormal: U^T diag(d) U = I
  std::vector<double> eigenvalues; // ascending
  bool used_dense_path = false;
  int restarts = 0;
};

struct EigOptions {
  double tol = 1e-9;
  // Optional warm start: restart r seeds from column r of this embedding
  // (converted to pencil coordinates) instead of a random vector.  Speeds up
  // the alternating solver, where consecutive U barely move.
  const Embedding* warm = nullptr;
};

// Smallest k eigenpairs of the pencil L u = lambda diag(d) u, for L a graph
// Laplacian and d positive.  Works on the symmetrized operator
// d^{-1/2} L d^{-1/2} with Lanczos + full reorthogonalization; repeated
// eigenvalues (disconnected graphs) are recovered by deflated restarts with
// fresh start vectors.  Small problems and Lanczos stagnation fall back to a
// dense solve (n <= 2000); beyond that stagnation throws SolverError.
// The returned pairs satisfy ||L U - diag(d) U diag(lambda)||_F within
// 1e-6 * max(||L||_F, 1) and ||U^T diag(d) U - I||_max <= 1e-8, enforced.
// The Csr overload takes the full symmetric expansion of L directly.
EigResult smallest_generalized_eigenpairs(const Csr& l, std::span<const double> d, int k,
                                          const EigOptions& opt = {});
EigResult smallest_generalized_eigenpairs(const SparseSymMatrix& l, std::span<const double> d,
                                          int k, double tol = 1e-9);

}  // namespace mogc
