#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mogc/kmeans.hpp"
#include "mogc/linalg.hpp"
#include "mogc/motif.hpp"

namespace mogc {

// Per-node weights over the bundled motifs, n x m row-major.  Rows sum to 1
// over the motifs where the node is active; entries on inactive motifs are 0.
struct WeightMatrix {
  int n = 0, m = 0;
  std::vector<double> w;

  WeightMatrix() = default;
  WeightMatrix(int n_, int m_) : n(n_), m(m_), w(static_cast<std::size_t>(n_) * m_, 0.0) {}
  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * m + j]; }
  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * m + j]; }
};

// Motif adjacencies over one node set, validated to share dimensions and
// carry distinct names.
struct MotifBundle {
  int n = 0;
  std::vector<MotifAdjacency> motifs;

  static MotifBundle assemble(std::vector<MotifAdjacency> motifs);
  int m() const { return static_cast<int>(motifs.size()); }
  // Nodes active in at least one motif; the solver requires all of them.
  std::vector<std::uint8_t> supported_nodes() const;
};

// Uniform row-stochastic start: 1/(number of motifs where the node is
// active), 0 elsewhere.  Throws if some node is active nowhere.
WeightMatrix uniform_weights(const MotifBundle& bundle);

// Weighted fusion of the bundled structures:
//   A_f = 1/2 sum_j (W_j A_j diag(L_j) + diag(L_j) A_j W_j)
// with W_j the per-motif activity mask and L_j the weight column.
SparseSymMatrix fuse_adjacency(const MotifBundle& bundle, const WeightMatrix& w);

// Precompiled fusion pattern: the union sparsity of all motif matrices plus
// the Laplacian diagonal, so an alternating sweep can refresh values in
// O(nnz) without re-sorting anything.  Also keeps per-motif CSR forms for
// the weight subproblem.
class FusedStructure {
 public:
  explicit FusedStructure(const MotifBundle& bundle);

  int n() const { return n_; }
  int m() const { return m_; }
  int motif_nnz() const { return static_cast<int>(union_row_.size()); }
  const std::string& motif_name(int j) const { return names_[j]; }
  std::span<const std::uint8_t> active(int j) const { return active_[j]; }

  // Recompute fused values, degrees and the Laplacian for a weight matrix.
  void refresh(const WeightMatrix& w, double degree_ridge);
  const Csr& lap() const { return lap_; }
  std::span<const double> degrees() const { return deg_; }
  SparseSymMatrix fused() const;  // snapshot of the current A_f

  void motif_matvec(int j, const double* x, double* y) const;  // y = A_j x

 private:
  int n_ = 0, m_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<std::uint8_t>> active_;
  std::vector<Csr> motif_csr_;
  // fused pattern (full symmetric expansion) and its row index per entry
  std::vector<int> union_row_, union_col_;
  std::vector<double> union_val_;
  // per motif: entry positions into the union pattern + values
  std::vector<std::vector<std::int64_t>> motif_pos_;
  std::vector<std::vector<double>> motif_val_;
  // Laplacian over the union pattern plus diagonal
  Csr lap_;
  std::vector<std::int64_t> lap_pos_;   // union entry -> lap slot
  std::vector<std::int64_t> diag_pos_;  // node -> lap slot
  std::vector<double> deg_;
};

// U-step: smallest k generalized eigenpairs of (laplacian(a_f), degree(a_f)),
// zero degrees ridged to keep the pencil definite.
EigResult solve_u(const SparseSymMatrix& a_f, int k, double degree_ridge = 1e-8);

// The weight subproblem in stacked form.  Variables are indexed j*n + i
// (column j of the weight matrix, node i).  For embedding column u_k,
//   p[k][j*n+i]  = 1/2 (u_i^2 (A_j w_j)_i + (A_j (w_j o u_k^2))_i)
//   v[j*n+i]     = sum_k (p[k][j*n+i] - u_i (A_j (w_j o u_k))_i)
// so that p_k . x = u_k^T D_f(x) u_k and v . x = tr(U^T L_f(x) U) for any
// stacked weight vector x — the identities the solver monitors.
struct LambdaProblem {
  int n = 0, m = 0, k = 0;
  std::vector<double> v;               // n*m
  std::vector<std::vector<double>> p;  // k rows of n*m
  std::vector<std::uint8_t> free_mask; // variable participates (node active)
};

LambdaProblem build_lambda_problem(const FusedStructure& fs, const Embedding& u);
LambdaProblem build_lambda_problem(const MotifBundle& bundle, const Embedding& u);

struct LambdaSolveInfo {
  int shrink_rounds = 0;   // active-set eliminations performed
  int released = 0;        // variables brought back by the dual check
  int clipped = 0;         // variables at zero in the returned point
  bool used_least_squares = false;
  double renorm_delta = 0.0;       // max |row sum - 1| before renormalization
  double coupling_residual = 0.0;  // max |p_k . x - 1| before renormalization
};

struct LambdaSolution {
  WeightMatrix lambda;      // rows renormalized to sum exactly 1
  WeightMatrix lambda_raw;  // the KKT point before renormalization
  LambdaSolveInfo info;
};

// Minimize v.x + alpha ||x||^2 subject to per-node row sums = 1, the k
// coupling constraints p_k . x = 1, and x >= 0.  Solved through the
// equality-constrained stationarity system with primal-dual active-set
// refinement of the nonnegativity constraints (`refine` off = single
// clip-and-renormalize pass).
LambdaSolution solve_lambda(const LambdaProblem& prob, double alpha, bool refine = true);

// tr(U^T L_f U) + alpha ||w||_F^2 for the fused structure of the bundle.
double objective(const MotifBundle& bundle, const WeightMatrix& w, const Embedding& u,
                 double alpha);

struct MOGCConfig {
  double alpha = 1.0;
  int k = 2;
  double tol = 1e-5;    // on max(||dU||_F^2, ||dLambda||_F^2)
  int max_iter = 100;
  std::uint64_t seed = 1;
  int kmeans_restarts = 10;
  double degree_ridge = 1e-8;
  bool row_normalize_embedding = false;
  bool refine_lambda = true;
};

struct SolverState {
  Embedding u;
  WeightMatrix lambda;
  std::vector<int> labels;
  std::vector<double> eigenvalues;
  // Two entries per iteration: the objective after the U-step (at the
  // previous weights) and after the weight step (at the pre-renormalization
  // KKT point).
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
  double final_delta_u = 0.0;
  double final_delta_lambda = 0.0;
  // Largest relative gap between v . x and the explicitly recomputed trace,
  // across all iterations.
  double trace_identity_max_rel_err = 0.0;
  LambdaSolveInfo last_lambda_info;
  double kmeans_wcss = 0.0;
};

// Alternating minimization: U-step eigensolve, weight-step QP, repeated
// until max(||U+ - U||_F^2, ||L+ - L||_F^2) <= tol or max_iter.  Everything
// except the final k-means labels is seed-independent; the whole run is
// bit-reproducible for a fixed config.
SolverState mogc_cluster(const MotifBundle& bundle, const MOGCConfig& cfg);
// Reuses a compiled structure (its value buffers are refreshed in place).
SolverState mogc_cluster(FusedStructure& fs, const MOGCConfig& cfg);

}  // namespace mogc
