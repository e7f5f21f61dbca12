#include "mogc/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace mogc {

MotifBundle MotifBundle::assemble(std::vector<MotifAdjacency> motifs) {
  if (motifs.empty()) throw InvalidArgument("bundle needs at least one motif");
  MotifBundle b;
  b.n = motifs.front().matrix.dim();
  for (const auto& ma : motifs) {
    if (ma.matrix.dim() != b.n || static_cast<int>(ma.active.size()) != b.n)
      throw InvalidArgument("bundle motifs disagree on the node count");
    for (const auto& other : motifs)
      if (&other != &ma && other.spec.name == ma.spec.name)
        throw InvalidArgument("duplicate motif name in bundle: " + ma.spec.name);
  }
  b.motifs = std::move(motifs);
  return b;
}

std::vector<std::uint8_t> MotifBundle::supported_nodes() const {
  std::vector<std::uint8_t> s(n, 0);
  for (const auto& ma : motifs)
    for (int i = 0; i < n; ++i) s[i] |= ma.active[i];
  return s;
}

WeightMatrix uniform_weights(const MotifBundle& bundle) {
  WeightMatrix w(bundle.n, bundle.m());
  for (int i = 0; i < bundle.n; ++i) {
    int c = 0;
    for (int j = 0; j < w.m; ++j) c += bundle.motifs[j].active[i];
    if (c == 0)
      throw InvalidArgument("node " + std::to_string(i) +
                            " is active in no motif; solve on the supported subgraph");
    for (int j = 0; j < w.m; ++j)
      if (bundle.motifs[j].active[i]) w.at(i, j) = 1.0 / c;
  }
  return w;
}

SparseSymMatrix fuse_adjacency(const MotifBundle& bundle, const WeightMatrix& w) {
  if (w.n != bundle.n || w.m != bundle.m())
    throw InvalidArgument("weight matrix does not match the bundle");
  std::vector<Triplet> ts;
  for (int j = 0; j < bundle.m(); ++j) {
    const auto& ma = bundle.motifs[j];
    for (const auto& t : ma.matrix.upper()) {
      double v = 0.5 * t.value *
                 (ma.active[t.row] * w.at(t.col, j) + w.at(t.row, j) * ma.active[t.col]);
      ts.push_back({t.row, t.col, v});
    }
  }
  return SparseSymMatrix::from_triplets(bundle.n, std::move(ts));
}

// ---------------------------------------------------------------------------
// FusedStructure

FusedStructure::FusedStructure(const MotifBundle& bundle) {
  n_ = bundle.n;
  m_ = bundle.m();
  for (const auto& ma : bundle.motifs) {
    names_.push_back(ma.spec.name);
    active_.push_back(ma.active);
    motif_csr_.push_back(ma.matrix.to_csr());
  }
  // Union sparsity of the full expansions, built row by row.
  std::vector<std::int64_t> row_start(n_ + 1, 0);
  std::vector<int> cols;
  for (int i = 0; i < n_; ++i) {
    row_start[i] = static_cast<std::int64_t>(union_col_.size());
    cols.clear();
    for (const auto& c : motif_csr_)
      for (std::int64_t e = c.ptr[i]; e < c.ptr[i + 1]; ++e) cols.push_back(c.col[e]);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int c : cols) {
      union_row_.push_back(i);
      union_col_.push_back(c);
    }
  }
  row_start[n_] = static_cast<std::int64_t>(union_col_.size());
  union_val_.assign(union_col_.size(), 0.0);

  for (const auto& c : motif_csr_) {
    std::vector<std::int64_t> pos;
    std::vector<double> val;
    pos.reserve(c.col.size());
    val.reserve(c.col.size());
    for (int i = 0; i < n_; ++i) {
      auto lo = union_col_.begin() + row_start[i];
      auto hi = union_col_.begin() + row_start[i + 1];
      for (std::int64_t e = c.ptr[i]; e < c.ptr[i + 1]; ++e) {
        pos.push_back(std::lower_bound(lo, hi, c.col[e]) - union_col_.begin());
        val.push_back(c.val[e]);
      }
    }
    motif_pos_.push_back(std::move(pos));
    motif_val_.push_back(std::move(val));
  }

  // Laplacian pattern: union rows plus a diagonal slot.
  lap_.n = n_;
  lap_.ptr.assign(n_ + 1, 0);
  lap_pos_.resize(union_col_.size());
  diag_pos_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    bool placed = false;
    for (std::int64_t e = row_start[i]; e < row_start[i + 1]; ++e) {
      if (!placed && union_col_[e] > i) {
        diag_pos_[i] = static_cast<std::int64_t>(lap_.col.size());
        lap_.col.push_back(i);
        placed = true;
      }
      lap_pos_[e] = static_cast<std::int64_t>(lap_.col.size());
      lap_.col.push_back(union_col_[e]);
    }
    if (!placed) {
      diag_pos_[i] = static_cast<std::int64_t>(lap_.col.size());
      lap_.col.push_back(i);
    }
    lap_.ptr[i + 1] = static_cast<std::int64_t>(lap_.col.size());
  }
  lap_.val.assign(lap_.col.size(), 0.0);
  deg_.assign(n_, 0.0);
}

void FusedStructure::refresh(const WeightMatrix& w, double degree_ridge) {
  if (w.n != n_ || w.m != m_) throw InvalidArgument("weight matrix does not match the bundle");
  std::fill(union_val_.begin(), union_val_.end(), 0.0);
  for (int j = 0; j < m_; ++j) {
    const auto& act = active_[j];
    const auto& pos = motif_pos_[j];
    const auto& val = motif_val_[j];
    for (std::size_t e = 0; e < pos.size(); ++e) {
      int i = union_row_[pos[e]];
      int c = union_col_[pos[e]];
      union_val_[pos[e]] += 0.5 * val[e] * (act[i] * w.at(c, j) + w.at(i, j) * act[c]);
    }
  }
  std::fill(deg_.begin(), deg_.end(), 0.0);
  for (std::size_t e = 0; e < union_val_.size(); ++e) deg_[union_row_[e]] += union_val_[e];
  for (std::size_t e = 0; e < union_val_.size(); ++e) lap_.val[lap_pos_[e]] = -union_val_[e];
  for (int i = 0; i < n_; ++i) {
    lap_.val[diag_pos_[i]] = deg_[i];
    if (deg_[i] <= 0.0) deg_[i] = degree_ridge;
  }
}

SparseSymMatrix FusedStructure::fused() const {
  std::vector<Triplet> ts;
  for (std::size_t e = 0; e < union_val_.size(); ++e)
    if (union_row_[e] <= union_col_[e])
      ts.push_back({union_row_[e], union_col_[e], union_val_[e]});
  return SparseSymMatrix::from_triplets(n_, std::move(ts));
}

void FusedStructure::motif_matvec(int j, const double* x, double* y) const {
  csr_matvec(motif_csr_[j], x, y);
}

// ---------------------------------------------------------------------------

EigResult solve_u(const SparseSymMatrix& a_f, int k, double degree_ridge) {
  std::vector<double> d = row_sums(a_f);
  for (double& di : d)
    if (di <= 0.0) di = degree_ridge;
  return smallest_generalized_eigenpairs(laplacian(a_f), d, k);
}

LambdaProblem build_lambda_problem(const FusedStructure& fs, const Embedding& u) {
  if (u.n != fs.n()) throw InvalidArgument("embedding does not match the bundle");
  const int n = fs.n(), m = fs.m(), k = u.k;
  LambdaProblem prob;
  prob.n = n;
  prob.m = m;
  prob.k = k;
  prob.v.assign(static_cast<std::size_t>(n) * m, 0.0);
  prob.p.assign(k, std::vector<double>(static_cast<std::size_t>(n) * m, 0.0));
  prob.free_mask.resize(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) prob.free_mask[static_cast<std::size_t>(j) * n + i] = fs.active(j)[i];

  // Per-motif masked row sums (A_j w_j), shared across embedding columns.
  std::vector<std::vector<double>> aw(m, std::vector<double>(n));
  std::vector<double> tmp(n);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) tmp[i] = fs.active(j)[i];
    fs.motif_matvec(j, tmp.data(), aw[j].data());
  }

  std::vector<double> u2(n), wu(n), au(n), wu2(n), au2(n);
  for (int c = 0; c < k; ++c) {
    const double* uc = u.col(c);
    for (int i = 0; i < n; ++i) u2[i] = uc[i] * uc[i];
    for (int j = 0; j < m; ++j) {
      const auto act = fs.active(j);
      for (int i = 0; i < n; ++i) {
        wu[i] = act[i] ? uc[i] : 0.0;
        wu2[i] = act[i] ? u2[i] : 0.0;
      }
      fs.motif_matvec(j, wu.data(), au.data());
      fs.motif_matvec(j, wu2.data(), au2.data());
      std::size_t base = static_cast<std::size_t>(j) * n;
      for (int i = 0; i < n; ++i) {
        double pk = 0.5 * (u2[i] * aw[j][i] + au2[i]);
        prob.p[c][base + i] = pk;
        prob.v[base + i] += pk - uc[i] * au[i];
      }
    }
  }
  return prob;
}

LambdaProblem build_lambda_problem(const MotifBundle& bundle, const Embedding& u) {
  FusedStructure fs(bundle);
  return build_lambda_problem(fs, u);
}

// ---------------------------------------------------------------------------
// Weight subproblem

namespace {

// Stationarity system for the equality-constrained problem restricted to an
// active variable set: eliminates the per-node multipliers through the
// (diagonal) node block and solves the dense coupling Schur complement.
struct EqSolve {
  std::vector<double> phi1;  // n
  Eigen::VectorXd phi2;      // k
  bool least_squares = false;
};

EqSolve solve_equality(const LambdaProblem& prob, const std::vector<std::uint8_t>& active,
                       double alpha, std::vector<double>& x) {
  const int n = prob.n, m = prob.m, k = prob.k;
  const std::size_t nm = static_cast<std::size_t>(n) * m;
  std::vector<int> cnt(n, 0);
  for (std::size_t v = 0; v < nm; ++v)
    if (active[v]) cnt[v % n]++;

  std::vector<double> r1(n, 2.0 * alpha);
  Eigen::VectorXd r2 = Eigen::VectorXd::Constant(k, 2.0 * alpha);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, n);
  Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t v = 0; v < nm; ++v) {
    if (!active[v]) continue;
    int i = static_cast<int>(v % n);
    r1[i] += prob.v[v];
    for (int a = 0; a < k; ++a) {
      double pa = prob.p[a][v];
      r2(a) += pa * prob.v[v];
      g(a, i) += pa;
      for (int b = a; b < k; ++b) pp(a, b) += pa * prob.p[b][v];
    }
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < a; ++b) pp(a, b) = pp(b, a);

  Eigen::MatrixXd s2 = pp;
  Eigen::VectorXd rhs2 = r2;
  for (int i = 0; i < n; ++i) {
    if (cnt[i] == 0) continue;
    double inv = 1.0 / cnt[i];
    rhs2 -= g.col(i) * (inv * r1[i]);
    s2 -= g.col(i) * (inv * g.col(i).transpose());
  }

  EqSolve out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s2);
  out.phi2 = ldlt.solve(rhs2);
  double resid = (s2 * out.phi2 - rhs2).norm();
  if (!(resid <= 1e-8 * (rhs2.norm() + 1.0))) {
    // Coupling rows are dependent (e.g. duplicated motifs): take the
    // minimum-norm multipliers instead.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(s2);
    out.phi2 = cod.solve(rhs2);
    out.least_squares = true;
  }
  out.phi1.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (cnt[i] > 0) out.phi1[i] = (r1[i] - g.col(i).dot(out.phi2)) / cnt[i];

  x.assign(nm, 0.0);
  for (std::size_t v = 0; v < nm; ++v) {
    if (!active[v]) continue;
    int i = static_cast<int>(v % n);
    double pphi = 0.0;
    for (int a = 0; a < k; ++a) pphi += prob.p[a][v] * out.phi2(a);
    x[v] = (out.phi1[i] + pphi - prob.v[v]) / (2.0 * alpha);
  }
  return out;
}

}  // namespace

LambdaSolution solve_lambda(const LambdaProblem& prob, double alpha, bool refine) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  const int n = prob.n, m = prob.m, k = prob.k;
  const std::size_t nm = static_cast<std::size_t>(n) * m;
  if (prob.v.size() != nm || prob.free_mask.size() != nm ||
      static_cast<int>(prob.p.size()) != k)
    throw InvalidArgument("inconsistent lambda problem");

  LambdaSolution sol;
  sol.lambda = WeightMatrix(n, m);
  sol.lambda_raw = WeightMatrix(n, m);

  std::vector<int> free_cnt(n, 0);
  for (std::size_t v = 0; v < nm; ++v)
    if (prob.free_mask[v]) free_cnt[v % n]++;
  for (int i = 0; i < n; ++i)
    if (free_cnt[i] == 0)
      throw InvalidArgument("node " + std::to_string(i) +
                            " is active in no motif; solve on the supported subgraph");

  std::vector<double> x(nm, 0.0);
  std::vector<std::uint8_t> active(prob.free_mask.begin(), prob.free_mask.end());
  bool degenerate = *std::max_element(free_cnt.begin(), free_cnt.end()) == 1;
  if (degenerate) {
    // One variable per node: the row constraints pin everything at 1.
    for (std::size_t v = 0; v < nm; ++v) x[v] = active[v] ? 1.0 : 0.0;
  } else {
    double vmax = 0.0;
    for (std::size_t v = 0; v < nm; ++v) vmax = std::max(vmax, std::abs(prob.v[v]));
    const double dual_tol = 1e-12 * std::max({1.0, vmax, 2.0 * alpha});
    EqSolve eq;
    for (int release = 0;; ++release) {
      for (;;) {
        eq = solve_equality(prob, active, alpha, x);
        sol.info.used_least_squares |= eq.least_squares;
        if (!refine || sol.info.shrink_rounds >= 60) break;
        // Eliminate negative variables, but never empty a node's row.
        std::vector<std::size_t> drop;
        std::vector<int> node_active(n, 0), node_drop(n, 0);
        std::vector<std::size_t> node_best(n, nm);
        for (std::size_t v = 0; v < nm; ++v)
          if (active[v]) {
            int i = static_cast<int>(v % n);
            node_active[i]++;
            if (x[v] < 0.0) {
              drop.push_back(v);
              node_drop[i]++;
              if (node_best[i] == nm || x[v] > x[node_best[i]]) node_best[i] = v;
            }
          }
        std::size_t dropped = 0;
        for (std::size_t v : drop) {
          int i = static_cast<int>(v % n);
          if (node_drop[i] == node_active[i] && v == node_best[i]) continue;
          active[v] = 0;
          ++dropped;
        }
        if (dropped == 0) break;
        ++sol.info.shrink_rounds;
      }
      if (!refine || release >= 6) break;
      // Dual feasibility of eliminated variables; violators come back.
      int back = 0;
      for (std::size_t v = 0; v < nm; ++v) {
        if (!prob.free_mask[v] || active[v]) continue;
        int i = static_cast<int>(v % n);
        double pphi = 0.0;
        for (int a = 0; a < k; ++a) pphi += prob.p[a][v] * eq.phi2(a);
        double mu = prob.v[v] - eq.phi1[i] - pphi;
        if (mu < -dual_tol) {
          active[v] = 1;
          ++back;
        }
      }
      if (back == 0) break;
      sol.info.released += back;
    }
  }

  for (std::size_t v = 0; v < nm; ++v)
    if (x[v] < 0.0) x[v] = 0.0;
  for (std::size_t v = 0; v < nm; ++v)
    if (prob.free_mask[v] && x[v] == 0.0) sol.info.clipped++;

  for (int a = 0; a < k; ++a) {
    double s = det_dot(prob.p[a], x);
    sol.info.coupling_residual = std::max(sol.info.coupling_residual, std::abs(s - 1.0));
  }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) sol.lambda_raw.at(i, j) = x[static_cast<std::size_t>(j) * n + i];
  for (int i = 0; i < n; ++i) {
    double rs = 0.0;
    for (int j = 0; j < m; ++j) rs += sol.lambda_raw.at(i, j);
    sol.info.renorm_delta = std::max(sol.info.renorm_delta, std::abs(rs - 1.0));
    if (rs > 0.0) {
      for (int j = 0; j < m; ++j) sol.lambda.at(i, j) = sol.lambda_raw.at(i, j) / rs;
    } else {
      // Whole row clipped away (extreme alpha): restart it uniform.
      for (int j = 0; j < m; ++j)
        if (prob.free_mask[static_cast<std::size_t>(j) * n + i])
          sol.lambda.at(i, j) = 1.0 / free_cnt[i];
    }
  }
  return sol;
}

double objective(const MotifBundle& bundle, const WeightMatrix& w, const Embedding& u,
                 double alpha) {
  Csr lap = laplacian(fuse_adjacency(bundle, w)).to_csr();
  std::vector<double> tmp(u.n);
  double tr = 0.0;
  for (int c = 0; c < u.k; ++c) {
    csr_matvec(lap, u.col(c), tmp.data());
    tr += det_dot({u.col(c), static_cast<std::size_t>(u.n)}, tmp);
  }
  return tr + alpha * det_norm2(w.w);
}

// ---------------------------------------------------------------------------

SolverState mogc_cluster(FusedStructure& fs, const MOGCConfig& cfg) {
  const int n = fs.n(), m = fs.m();
  if (!(cfg.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (cfg.k < 2 || cfg.k > n) throw InvalidArgument("cluster count out of range");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be positive");

  WeightMatrix lam(n, m);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < m; ++j) c += fs.active(j)[i];
    if (c == 0)
      throw InvalidArgument("node " + std::to_string(i) +
                            " is active in no motif; solve on the supported subgraph");
    for (int j = 0; j < m; ++j)
      if (fs.active(j)[i]) lam.at(i, j) = 1.0 / c;
  }

  SolverState st;
  Embedding prev_u;
  std::vector<double> tmp(n);
  for (int t = 1; t <= cfg.max_iter; ++t) {
    fs.refresh(lam, cfg.degree_ridge);
    EigOptions opt;
    opt.warm = prev_u.n == n ? &prev_u : nullptr;
    EigResult eig = smallest_generalized_eigenpairs(fs.lap(), fs.degrees(), cfg.k, opt);
    Embedding u = std::move(eig.u);
    if (prev_u.n == n)  // keep orientations comparable across iterations
      for (int c = 0; c < cfg.k; ++c) {
        if (det_dot({u.col(c), static_cast<std::size_t>(n)},
                    {prev_u.col(c), static_cast<std::size_t>(n)}) < 0.0)
          for (int i = 0; i < n; ++i) u.at(i, c) = -u.at(i, c);
      }

    double trace = 0.0;
    for (int c = 0; c < cfg.k; ++c) {
      csr_matvec(fs.lap(), u.col(c), tmp.data());
      trace += det_dot({u.col(c), static_cast<std::size_t>(n)}, tmp);
    }
    st.objective_history.push_back(trace + cfg.alpha * det_norm2(lam.w));

    LambdaProblem prob = build_lambda_problem(fs, u);
    double vdot = 0.0;  // v is stacked column-major: variable j*n+i
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) vdot += prob.v[static_cast<std::size_t>(j) * n + i] * lam.at(i, j);
    double rel = std::abs(vdot - trace) / std::max({1.0, std::abs(vdot), std::abs(trace)});
    st.trace_identity_max_rel_err = std::max(st.trace_identity_max_rel_err, rel);

    LambdaSolution sol = solve_lambda(prob, cfg.alpha, cfg.refine_lambda);
    double vraw = 0.0;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        vraw += prob.v[static_cast<std::size_t>(j) * n + i] * sol.lambda_raw.at(i, j);
    st.objective_history.push_back(vraw + cfg.alpha * det_norm2(sol.lambda_raw.w));

    double dl = 0.0;
    for (std::size_t v = 0; v < lam.w.size(); ++v) {
      double d = sol.lambda.w[v] - lam.w[v];
      dl += d * d;
    }
    double du = std::numeric_limits<double>::infinity();
    if (prev_u.n == n) {
      du = 0.0;
      for (std::size_t v = 0; v < u.data.size(); ++v) {
        double d = u.data[v] - prev_u.data[v];
        du += d * d;
      }
    }

    lam = std::move(sol.lambda);
    prev_u = std::move(u);
    st.eigenvalues = std::move(eig.eigenvalues);
    st.last_lambda_info = sol.info;
    st.iterations = t;
    st.final_delta_u = du;
    st.final_delta_lambda = dl;
    if (std::max(du, dl) <= cfg.tol) {
      st.converged = true;
      break;
    }
  }
  st.u = std::move(prev_u);
  st.lambda = std::move(lam);
  KmeansResult km = kmeans(st.u, cfg.k, cfg.seed, cfg.kmeans_restarts,
                           cfg.row_normalize_embedding);
  st.labels = std::move(km.labels);
  st.kmeans_wcss = km.wcss;
  return st;
}

SolverState mogc_cluster(const MotifBundle& bundle, const MOGCConfig& cfg) {
  FusedStructure fs(bundle);
  return mogc_cluster(fs, cfg);
}

}  // namespace mogc
