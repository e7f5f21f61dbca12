#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

using namespace mogc;

namespace oracle {

std::vector<MotifInstance> enumerate_brute(const Graph& g, const MotifSpec& spec) {
  std::unordered_set<std::uint64_t> edge_set;
  for (const auto& e : g.edges)
    edge_set.insert((static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint32_t>(e.v));
  auto has_edge = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return edge_set.count((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)) >
           0;
  };
  auto spec_edge = [&](int s, int t) {
    if (s > t) std::swap(s, t);
    return (spec.mask >> pair_index(s, t, spec.p)) & 1;
  };

  int p = spec.p;
  std::vector<MotifInstance> out;
  std::vector<int> sub(p);
  std::vector<int> perm(p);

  // all p-subsets by odometer
  std::iota(sub.begin(), sub.end(), 0);
  if (g.n < p) return out;
  while (true) {
    std::set<std::uint8_t> masks;
    std::iota(perm.begin(), perm.end(), 0);
    do {  // perm[s] = position of slot s inside the sorted subset
      bool ok = true;
      for (int s = 0; s < p && ok; ++s)
        for (int t = s + 1; t < p && ok; ++t)
          if (spec_edge(s, t) != has_edge(sub[perm[s]], sub[perm[t]])) ok = false;
      if (ok) {
        std::uint8_t mask = 0;
        for (int a : spec.anchors) mask |= static_cast<std::uint8_t>(1u << perm[a]);
        masks.insert(mask);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto mask : masks) {
      MotifInstance mi;
      for (int s = 0; s < p; ++s) mi.nodes[s] = sub[s];
      mi.anchor_slots = mask;
      out.push_back(mi);
    }

    int pos = p - 1;
    while (pos >= 0 && sub[pos] == g.n - p + pos) --pos;
    if (pos < 0) break;
    ++sub[pos];
    for (int q = pos + 1; q < p; ++q) sub[q] = sub[q - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<double>> fuse_dense(const MotifBundle& b, const WeightMatrix& w) {
  std::vector<std::vector<double>> a(b.n, std::vector<double>(b.n, 0.0));
  for (int j = 0; j < b.m(); ++j) {
    const auto& ma = b.motifs[j];
    for (const auto& t : ma.matrix.upper()) {
      double act_i = ma.active[t.row] ? 1.0 : 0.0;
      double act_j = ma.active[t.col] ? 1.0 : 0.0;
      double v = 0.5 * t.value * (act_i * w.at(t.col, j) + w.at(t.row, j) * act_j);
      a[t.row][t.col] += v;
      if (t.row != t.col) a[t.col][t.row] += v;
    }
  }
  return a;
}

WeightMatrix lambda_projection(const LambdaProblem& prob, double alpha, int rounds, double tol) {
  std::vector<int> free_idx;
  for (int v = 0; v < prob.n * prob.m; ++v)
    if (prob.free_mask[v]) free_idx.push_back(v);
  int nf = static_cast<int>(free_idx.size());

  std::vector<std::vector<int>> node_vars(prob.n);
  for (int f = 0; f < nf; ++f) node_vars[free_idx[f] % prob.n].push_back(f);
  std::vector<int> node_rows;
  for (int i = 0; i < prob.n; ++i)
    if (!node_vars[i].empty()) node_rows.push_back(i);

  int rows = static_cast<int>(node_rows.size()) + prob.k;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, nf);
  for (std::size_t r = 0; r < node_rows.size(); ++r)
    for (int f : node_vars[node_rows[r]]) a(static_cast<int>(r), f) = 1.0;
  for (int c = 0; c < prob.k; ++c)
    for (int f = 0; f < nf; ++f)
      a(static_cast<int>(node_rows.size()) + c, f) = prob.p[c][free_idx[f]];
  Eigen::VectorXd b = Eigen::VectorXd::Ones(rows);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);

  auto proj_affine = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return z - cod.solve(a * z - b);
  };

  Eigen::VectorXd x(nf);
  for (int f = 0; f < nf; ++f) x[f] = -prob.v[free_idx[f]] / (2.0 * alpha);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(nf), qc = Eigen::VectorXd::Zero(nf);
  for (int r = 0; r < rounds; ++r) {
    Eigen::VectorXd y = proj_affine(x + pc);
    pc = x + pc - y;
    Eigen::VectorXd xn = (y + qc).cwiseMax(0.0);
    qc = y + qc - xn;
    double delta = (xn - x).lpNorm<Eigen::Infinity>();
    x = xn;
    if (delta < tol && r > 3) break;
  }

  WeightMatrix w(prob.n, prob.m);
  for (int f = 0; f < nf; ++f) w.at(free_idx[f] % prob.n, free_idx[f] / prob.n) = x[f];
  return w;
}

DenseEig dense_embedding(const SparseSymMatrix& a, int k, double ridge) {
  int n = a.dim();
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : a.upper()) {
    ad(t.row, t.col) += t.value;
    if (t.row != t.col) ad(t.col, t.row) += t.value;
  }
  Eigen::VectorXd deg = ad.rowwise().sum();
  Eigen::MatrixXd lap = Eigen::MatrixXd(deg.asDiagonal()) - ad;
  Eigen::VectorXd dmass = deg;
  for (int i = 0; i < n; ++i)
    if (dmass[i] <= 0.0) dmass[i] = ridge;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      lap, Eigen::MatrixXd(dmass.asDiagonal()));
  DenseEig out;
  out.u = Embedding(n, k);
  for (int c = 0; c < k; ++c) {
    out.eigenvalues.push_back(ges.eigenvalues()[c]);
    for (int i = 0; i < n; ++i) out.u.at(i, c) = ges.eigenvectors()(i, c);
  }
  return out;
}

double subspace_distance(const Embedding& u1, const Embedding& u2, const std::vector<double>& d) {
  int n = u1.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double p1 = 0.0, p2 = 0.0;
      for (int r = 0; r < u1.k; ++r) p1 += u1.at(i, r) * u1.at(j, r);
      for (int r = 0; r < u2.k; ++r) p2 += u2.at(i, r) * u2.at(j, r);
      double diff = (p1 - p2) * d[j];
      s += diff * diff;
    }
  return std::sqrt(s);
}

Graph sbm(int blocks, int per_block, double p_in, double p_out, std::uint64_t seed,
          std::vector<int>* truth) {
  int n = blocks * per_block;
  std::mt19937_64 rng(seed);
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double p = (u / per_block == v / per_block) ? p_in : p_out;
      if (rng_unit(rng) < p) g.edges.push_back({u, v, 1.0});
    }
  g.original_ids.resize(n);
  for (int i = 0; i < n; ++i) {
    g.original_ids[i] = i;
    g.id_of.emplace(i, i);
  }
  if (truth) {
    truth->resize(n);
    for (int i = 0; i < n; ++i) (*truth)[i] = i / per_block;
  }
  return g;
}

}  // namespace oracle
