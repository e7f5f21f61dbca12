#include "mogc/motif.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mogc {

MotifSpec make_motif(std::string name, int p, std::vector<std::pair<int, int>> edges,
                     std::vector<int> anchors) {
  if (p < 2 || p > 5) throw InvalidArgument("motif order must be between 2 and 5");
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= p || a == b) throw InvalidArgument("bad motif edge");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidArgument("duplicate motif edge");
  // connectivity
  std::vector<int> comp(p);
  std::iota(comp.begin(), comp.end(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : edges) {
      int m = std::min(comp[a], comp[b]);
      if (comp[a] != m || comp[b] != m) {
        comp[a] = comp[b] = m;
        changed = true;
      }
    }
  }
  for (int i = 0; i < p; ++i)
    if (comp[i] != 0) throw InvalidArgument("motif pattern must be connected");
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  if (anchors.size() < 2) throw InvalidArgument("motif needs at least two anchors");
  if (anchors.front() < 0 || anchors.back() >= p) throw InvalidArgument("anchor out of range");
  MotifSpec s;
  s.name = std::move(name);
  s.p = p;
  s.edges = std::move(edges);
  s.anchors = std::move(anchors);
  for (auto [a, b] : s.edges) s.mask |= std::uint16_t(1) << pair_index(a, b, p);
  return s;
}

const std::vector<MotifSpec>& motif_catalog() {
  static const std::vector<MotifSpec> cat = [] {
    std::vector<MotifSpec> v;
    v.push_back(make_motif("edge", 2, {{0, 1}}, {0, 1}));
    v.push_back(make_motif("m3_2", 3, {{0, 1}, {1, 2}}, {0, 1, 2}));
    v.push_back(make_motif("m3_3", 3, {{0, 1}, {0, 2}, {1, 2}}, {0, 1, 2}));
    v.push_back(make_motif("m4_1", 4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 2, 3}));
    v.push_back(make_motif("m4_2", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1, 2, 3}));
    v.push_back(make_motif("m5_1", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {0, 1, 2, 3, 4}));
    v.push_back(make_motif("m5_2", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {0, 1, 2, 3, 4}));
    v.push_back(make_motif("m5_3", 5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}}, {0, 1, 2, 3, 4}));
    return v;
  }();
  return cat;
}

MotifSpec motif_by_name(const std::string& name) {
  for (const auto& s : motif_catalog())
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : motif_catalog()) known += (known.empty() ? "" : ", ") + s.name;
  throw InvalidArgument("unknown motif '" + name + "' (known: " + known + ")");
}

namespace {

// Binary adjacency with sorted neighbor lists.
struct Adj {
  int n = 0;
  std::vector<std::int64_t> ptr;
  std::vector<int> nbr;

  std::span<const int> neighbors(int v) const {
    return {nbr.data() + ptr[v], static_cast<std::size_t>(ptr[v + 1] - ptr[v])};
  }
  bool has_edge(int u, int v) const {
    auto ns = neighbors(u);
    return std::binary_search(ns.begin(), ns.end(), v);
  }
};

Adj build_adj(const Graph& g) {
  Adj a;
  a.n = g.n;
  a.ptr.assign(g.n + 1, 0);
  for (const auto& e : g.edges) {
    a.ptr[e.u + 1]++;
    a.ptr[e.v + 1]++;
  }
  for (int i = 0; i < g.n; ++i) a.ptr[i + 1] += a.ptr[i];
  a.nbr.resize(a.ptr[g.n]);
  std::vector<std::int64_t> cur(a.ptr.begin(), a.ptr.end() - 1);
  for (const auto& e : g.edges) {
    a.nbr[cur[e.u]++] = e.v;
    a.nbr[cur[e.v]++] = e.u;
  }
  for (int i = 0; i < g.n; ++i) std::sort(a.nbr.begin() + a.ptr[i], a.nbr.begin() + a.ptr[i + 1]);
  return a;
}

// All permutation images of the pattern: induced-subgraph bitmask -> the
// distinct anchor slot masks it realizes.
using PatternTable = std::unordered_map<std::uint16_t, std::vector<std::uint8_t>>;

PatternTable build_pattern_table(const MotifSpec& spec) {
  PatternTable table;
  std::array<int, 5> perm{};
  std::iota(perm.begin(), perm.begin() + spec.p, 0);
  do {
    std::uint16_t pm = 0;
    for (auto [a, b] : spec.edges) {
      int i = perm[a], j = perm[b];
      if (i > j) std::swap(i, j);
      pm |= std::uint16_t(1) << pair_index(i, j, spec.p);
    }
    std::uint8_t am = 0;
    for (int a : spec.anchors) am |= std::uint8_t(1) << perm[a];
    auto& list = table[pm];
    if (std::find(list.begin(), list.end(), am) == list.end()) list.push_back(am);
  } while (std::next_permutation(perm.begin(), perm.begin() + spec.p));
  for (auto& [pm, list] : table) std::sort(list.begin(), list.end());
  return table;
}

// Per-thread state for the subset search.
struct EsuWorker {
  const Adj* adj = nullptr;
  const PatternTable* table = nullptr;
  int p = 0;
  std::vector<std::uint8_t> mark;  // in subset or adjacent to it
  std::vector<int> sub;
  std::vector<MotifInstance> out;
  std::size_t unflushed = 0;

  void record() {
    std::array<int, 5> nodes{-1, -1, -1, -1, -1};
    std::copy(sub.begin(), sub.end(), nodes.begin());
    std::sort(nodes.begin(), nodes.begin() + p);
    std::uint16_t m = 0;
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        if (adj->has_edge(nodes[a], nodes[b])) m |= std::uint16_t(1) << pair_index(a, b, p);
    auto it = table->find(m);
    if (it == table->end()) return;
    for (std::uint8_t am : it->second) {
      MotifInstance inst;
      inst.nodes = nodes;
      inst.anchor_slots = am;
      out.push_back(inst);
    }
    unflushed += it->second.size();
  }

  // Wernicke-style extension: candidates must be exclusive neighbors (not
  // adjacent to the current subset) with id above the root, so every
  // connected subset is generated exactly once.
  void extend(std::vector<int> ext, int root) {
    while (!ext.empty()) {
      int w = ext.back();
      ext.pop_back();
      sub.push_back(w);
      if (static_cast<int>(sub.size()) == p) {
        record();
      } else {
        std::vector<int> grown = ext;
        std::vector<int> newly;
        for (int u : adj->neighbors(w))
          if (u > root && !mark[u]) {
            mark[u] = 1;
            newly.push_back(u);
          }
        grown.insert(grown.end(), newly.begin(), newly.end());
        extend(std::move(grown), root);
        for (int u : newly) mark[u] = 0;
      }
      sub.pop_back();
    }
  }

  void run_root(int root) {
    mark[root] = 1;
    std::vector<int> ext;
    for (int u : adj->neighbors(root))
      if (u > root) {
        mark[u] = 1;
        ext.push_back(u);
      }
    sub.assign(1, root);
    if (p == 1) {
      record();
    } else {
      extend(std::move(ext), root);
    }
    mark[root] = 0;
    for (int u : adj->neighbors(root))
      if (u > root) mark[u] = 0;
    sub.clear();
  }
};

std::vector<MotifInstance> enumerate_impl(const Graph& g, const MotifSpec& spec,
                                          const EnumLimits& limits, bool parallel) {
  Adj adj = build_adj(g);
  PatternTable table = build_pattern_table(spec);

  int nthreads = 1;
#ifdef _OPENMP
  if (parallel) nthreads = omp_get_max_threads();
#else
  (void)parallel;
#endif
  std::vector<EsuWorker> workers(nthreads);
  for (auto& w : workers) {
    w.adj = &adj;
    w.table = &table;
    w.p = spec.p;
    w.mark.assign(g.n, 0);
  }
  std::atomic<std::size_t> total{0};
  std::atomic<bool> over{false};

#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (int root = 0; root < g.n; ++root) {
    if (over.load(std::memory_order_relaxed)) continue;
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    EsuWorker& w = workers[tid];
    w.run_root(root);
    if (w.unflushed >= 1024 || root == g.n - 1) {
      if (total.fetch_add(w.unflushed) + w.unflushed > limits.max_instances)
        over.store(true, std::memory_order_relaxed);
      w.unflushed = 0;
    }
  }
  std::size_t grand = 0;
  for (const auto& w : workers) grand += w.out.size();
  if (over.load() || grand > limits.max_instances)
    throw ResourceLimit("motif '" + spec.name + "' exceeds the instance cap (" +
                        std::to_string(limits.max_instances) + ")");

  std::vector<MotifInstance> all;
  all.reserve(grand);
  for (auto& w : workers) {
    all.insert(all.end(), w.out.begin(), w.out.end());
    w.out.clear();
  }
  std::sort(all.begin(), all.end());
  return all;
}

std::uint64_t pack_pair(int i, int j) {  // i < j
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j);
}

std::vector<std::uint8_t> active_from_matrix(const SparseSymMatrix& m) {
  std::vector<std::uint8_t> act(m.dim(), 0);
  for (const auto& t : m.upper()) {
    act[t.row] = 1;
    act[t.col] = 1;
  }
  return act;
}

SparseSymMatrix counts_from_pairs(int n, std::vector<std::uint64_t>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<Triplet> ts;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i + 1;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    ts.push_back({static_cast<int>(pairs[i] >> 32), static_cast<int>(pairs[i] & 0xffffffffu),
                  static_cast<double>(j - i)});
    i = j;
  }
  return SparseSymMatrix::from_triplets(n, std::move(ts));
}

MotifAdjacency build_edge_adjacency(const Graph& g, const MotifSpec& spec) {
  MotifAdjacency out;
  out.spec = spec;
  out.matrix = g.adjacency_binary();
  out.active = active_from_matrix(out.matrix);
  out.instance_count = g.edges.size();
  return out;
}

MotifAdjacency build_triangle_adjacency(const Graph& g, const MotifSpec& spec, bool parallel) {
  Adj adj = build_adj(g);
  std::vector<double> cnt(g.edges.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto nu = adj.neighbors(g.edges[e].u);
    auto nv = adj.neighbors(g.edges[e].v);
    std::size_t i = 0, j = 0, c = 0;
    while (i < nu.size() && j < nv.size()) {
      if (nu[i] < nv[j])
        ++i;
      else if (nu[i] > nv[j])
        ++j;
      else {
        ++c;
        ++i;
        ++j;
      }
    }
    cnt[e] = static_cast<double>(c);
  }
  std::vector<Triplet> ts;
  double total = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (cnt[e] != 0.0) ts.push_back({g.edges[e].u, g.edges[e].v, cnt[e]});
    total += cnt[e];
  }
  MotifAdjacency out;
  out.spec = spec;
  out.matrix = SparseSymMatrix::from_triplets(g.n, std::move(ts));
  out.active = active_from_matrix(out.matrix);
  // every pair count lists the triangle once per shared edge slot
  out.instance_count = static_cast<std::size_t>(total / 3.0 + 0.5);
  return out;
}

MotifAdjacency build_wedge_adjacency(const Graph& g, const MotifSpec& spec, bool parallel) {
  Adj adj = build_adj(g);
  int nthreads = 1;
#ifdef _OPENMP
  if (parallel) nthreads = omp_get_max_threads();
#endif
  std::vector<std::vector<std::uint64_t>> bufs(nthreads);
  std::vector<std::size_t> wedges(nthreads, 0);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (int c = 0; c < g.n; ++c) {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    auto ns = adj.neighbors(c);
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (std::size_t j = i + 1; j < ns.size(); ++j) {
        int a = ns[i], b = ns[j];
        if (adj.has_edge(a, b)) continue;  // induced: closed triples are not wedges
        ++wedges[tid];
        bufs[tid].push_back(pack_pair(a, b));
        bufs[tid].push_back(pack_pair(std::min(a, c), std::max(a, c)));
        bufs[tid].push_back(pack_pair(std::min(b, c), std::max(b, c)));
      }
  }
  std::vector<std::uint64_t> pairs;
  std::size_t total = 0;
  for (auto& b : bufs) total += b.size();
  pairs.reserve(total);
  for (auto& b : bufs) {
    pairs.insert(pairs.end(), b.begin(), b.end());
    b.clear();
    b.shrink_to_fit();
  }
  MotifAdjacency out;
  out.spec = spec;
  out.matrix = counts_from_pairs(g.n, pairs);
  out.active = active_from_matrix(out.matrix);
  for (std::size_t w : wedges) out.instance_count += w;
  return out;
}

MotifAdjacency build_impl(const Graph& g, const MotifSpec& spec, const EnumLimits& limits,
                          bool generic, bool parallel) {
  if (!generic) {
    bool all_anchors = static_cast<int>(spec.anchors.size()) == spec.p;
    if (spec.p == 2) return build_edge_adjacency(g, spec);
    if (spec.p == 3 && all_anchors && spec.edges.size() == 3)
      return build_triangle_adjacency(g, spec, parallel);
    if (spec.p == 3 && all_anchors && spec.edges.size() == 2)
      return build_wedge_adjacency(g, spec, parallel);
  }
  auto instances = enumerate_impl(g, spec, limits, parallel);
  return accumulate_motif_adjacency(g.n, instances, spec);
}

}  // namespace

std::vector<MotifInstance> enumerate_motif_instances(const Graph& g, const MotifSpec& spec,
                                                     const EnumLimits& limits) {
  return enumerate_impl(g, spec, limits, true);
}

std::vector<MotifInstance> enumerate_motif_instances_serial(const Graph& g, const MotifSpec& spec,
                                                            const EnumLimits& limits) {
  return enumerate_impl(g, spec, limits, false);
}

MotifAdjacency accumulate_motif_adjacency(int n, std::span<const MotifInstance> instances,
                                          const MotifSpec& spec) {
  std::vector<std::uint64_t> pairs;
  pairs.reserve(instances.size() * 3);
  for (const auto& inst : instances) {
    int slots[5];
    int na = 0;
    for (int s = 0; s < spec.p; ++s)
      if (inst.anchor_slots & (1 << s)) slots[na++] = s;
    for (int a = 0; a < na; ++a)
      for (int b = a + 1; b < na; ++b)
        pairs.push_back(pack_pair(inst.nodes[slots[a]], inst.nodes[slots[b]]));
  }
  MotifAdjacency out;
  out.spec = spec;
  out.matrix = counts_from_pairs(n, pairs);
  out.active = active_from_matrix(out.matrix);
  out.instance_count = instances.size();
  return out;
}

MotifAdjacency build_motif_adjacency(const Graph& g, const MotifSpec& spec,
                                     const EnumLimits& limits, bool generic) {
  return build_impl(g, spec, limits, generic, true);
}

MotifAdjacency build_motif_adjacency_serial(const Graph& g, const MotifSpec& spec,
                                            const EnumLimits& limits, bool generic) {
  return build_impl(g, spec, limits, generic, false);
}

}  // namespace mogc
