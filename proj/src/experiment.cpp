#include "mogc/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

namespace mogc {

using json = nlohmann::ordered_json;

namespace {

double now_sec() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : det_sum(v) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

SparseSymMatrix restrict_matrix(const SparseSymMatrix& m, const std::vector<int>& old2new,
                                int nsub) {
  std::vector<Triplet> ts;
  for (const auto& t : m.upper()) {
    int a = old2new[t.row], b = old2new[t.col];
    if (a >= 0 && b >= 0) ts.push_back({a, b, t.value});
  }
  return SparseSymMatrix::from_triplets(nsub, std::move(ts));
}

int largest_cluster(const std::vector<int>& labels, int k) {
  std::vector<int> size(k, 0);
  for (int l : labels)
    if (l >= 0 && l < k) size[l]++;
  return static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
}

}  // namespace

LoadedDataset load_dataset(const ExperimentConfig& cfg) {
  LoadedDataset ds;
  if (cfg.format == "edgelist") {
    ds.graph = load_edge_list(cfg.graph_path);
  } else if (cfg.format == "gml") {
    GmlData gd = load_gml(cfg.graph_path, cfg.label_key);
    ds.graph = std::move(gd.graph);
    ds.labels = std::move(gd.labels);
  } else {
    throw InvalidArgument("unknown graph format '" + cfg.format + "'");
  }
  if (!cfg.labels_path.empty()) ds.labels = load_labels(cfg.labels_path, ds.graph);
  if (ds.labels.labels.empty()) ds.labels.labels.assign(ds.graph.n, -1);

  if (cfg.largest_component) {
    std::vector<int> keep = largest_component(ds.graph);
    Graph sub = induced_subgraph(ds.graph, keep);
    LabelVector lv;
    lv.k = ds.labels.k;
    lv.names = ds.labels.names;
    lv.labels.reserve(keep.size());
    for (int old : keep) lv.labels.push_back(ds.labels.labels[old]);
    ds.graph = std::move(sub);
    ds.labels = std::move(lv);
  }
  return ds;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& keep) {
  Graph sub;
  std::vector<int> old2new(g.n, -1);
  for (int idx = 0; idx < static_cast<int>(keep.size()); ++idx) {
    int old = keep[idx];
    if (old < 0 || old >= g.n || old2new[old] >= 0)
      throw InvalidArgument("bad node list for induced subgraph");
    old2new[old] = idx;
    sub.original_ids.push_back(g.original_ids[old]);
    sub.id_of.emplace(g.original_ids[old], idx);
  }
  sub.n = static_cast<int>(keep.size());
  for (const auto& e : g.edges) {
    int u = old2new[e.u], v = old2new[e.v];
    if (u >= 0 && v >= 0) sub.edges.push_back({std::min(u, v), std::max(u, v), e.w});
  }
  std::sort(sub.edges.begin(), sub.edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  sub.raw_edge_records = g.raw_edge_records;  // file-level stat, kept as loaded
  sub.self_loops_dropped = g.self_loops_dropped;
  sub.duplicates_collapsed = g.duplicates_collapsed;
  return sub;
}

std::vector<int> largest_component(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> comp(g.n, -1);
  int ncomp = 0;
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = ncomp;
    stack.assign(1, s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (comp[u] < 0) {
          comp[u] = ncomp;
          stack.push_back(u);
        }
    }
    ++ncomp;
  }
  std::vector<int> size(ncomp, 0);
  for (int c : comp) size[c]++;
  int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<int> keep;
  for (int v = 0; v < g.n; ++v)
    if (comp[v] == best) keep.push_back(v);
  return keep;
}

std::uint64_t graph_fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  std::int64_t n = g.n;
  mix(&n, sizeof n);
  for (const auto& e : g.edges) {
    mix(&e.u, sizeof e.u);
    mix(&e.v, sizeof e.v);
    mix(&e.w, sizeof e.w);
  }
  return h;
}

std::vector<MotifSpec> resolve_motifs(const std::vector<std::string>& names,
                                      const std::string& defs_path) {
  std::unordered_map<std::string, MotifSpec> known;
  for (const auto& s : motif_catalog()) known.emplace(s.name, s);
  if (!defs_path.empty()) {
    std::ifstream in(defs_path);
    if (!in) throw ParseError("cannot open: " + defs_path);
    json defs;
    try {
      in >> defs;
    } catch (const json::exception& e) {
      throw ParseError(defs_path + ": " + e.what());
    }
    if (!defs.is_array()) throw ParseError(defs_path + ": expected a JSON array");
    for (const auto& d : defs) {
      try {
        std::string name = d.at("name").get<std::string>();
        int p = d.at("p").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : d.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        std::vector<int> anchors;
        if (d.contains("anchors"))
          for (const auto& a : d["anchors"]) anchors.push_back(a.get<int>());
        else
          for (int i = 0; i < p; ++i) anchors.push_back(i);
        known[name] = make_motif(name, p, std::move(edges), std::move(anchors));
      } catch (const json::exception& e) {
        throw ParseError(defs_path + ": bad motif entry: " + e.what());
      }
    }
  }
  std::vector<MotifSpec> out;
  for (const auto& nm : names) {
    auto it = known.find(nm);
    if (it == known.end()) throw InvalidArgument("unknown motif '" + nm + "'");
    out.push_back(it->second);
  }
  return out;
}

MotifAdjacency cached_motif(const Graph& g, const MotifSpec& spec, const std::string& cache_dir,
                            std::size_t max_instances) {
  EnumLimits limits{max_instances};
  if (cache_dir.empty()) return build_motif_adjacency(g, spec, limits);

  std::filesystem::create_directories(cache_dir);
  char key[32];
  std::snprintf(key, sizeof key, "%016llx",
                static_cast<unsigned long long>(graph_fingerprint(g)));
  std::filesystem::path base = std::filesystem::path(cache_dir) / (std::string(key) + "_" + spec.name);
  std::filesystem::path mat_path = base;
  mat_path += ".smat";
  std::filesystem::path meta_path = base;
  meta_path += ".json";

  if (std::filesystem::exists(mat_path) && std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    json meta;
    if (in && (in >> meta, true) && meta.value("n", -1) == g.n &&
        meta.value("motif", "") == spec.name) {
      MotifAdjacency ma;
      ma.spec = spec;
      ma.matrix = load_sparse(mat_path);
      ma.active.assign(g.n, 0);
      for (const auto& t : ma.matrix.upper()) {
        ma.active[t.row] = 1;
        ma.active[t.col] = 1;
      }
      ma.instance_count = meta.value("instances", std::size_t{0});
      return ma;
    }
  }
  MotifAdjacency ma = build_motif_adjacency(g, spec, limits);
  save_sparse(mat_path, ma.matrix);
  json meta;
  meta["fingerprint"] = std::string(key);
  meta["motif"] = spec.name;
  meta["n"] = g.n;
  meta["instances"] = ma.instance_count;
  std::ofstream out(meta_path);
  out << meta.dump(2) << "\n";
  return ma;
}

PreparedProblem prepare_problem(const ExperimentConfig& cfg, const Graph& g) {
  PreparedProblem pp;
  pp.n_full = g.n;
  auto specs = resolve_motifs(cfg.motifs, cfg.motif_defs_path);
  std::vector<MotifAdjacency> mas;
  for (const auto& spec : specs) {
    mas.push_back(cached_motif(g, spec, cfg.cache_dir, cfg.max_instances));
    pp.motif_names.push_back(spec.name);
    pp.instance_counts.push_back(mas.back().instance_count);
  }
  MotifBundle bundle = MotifBundle::assemble(std::move(mas));

  pp.supported = bundle.supported_nodes();
  for (int i = 0; i < bundle.n; ++i)
    if (pp.supported[i]) pp.keep.push_back(i);
  if (pp.keep.empty()) throw InvalidArgument("no node is active in any requested motif");

  if (pp.keep.size() == static_cast<std::size_t>(bundle.n)) {
    pp.bundle = std::move(bundle);
    return pp;
  }
  std::vector<int> old2new(bundle.n, -1);
  for (std::size_t s = 0; s < pp.keep.size(); ++s) old2new[pp.keep[s]] = static_cast<int>(s);
  std::vector<MotifAdjacency> rs;
  for (const auto& ma : bundle.motifs) {
    MotifAdjacency r;
    r.spec = ma.spec;
    r.matrix = restrict_matrix(ma.matrix, old2new, static_cast<int>(pp.keep.size()));
    r.active.assign(pp.keep.size(), 0);
    for (std::size_t s = 0; s < pp.keep.size(); ++s) r.active[s] = ma.active[pp.keep[s]];
    r.instance_count = ma.instance_count;
    rs.push_back(std::move(r));
  }
  pp.bundle = MotifBundle::assemble(std::move(rs));
  return pp;
}

namespace {

struct EvalContext {
  const LabelVector* truth;
  std::string scope;                       // all | supported
  const std::vector<std::uint8_t>* supported;  // full-length mask, may be null
  bool has_truth = false;

  TrialResult score(const std::vector<int>& pred) const {
    TrialResult t;
    if (!has_truth) {
      t.ari = t.ri = t.nmi = std::nan("");
      return t;
    }
    std::vector<int> gt = truth->labels;
    if (scope == "supported" && supported)
      for (std::size_t i = 0; i < gt.size(); ++i)
        if (!(*supported)[i]) gt[i] = -1;
    t.ari = adjusted_rand_index(pred, gt);
    t.ri = rand_index(pred, gt);
    t.nmi = normalized_mutual_information(pred, gt);
    return t;
  }
};

void finalize_alpha(AlphaResult& ar) {
  std::vector<double> a, r, n;
  for (const auto& t : ar.trials) {
    if (std::isnan(t.ari)) return;  // unlabeled run: keep NaNs
    a.push_back(t.ari);
    r.push_back(t.ri);
    n.push_back(t.nmi);
  }
  ar.mean_ari = mean_of(a);
  ar.std_ari = std_of(a);
  ar.mean_ri = mean_of(r);
  ar.std_ri = std_of(r);
  ar.mean_nmi = mean_of(n);
  ar.std_nmi = std_of(n);
}

// Map sub-problem labels back to the full node set; nodes outside the
// sub-problem join the largest predicted cluster.
std::vector<int> lift_labels(const std::vector<int>& sub_labels, const std::vector<int>& keep,
                             int n_full, int k) {
  std::vector<int> full(n_full, -1);
  for (std::size_t s = 0; s < keep.size(); ++s) full[keep[s]] = sub_labels[s];
  if (keep.size() < static_cast<std::size_t>(n_full)) {
    int big = largest_cluster(sub_labels, k);
    for (int i = 0; i < n_full; ++i)
      if (full[i] < 0) full[i] = big;
  }
  return full;
}

void run_mogc(const ExperimentConfig& cfg, const LoadedDataset& ds, RunReport& rep) {
  PreparedProblem pp = prepare_problem(cfg, ds.graph);
  rep.motif_names = pp.motif_names;
  rep.instance_counts = pp.instance_counts;
  rep.unsupported_nodes = pp.n_full - static_cast<int>(pp.keep.size());
  const std::vector<int>& keep = pp.keep;
  FusedStructure fs(pp.bundle);

  EvalContext ev{&ds.labels, cfg.eval_scope, &pp.supported, ds.labels.k > 0};
  std::vector<std::vector<int>> trial0_labels;
  for (double alpha : cfg.alphas) {
    MOGCConfig mc;
    mc.alpha = alpha;
    mc.k = rep.k_used;
    mc.tol = cfg.tol;
    mc.max_iter = cfg.max_iter;
    mc.seed = cfg.seed;
    mc.kmeans_restarts = cfg.kmeans_restarts;
    mc.row_normalize_embedding = cfg.row_normalize_embedding;
    mc.refine_lambda = cfg.refine_lambda;

    double t0 = now_sec();
    SolverState state = mogc_cluster(fs, mc);
    AlphaResult ar;
    ar.alpha = alpha;
    ar.solve_sec = now_sec() - t0;
    ar.iterations = state.iterations;
    ar.converged = state.converged;
    ar.objective_history = state.objective_history;
    ar.trace_identity_err = state.trace_identity_max_rel_err;
    ar.lambda_col_means.assign(fs.m(), 0.0);
    for (int j = 0; j < fs.m(); ++j) {
      double s = 0.0;
      for (int i = 0; i < state.lambda.n; ++i) s += state.lambda.at(i, j);
      ar.lambda_col_means[j] = s / state.lambda.n;
    }

    for (int trial = 0; trial < cfg.trials; ++trial) {
      double tt = now_sec();
      std::vector<int> sub_labels;
      if (trial == 0) {
        sub_labels = state.labels;  // the solver already ran k-means at cfg.seed
      } else {
        KmeansResult km = kmeans(state.u, rep.k_used, cfg.seed + trial, cfg.kmeans_restarts,
                                 cfg.row_normalize_embedding);
        sub_labels = std::move(km.labels);
      }
      std::vector<int> full = lift_labels(sub_labels, keep, pp.n_full, rep.k_used);
      TrialResult tr = ev.score(full);
      tr.iterations = state.iterations;
      tr.converged = state.converged;
      tr.runtime_sec = now_sec() - tt;
      ar.trials.push_back(tr);
      if (trial == 0) trial0_labels.push_back(full);
    }
    finalize_alpha(ar);
    rep.alphas.push_back(std::move(ar));
  }

  if (ev.has_truth) {
    for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
      if (rep.best_by_ari < 0 || rep.alphas[i].mean_ari > rep.alphas[rep.best_by_ari].mean_ari)
        rep.best_by_ari = static_cast<int>(i);
      if (rep.best_by_nmi < 0 || rep.alphas[i].mean_nmi > rep.alphas[rep.best_by_nmi].mean_nmi)
        rep.best_by_nmi = static_cast<int>(i);
    }
  }
  rep.best_labels = trial0_labels[rep.best_by_ari < 0 ? 0 : rep.best_by_ari];
}

// Plain spectral clustering on an adjacency, shared by both baselines.
void run_spectral(const ExperimentConfig& cfg, const LoadedDataset& ds, RunReport& rep,
                  const SparseSymMatrix& adj, const std::vector<int>& keep,
                  const std::vector<std::uint8_t>& supported) {
  EvalContext ev{&ds.labels, cfg.eval_scope, &supported, ds.labels.k > 0};
  double t0 = now_sec();
  EigResult eig = solve_u(adj, rep.k_used);
  AlphaResult ar;
  ar.solve_sec = now_sec() - t0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    double tt = now_sec();
    KmeansResult km = kmeans(eig.u, rep.k_used, cfg.seed + trial, cfg.kmeans_restarts,
                             cfg.row_normalize_embedding);
    std::vector<int> full = lift_labels(km.labels, keep, ds.graph.n, rep.k_used);
    TrialResult tr = ev.score(full);
    tr.iterations = 1;
    tr.runtime_sec = now_sec() - tt;
    ar.trials.push_back(tr);
    if (trial == 0) rep.best_labels = full;
  }
  finalize_alpha(ar);
  rep.alphas.push_back(std::move(ar));
  if (ev.has_truth) rep.best_by_ari = rep.best_by_nmi = 0;
}

void run_sc(const ExperimentConfig& cfg, const LoadedDataset& ds, RunReport& rep) {
  std::vector<int> keep(ds.graph.n);
  for (int i = 0; i < ds.graph.n; ++i) keep[i] = i;
  std::vector<std::uint8_t> supported(ds.graph.n, 1);
  run_spectral(cfg, ds, rep, ds.graph.adjacency(), keep, supported);
}

void run_motif_sc(const ExperimentConfig& cfg, const LoadedDataset& ds, RunReport& rep) {
  if (cfg.motifs.size() != 1)
    throw InvalidArgument("motif_sc takes exactly one motif");
  auto specs = resolve_motifs(cfg.motifs, cfg.motif_defs_path);
  MotifAdjacency ma = cached_motif(ds.graph, specs[0], cfg.cache_dir, cfg.max_instances);
  rep.motif_names.push_back(specs[0].name);
  rep.instance_counts.push_back(ma.instance_count);

  std::vector<int> keep;
  for (int i = 0; i < ds.graph.n; ++i)
    if (ma.active[i]) keep.push_back(i);
  rep.unsupported_nodes = ds.graph.n - static_cast<int>(keep.size());
  if (keep.empty())
    throw InvalidArgument("motif '" + specs[0].name + "' occurs nowhere in this graph");

  std::vector<int> old2new(ds.graph.n, -1);
  for (std::size_t s = 0; s < keep.size(); ++s) old2new[keep[s]] = static_cast<int>(s);
  SparseSymMatrix sub = restrict_matrix(ma.matrix, old2new, static_cast<int>(keep.size()));
  run_spectral(cfg, ds, rep, sub, keep, ma.active);
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  LoadedDataset ds = load_dataset(cfg);
  RunReport rep;
  rep.config = cfg;
  rep.n = ds.graph.n;
  rep.edge_count = static_cast<int>(ds.graph.edges.size());
  rep.raw_edge_records = ds.graph.raw_edge_records;
  rep.k_true = ds.labels.k;
  rep.k_used = cfg.k > 0 ? cfg.k : ds.labels.k;
  if (rep.k_used < 2)
    throw InvalidArgument("no ground-truth labels found; pass an explicit cluster count");
  if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (cfg.alphas.empty()) throw InvalidArgument("alpha grid is empty");

  if (cfg.algo == "mogc")
    run_mogc(cfg, ds, rep);
  else if (cfg.algo == "sc")
    run_sc(cfg, ds, rep);
  else if (cfg.algo == "motif_sc")
    run_motif_sc(cfg, ds, rep);
  else
    throw InvalidArgument("unknown algorithm '" + cfg.algo + "'");
  return rep;
}

// ---------------------------------------------------------------------------
// Output writers

namespace {

json trial_json(const TrialResult& t) {
  json j;
  j["ari"] = t.ari;
  j["ri"] = t.ri;
  j["nmi"] = t.nmi;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["runtime_sec"] = t.runtime_sec;
  return j;
}

json alpha_json(const AlphaResult& a) {
  json j;
  j["alpha"] = a.alpha;
  j["mean"] = {{"ari", a.mean_ari}, {"ri", a.mean_ri}, {"nmi", a.mean_nmi}};
  j["std"] = {{"ari", a.std_ari}, {"ri", a.std_ri}, {"nmi", a.std_nmi}};
  j["iterations"] = a.iterations;
  j["converged"] = a.converged;
  j["solve_sec"] = a.solve_sec;
  if (!a.lambda_col_means.empty()) j["lambda_col_means"] = a.lambda_col_means;
  if (a.trace_identity_err > 0.0) j["trace_identity_err"] = a.trace_identity_err;
  j["objective_history"] = a.objective_history;
  j["trials"] = json::array();
  for (const auto& t : a.trials) j["trials"].push_back(trial_json(t));
  return j;
}

}  // namespace

void write_report_json(const RunReport& rep, const std::filesystem::path& path) {
  json j;
  j["config"] = {{"graph", rep.config.graph_path},
                 {"format", rep.config.format},
                 {"algo", rep.config.algo},
                 {"motifs", rep.config.motifs},
                 {"k", rep.k_used},
                 {"trials", rep.config.trials},
                 {"seed", rep.config.seed},
                 {"tol", rep.config.tol},
                 {"max_iter", rep.config.max_iter},
                 {"kmeans_restarts", rep.config.kmeans_restarts},
                 {"eval_scope", rep.config.eval_scope},
                 {"row_normalize_embedding", rep.config.row_normalize_embedding},
                 {"refine_lambda", rep.config.refine_lambda},
                 {"largest_component", rep.config.largest_component}};
  j["dataset"] = {{"n", rep.n},
                  {"edges", rep.edge_count},
                  {"raw_edge_records", rep.raw_edge_records},
                  {"k_true", rep.k_true}};
  if (!rep.motif_names.empty()) {
    j["motifs"] = json::array();
    for (std::size_t i = 0; i < rep.motif_names.size(); ++i)
      j["motifs"].push_back(
          {{"name", rep.motif_names[i]}, {"instances", rep.instance_counts[i]}});
  }
  j["unsupported_nodes"] = rep.unsupported_nodes;
  j["runs"] = json::array();
  for (const auto& a : rep.alphas) j["runs"].push_back(alpha_json(a));
  if (rep.best_by_ari >= 0) {
    j["best"] = {{"by_ari",
                  {{"alpha", rep.alphas[rep.best_by_ari].alpha},
                   {"mean_ari", rep.alphas[rep.best_by_ari].mean_ari}}},
                 {"by_nmi",
                  {{"alpha", rep.alphas[rep.best_by_nmi].alpha},
                   {"mean_nmi", rep.alphas[rep.best_by_nmi].mean_nmi}}}};
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write: " + path.string());
  out << j.dump(2) << "\n";
}

void write_sweep_csv(const RunReport& rep, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write: " + path.string());
  out << "alpha,mean_ari,std_ari,mean_ri,std_ri,mean_nmi,std_nmi,iterations,converged";
  for (const auto& nm : rep.motif_names) out << ",lambda_mean_" << nm;
  out << "\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.10g", x);
    out << buf;
  };
  for (const auto& a : rep.alphas) {
    put(a.alpha);
    out << ",";
    put(a.mean_ari);
    out << ",";
    put(a.std_ari);
    out << ",";
    put(a.mean_ri);
    out << ",";
    put(a.std_ri);
    out << ",";
    put(a.mean_nmi);
    out << ",";
    put(a.std_nmi);
    out << "," << a.iterations << "," << (a.converged ? 1 : 0);
    for (double m : a.lambda_col_means) {
      out << ",";
      put(m);
    }
    out << "\n";
  }
}

void write_labels(const Graph& g, const std::vector<int>& labels,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write: " + path.string());
  for (int i = 0; i < g.n; ++i) out << g.original_ids[i] << " " << labels[i] << "\n";
}

void write_weights_csv(const Graph& g, const std::vector<std::string>& motif_names,
                       const WeightMatrix& w, const std::vector<int>& rows,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write: " + path.string());
  out << "node_id";
  for (const auto& nm : motif_names) out << "," << nm;
  out << "\n";
  std::vector<int> row_of(g.n, -1);
  for (std::size_t s = 0; s < rows.size(); ++s) row_of[rows[s]] = static_cast<int>(s);
  char buf[64];
  for (int i = 0; i < g.n; ++i) {
    out << g.original_ids[i];
    for (int j = 0; j < w.m; ++j) {
      double x = row_of[i] >= 0 ? w.at(row_of[i], j) : 0.0;
      std::snprintf(buf, sizeof buf, "%.10g", x);
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace mogc
