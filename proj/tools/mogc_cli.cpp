// Command-line front end: clustering runs, alpha sweeps, spectral baselines,
// motif cache management, weight dumps and label-file scoring.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "mogc/experiment.hpp"

using namespace mogc;

namespace {

double to_num(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
}

// Comma-separated values or lo:hi:step ranges, e.g. "0.1:3:0.1,4:20:1".
std::vector<double> parse_alpha_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string seg;
  while (std::getline(ss, seg, ',')) {
    if (seg.empty()) continue;
    auto c1 = seg.find(':');
    if (c1 == std::string::npos) {
      out.push_back(to_num(seg));
      continue;
    }
    auto c2 = seg.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw InvalidArgument("bad grid segment '" + seg + "' (want lo:hi:step)");
    double lo = to_num(seg.substr(0, c1));
    double hi = to_num(seg.substr(c1 + 1, c2 - c1 - 1));
    double step = to_num(seg.substr(c2 + 1));
    if (step <= 0 || hi < lo)
      throw InvalidArgument("bad grid segment '" + seg + "'");
    long nsteps = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= nsteps; ++i) out.push_back(lo + i * step);
  }
  if (out.empty()) throw InvalidArgument("alpha grid is empty");
  return out;
}

std::string fmt_metric(double mean, double sd) {
  if (std::isnan(mean)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f±%.4f", mean, sd);
  return buf;
}

void print_report(const RunReport& rep) {
  std::printf("dataset: n=%d edges=%d k=%d", rep.n, rep.edge_count, rep.k_used);
  if (rep.k_true > 0 && rep.k_true != rep.k_used) std::printf(" (ground truth has %d)", rep.k_true);
  std::printf("\n");
  for (std::size_t i = 0; i < rep.motif_names.size(); ++i)
    std::printf("motif %-6s: %zu instances\n", rep.motif_names[i].c_str(),
                rep.instance_counts[i]);
  if (rep.unsupported_nodes > 0)
    std::printf("nodes outside every motif: %d (attached to the largest cluster)\n",
                rep.unsupported_nodes);
  std::printf("%-8s %-16s %-16s %-16s %5s %4s %8s\n", "alpha", "ARI", "RI", "NMI", "iter",
              "conv", "sec");
  for (const auto& a : rep.alphas) {
    std::printf("%-8.4g %-16s %-16s %-16s %5d %4s %8.2f\n", a.alpha,
                fmt_metric(a.mean_ari, a.std_ari).c_str(),
                fmt_metric(a.mean_ri, a.std_ri).c_str(),
                fmt_metric(a.mean_nmi, a.std_nmi).c_str(), a.iterations,
                a.converged ? "yes" : "NO", a.solve_sec);
  }
  if (rep.best_by_ari >= 0)
    std::printf("best: alpha=%.4g by ARI (%.4f), alpha=%.4g by NMI (%.4f)\n",
                rep.alphas[rep.best_by_ari].alpha, rep.alphas[rep.best_by_ari].mean_ari,
                rep.alphas[rep.best_by_nmi].alpha, rep.alphas[rep.best_by_nmi].mean_nmi);
}

void add_dataset_opts(CLI::App* s, ExperimentConfig& cfg) {
  s->add_option("--graph", cfg.graph_path, "edge list or GML file")->required();
  s->add_option("--format", cfg.format, "edgelist|gml")
      ->check(CLI::IsMember({"edgelist", "gml"}));
  s->add_option("--labels", cfg.labels_path, "side file with 'node_id label' lines");
  s->add_option("--label-key", cfg.label_key, "GML node attribute holding the label");
  s->add_flag("--lcc", cfg.largest_component, "restrict to the largest connected component");
}

void add_motif_opts(CLI::App* s, ExperimentConfig& cfg) {
  s->add_option("--motifs", cfg.motifs, "motif names (see --motif-defs for custom shapes)")
      ->delimiter(',');
  s->add_option("--motif-defs", cfg.motif_defs_path, "JSON file with extra motif definitions");
  s->add_option("--cache-dir", cfg.cache_dir, "directory for cached motif adjacencies");
  s->add_option("--max-instances", cfg.max_instances, "abort enumeration beyond this count");
}

void add_solver_opts(CLI::App* s, ExperimentConfig& cfg) {
  s->add_option("--k", cfg.k, "cluster count (default: ground-truth count)");
  s->add_option("--trials", cfg.trials, "k-means trials per alpha");
  s->add_option("--seed", cfg.seed, "rng seed");
  s->add_option("--tol", cfg.tol, "alternating-minimization stop tolerance");
  s->add_option("--max-iter", cfg.max_iter, "alternating-minimization iteration cap");
  s->add_option("--kmeans-restarts", cfg.kmeans_restarts, "k-means++ restarts per trial");
  s->add_flag("--row-normalize", cfg.row_normalize_embedding,
              "row-normalize the embedding before k-means");
  s->add_flag("!--no-refine", cfg.refine_lambda,
              "skip the active-set pass of the weight subproblem");
  s->add_option("--eval-scope", cfg.eval_scope, "score all nodes or only motif-covered ones")
      ->check(CLI::IsMember({"all", "supported"}));
}

struct OutputPaths {
  std::string report, csv, labels_out;
};

void add_output_opts(CLI::App* s, OutputPaths& out) {
  s->add_option("--out,--report", out.report, "write the full run report as JSON");
  s->add_option("--csv", out.csv, "write per-alpha summary rows as CSV");
  s->add_option("--labels-out", out.labels_out, "write predicted labels (best alpha, trial 0)");
}

int finish_run(const RunReport& rep, const OutputPaths& out, const ExperimentConfig& cfg) {
  print_report(rep);
  if (!out.report.empty()) write_report_json(rep, out.report);
  if (!out.csv.empty()) write_sweep_csv(rep, out.csv);
  if (!out.labels_out.empty()) {
    LoadedDataset ds = load_dataset(cfg);
    write_labels(ds.graph, rep.best_labels, out.labels_out);
  }
  for (const auto& a : rep.alphas)
    if (!a.converged) {
      std::fprintf(stderr, "warning: alpha=%g hit the iteration cap\n", a.alpha);
      return 3;
    }
  return 0;
}

int cmd_build_motifs(const ExperimentConfig& cfg) {
  LoadedDataset ds = load_dataset(cfg);
  auto specs = resolve_motifs(cfg.motifs, cfg.motif_defs_path);
  for (const auto& spec : specs) {
    MotifAdjacency ma = cached_motif(ds.graph, spec, cfg.cache_dir, cfg.max_instances);
    int covered = 0;
    for (auto a : ma.active) covered += a;
    std::printf("%-6s p=%d instances=%zu nnz=%zu covered_nodes=%d/%d\n", spec.name.c_str(),
                spec.p, ma.instance_count, ma.matrix.stored_nnz(), covered, ds.graph.n);
  }
  return 0;
}

int cmd_dump_weights(const ExperimentConfig& cfg, double alpha, const std::string& out_path) {
  LoadedDataset ds = load_dataset(cfg);
  PreparedProblem pp = prepare_problem(cfg, ds.graph);
  MOGCConfig mc;
  mc.alpha = alpha;
  mc.k = cfg.k > 0 ? cfg.k : ds.labels.k;
  if (mc.k < 2) throw InvalidArgument("no ground-truth labels found; pass --k");
  mc.tol = cfg.tol;
  mc.max_iter = cfg.max_iter;
  mc.seed = cfg.seed;
  mc.kmeans_restarts = cfg.kmeans_restarts;
  mc.row_normalize_embedding = cfg.row_normalize_embedding;
  mc.refine_lambda = cfg.refine_lambda;
  FusedStructure fs(pp.bundle);
  SolverState st = mogc_cluster(fs, mc);
  write_weights_csv(ds.graph, pp.motif_names, st.lambda, pp.keep, out_path);
  std::printf("wrote %s (%d rows, %d motifs, %d iterations, %s)\n", out_path.c_str(), ds.graph.n,
              fs.m(), st.iterations, st.converged ? "converged" : "NOT converged");
  for (int j = 0; j < fs.m(); ++j) {
    double s = 0.0;
    for (int i = 0; i < st.lambda.n; ++i) s += st.lambda.at(i, j);
    std::printf("  mean weight %-6s = %.4f\n", pp.motif_names[j].c_str(), s / st.lambda.n);
  }
  return st.converged ? 0 : 3;
}

std::vector<std::pair<std::string, std::string>> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id, lab, extra;
    if (!(ls >> id)) continue;
    if (!(ls >> lab) || (ls >> extra))
      throw ParseError(path + ":" + std::to_string(lineno) + ": want 'node_id label'");
    out.emplace_back(std::move(id), std::move(lab));
  }
  return out;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path) {
  auto truth = read_label_file(truth_path);
  auto pred = read_label_file(pred_path);
  std::unordered_map<std::string, std::string> pred_of;
  for (auto& [id, lab] : pred)
    if (!pred_of.emplace(id, lab).second)
      throw ParseError(pred_path + ": duplicate node id '" + id + "'");
  std::unordered_map<std::string, int> tmap, pmap;
  std::vector<int> a, b;
  for (auto& [id, lab] : truth) {
    auto it = pred_of.find(id);
    if (it == pred_of.end()) throw InvalidArgument("prediction file misses node '" + id + "'");
    a.push_back(tmap.emplace(lab, static_cast<int>(tmap.size())).first->second);
    b.push_back(pmap.emplace(it->second, static_cast<int>(pmap.size())).first->second);
  }
  std::printf("n=%zu ari=%.6f ri=%.6f nmi=%.6f\n", a.size(), adjusted_rand_index(b, a),
              rand_index(b, a), normalized_mutual_information(b, a));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-order graph clustering"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  OutputPaths out;
  std::string alpha_grid;
  double one_alpha = 1.0;
  std::string weights_out;
  std::string truth_path, pred_path;
  std::string method = "sc";

  auto* cluster = app.add_subcommand("cluster", "alternating solve + k-means over given alphas");
  add_dataset_opts(cluster, cfg);
  add_motif_opts(cluster, cfg);
  add_solver_opts(cluster, cfg);
  add_output_opts(cluster, out);
  cluster->add_option("--alpha", cfg.alphas, "regularization value(s)")->delimiter(',');
  cluster->add_option("--alpha-grid", alpha_grid, "grid spec, e.g. 0.1:3:0.1,4:20:1");

  auto* sweep = app.add_subcommand("sweep-alpha", "cluster over a dense alpha grid");
  add_dataset_opts(sweep, cfg);
  add_motif_opts(sweep, cfg);
  add_solver_opts(sweep, cfg);
  add_output_opts(sweep, out);
  sweep->add_option("--alpha-grid", alpha_grid, "grid spec, e.g. 0.1:3:0.1,4:20:1")->required();

  auto* base = app.add_subcommand("baseline", "one-shot spectral clustering");
  add_dataset_opts(base, cfg);
  add_motif_opts(base, cfg);
  add_solver_opts(base, cfg);
  add_output_opts(base, out);
  base->add_option("--algo", method, "sc|motif_sc")->check(CLI::IsMember({"sc", "motif_sc"}));

  auto* build = app.add_subcommand("build-motifs", "enumerate motifs into the cache");
  add_dataset_opts(build, cfg);
  add_motif_opts(build, cfg);

  auto* dump = app.add_subcommand("dump-weights", "converged per-node motif weights as CSV");
  add_dataset_opts(dump, cfg);
  add_motif_opts(dump, cfg);
  add_solver_opts(dump, cfg);
  dump->add_option("--alpha", one_alpha, "regularization value");
  dump->add_option("--out", weights_out, "output CSV path")->required();

  auto* eval = app.add_subcommand("eval", "score a predicted label file against ground truth");
  eval->add_option("--truth", truth_path, "reference 'node_id label' file")->required();
  eval->add_option("--pred", pred_path, "predicted 'node_id label' file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*eval) return cmd_eval(truth_path, pred_path);
    if (*build) return cmd_build_motifs(cfg);
    if (*dump) return cmd_dump_weights(cfg, one_alpha, weights_out);

    if (!alpha_grid.empty()) cfg.alphas = parse_alpha_grid(alpha_grid);
    if (*base) cfg.algo = method;
    RunReport rep = run_experiment(cfg);
    return finish_run(rep, out, cfg);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ResourceLimit& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
