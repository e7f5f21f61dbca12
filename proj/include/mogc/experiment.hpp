#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mogc/metrics.hpp"
#include "mogc/solver.hpp"

namespace mogc {

struct ExperimentConfig {
  std::string graph_path;
  std::string format = "edgelist";  // edgelist | gml
  std::string labels_path;          // side file with "node_id label" lines
  std::string label_key = "value";  // gml node attribute carrying the label
  std::vector<std::string> motifs = {"edge"};
  std::string motif_defs_path;      // optional JSON adding/overriding shapes
  std::string algo = "mogc";        // mogc | sc | motif_sc
  std::vector<double> alphas = {1.0};
  int k = 0;                        // 0: use the ground-truth cluster count
  int trials = 1;
  std::uint64_t seed = 1;
  double tol = 1e-5;
  int max_iter = 100;
  int kmeans_restarts = 10;
  bool row_normalize_embedding = false;
  bool refine_lambda = true;
  std::string cache_dir;
  std::string eval_scope = "all";   // all | supported
  bool largest_component = false;
  std::size_t max_instances = 100'000'000;
};

struct TrialResult {
  double ari = 0.0, ri = 0.0, nmi = 0.0;
  int iterations = 0;
  bool converged = true;
  double runtime_sec = 0.0;
};

struct AlphaResult {
  double alpha = 0.0;
  std::vector<TrialResult> trials;
  double mean_ari = 0.0, std_ari = 0.0;
  double mean_ri = 0.0, std_ri = 0.0;
  double mean_nmi = 0.0, std_nmi = 0.0;
  // Column means of the converged weights over supported nodes (mogc only).
  std::vector<double> lambda_col_means;
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = true;
  double solve_sec = 0.0;
  double trace_identity_err = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  int n = 0;
  int edge_count = 0;
  std::int64_t raw_edge_records = 0;
  int k_true = 0;
  int k_used = 0;
  std::vector<std::string> motif_names;
  std::vector<std::size_t> instance_counts;
  int unsupported_nodes = 0;  // solved apart and assigned to the largest cluster
  std::vector<AlphaResult> alphas;
  int best_by_ari = -1;  // indices into alphas (-1 when no ground truth)
  int best_by_nmi = -1;
  // Predicted labels (full node set) of trial 0 at the best-ARI alpha.
  std::vector<int> best_labels;
};

struct LoadedDataset {
  Graph graph;
  LabelVector labels;
};

LoadedDataset load_dataset(const ExperimentConfig& cfg);

// Induced subgraph on `keep` (sorted old ids); original ids and labels follow.
Graph induced_subgraph(const Graph& g, const std::vector<int>& keep);
std::vector<int> largest_component(const Graph& g);

// FNV-1a over the canonical edge list; names motif cache entries.
std::uint64_t graph_fingerprint(const Graph& g);

// Catalog shapes plus any custom/overriding definitions from a JSON file of
// the form [{"name":..., "p":..., "edges":[[0,1],...], "anchors":[0,1,...]}].
std::vector<MotifSpec> resolve_motifs(const std::vector<std::string>& names,
                                      const std::string& defs_path);

// Build or reuse a cached motif adjacency.  Cache entries are a sparse
// matrix file plus a JSON sidecar keyed by (graph fingerprint, motif name);
// a cache round-trip is bit-exact.
MotifAdjacency cached_motif(const Graph& g, const MotifSpec& spec, const std::string& cache_dir,
                            std::size_t max_instances);

// Motif adjacencies for `cfg`, restricted to the nodes covered by at least
// one motif.  `keep` maps sub-problem rows back to full-graph nodes.
struct PreparedProblem {
  MotifBundle bundle;
  std::vector<int> keep;
  std::vector<std::uint8_t> supported;  // full-length mask
  std::vector<std::string> motif_names;
  std::vector<std::size_t> instance_counts;
  int n_full = 0;
};

PreparedProblem prepare_problem(const ExperimentConfig& cfg, const Graph& g);

RunReport run_experiment(const ExperimentConfig& cfg);

void write_report_json(const RunReport& report, const std::filesystem::path& path);
void write_sweep_csv(const RunReport& report, const std::filesystem::path& path);
void write_labels(const Graph& g, const std::vector<int>& labels,
                  const std::filesystem::path& path);
void write_weights_csv(const Graph& g, const std::vector<std::string>& motif_names,
                       const WeightMatrix& w, const std::vector<int>& rows,
                       const std::filesystem::path& path);

}  // namespace mogc
