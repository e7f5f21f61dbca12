#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "mogc/sparse.hpp"

namespace mogc {

struct Edge {
  int u = 0;
  int v = 0;  // u < v
  double w = 1.0;
};

// Undirected weighted graph with dense internal ids 0..n-1.  Original file
// ids are kept for reports and label matching.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;  // sorted by (u, v), unique
  std::vector<std::int64_t> original_ids;
  std::unordered_map<std::int64_t, int> id_of;

  // Loader bookkeeping.
  std::int64_t raw_edge_records = 0;  // records seen before any collapsing
  int self_loops_dropped = 0;
  int duplicates_collapsed = 0;

  // Weighted adjacency; entry (u,v) carries the edge weight.
  SparseSymMatrix adjacency() const;
  // Same sparsity with all weights forced to 1.
  SparseSymMatrix adjacency_binary() const;
};

// Ground-truth communities as dense ids 0..k-1, aligned with Graph node ids.
// -1 marks nodes without a label.  names[c] is the original label token.
struct LabelVector {
  std::vector<int> labels;
  int k = 0;
  std::vector<std::string> names;
};

// Whitespace-separated "u v [w]" lines, '#' starts a comment.  Node ids are
// arbitrary integers, remapped to 0..n-1 in order of first appearance.
// Duplicate edges collapse by summing weights, self loops are dropped and
// counted, negative weights are rejected.
Graph load_edge_list(const std::filesystem::path& path);

// "node_id label_id" lines against a loaded graph; labels are densified in
// order of first appearance.  Nodes absent from the file get -1.
LabelVector load_labels(const std::filesystem::path& path, const Graph& g);

// Subset of GML sufficient for the classic network datasets: a graph block
// with node/edge sub-blocks, integer node ids, optional "directed 1", and a
// per-node attribute (label_key) holding the community as int or string.
// Directed input is symmetrized: an undirected edge exists if either
// direction is present; repeated records collapse to the largest weight.
struct GmlData {
  Graph graph;
  LabelVector labels;  // empty (labels.size()==0) if label_key absent
};
GmlData load_gml(const std::filesystem::path& path, const std::string& label_key = "value");

}  // namespace mogc
