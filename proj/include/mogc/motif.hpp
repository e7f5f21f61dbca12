#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mogc/graph.hpp"
#include "mogc/sparse.hpp"

namespace mogc {

// A small connected pattern on p <= 5 vertices.  `edges` lists the pattern
// edges with i < j; `mask` packs them as bits indexed by pair_index().
// Anchor vertices are the positions whose co-occurrence is counted.
struct MotifSpec {
  std::string name;
  int p = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> anchors;
  std::uint16_t mask = 0;
};

inline int pair_index(int i, int j, int p) {  // i < j
  return i * p - i * (i + 1) / 2 + (j - i - 1);
}

// Validates shape (2 <= p <= 5, connected, >= 2 anchors) and fills the mask.
MotifSpec make_motif(std::string name, int p, std::vector<std::pair<int, int>> edges,
                     std::vector<int> anchors);

// Built-in shapes: edge, m3_2 (open wedge), m3_3 (triangle), m4_1 (4-path),
// m4_2 (4-cycle), m5_1 (5-path), m5_2 (4-star), m5_3 (spider tree).
// All of them anchor every vertex.
const std::vector<MotifSpec>& motif_catalog();
MotifSpec motif_by_name(const std::string& name);

// One occurrence: the participating nodes sorted ascending (slots beyond p
// are -1) plus the anchor positions as a bitmask over slots.
struct MotifInstance {
  std::array<int, 5> nodes{-1, -1, -1, -1, -1};
  std::uint8_t anchor_slots = 0;
  friend bool operator==(const MotifInstance&, const MotifInstance&) = default;
  friend auto operator<=>(const MotifInstance& a, const MotifInstance& b) {
    if (auto c = a.nodes <=> b.nodes; c != 0) return c;
    return a.anchor_slots <=> b.anchor_slots;
  }
};

struct EnumLimits {
  std::size_t max_instances = 100'000'000;
};

// Exact enumeration of induced occurrences: a node subset matches when its
// induced subgraph is exactly isomorphic to the pattern (missing pattern
// edges must be missing in the graph too).  Each unordered node set appears
// once per distinct anchor image; the result is sorted, so the parallel and
// serial versions agree entry for entry.  Throws ResourceLimit past the cap.
std::vector<MotifInstance> enumerate_motif_instances(const Graph& g, const MotifSpec& spec,
                                                     const EnumLimits& limits = {});
std::vector<MotifInstance> enumerate_motif_instances_serial(const Graph& g, const MotifSpec& spec,
                                                            const EnumLimits& limits = {});

// Motif-weighted structure around one shape.  matrix(i,j) counts instances
// where i and j are both anchors; active[i] says whether node i appears as
// an anchor anywhere (equivalently: row i of matrix is nonzero).
struct MotifAdjacency {
  MotifSpec spec;
  SparseSymMatrix matrix;
  std::vector<std::uint8_t> active;
  std::size_t instance_count = 0;
};

MotifAdjacency accumulate_motif_adjacency(int n, std::span<const MotifInstance> instances,
                                          const MotifSpec& spec);

// Enumeration + accumulation with closed-form shortcuts for the edge,
// triangle and wedge shapes (their counts come from neighborhood
// intersections instead of subset search).  `generic` forces the search
// path; the two must agree exactly.
MotifAdjacency build_motif_adjacency(const Graph& g, const MotifSpec& spec,
                                     const EnumLimits& limits = {}, bool generic = false);
MotifAdjacency build_motif_adjacency_serial(const Graph& g, const MotifSpec& spec,
                                            const EnumLimits& limits = {}, bool generic = false);

}  // namespace mogc
