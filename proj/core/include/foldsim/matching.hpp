#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foldsim/dem.hpp"

namespace foldsim {

// Sentinel node id of the spatial boundary: matchable like any node but
// exempt from the defect-parity constraint.
inline constexpr int kBoundaryNode = -1;

// One merged edge of a per-class matching graph.
struct GraphEdge {
  int id = -1;
  int u = -1;                  // node id
  int v = kBoundaryNode;       // second node id, or the boundary
  double weight = 0.0;
  double probability = 0.0;    // xor-combined over the merged hyperedges
  std::vector<int> dem_edges;  // hyperedge ids merged into this edge (sorted)
  int representative = -1;     // supplies the cross-class footprint and logical
                               // flip: prefers members without one, then the
                               // highest probability
  bool logical_flip = false;
  bool flip_conflict = false;  // merged hyperedges disagreed on the flip
};

// Matching graph of one detector class. Nodes are detector ids (plus the two
// virtual time-boundary nodes when requested); all-pairs shortest paths are
// precomputed on freeze for table-driven decoding.
struct MatchingGraph {
  std::vector<int> nodes;       // sorted node ids
  std::map<int, int> node_pos;  // node id -> dense index; boundary = nodes.size()
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> adjacency;  // dense index (incl. boundary) -> edge ids
  int v0 = -1;                  // virtual node on the earliest time slice (-1 if absent)
  int vf = -1;                  // virtual node on the latest time slice
  int conflict_count = 0;

  // dist[s][t] over dense indices, +inf when unreachable; via[s][t] is the
  // last edge of the canonical shortest s->t path.
  std::vector<std::vector<double>> dist;
  std::vector<std::vector<int>> via;

  int dense(int node_id) const { return node_id == kBoundaryNode ? int(nodes.size()) : node_pos.at(node_id); }
};

// Projects the hypergraph onto one detector class: every hyperedge with one
// endpoint of the class attaches that endpoint to the boundary, two-endpoint
// edges connect them, parallel edges merge (probabilities xor-combined; on a
// logical-flip disagreement the lighter hyperedge wins and the conflict is
// counted). With virtual time boundaries, sole-endpoint edges on the earliest
// (latest) time slice attach to v0 (vf) instead of the boundary. Throws
// std::invalid_argument if a hyperedge carries more than two endpoints of the
// class.
MatchingGraph compile_matching_graph(const DecodingHypergraph& hg,
                                     const DetectorSet& ds, bool x_class,
                                     bool with_virtual_time_boundaries = false);

struct MatchResult {
  std::vector<std::vector<int>> matched_paths;  // edge ids per matched pair
  double total_weight = 0.0;
  bool logical_correction = false;
  std::vector<int> fault_set;  // edge ids appearing an odd number of times
};

// Exact minimum-weight perfect matching of the defects (each may also match
// the boundary): all-pairs defect distances from the frozen tables (or fresh
// Dijkstra runs when `weight_override` replaces the edge weights), then an
// exact pairing solver -- bitmask DP for small defect counts, an O(n^3)
// blossom otherwise. Throws std::invalid_argument on unknown or duplicate
// defects and std::runtime_error if a defect cannot be matched.
MatchResult decode(const MatchingGraph& g, const std::vector<int>& defects,
                   const std::vector<double>* weight_override = nullptr);

// Reference solver for tests: exhaustive recursion over all pairings
// (including per-defect boundary matches). Intended for <= 10 defects.
double exhaustive_minimum_weight(const MatchingGraph& g,
                                 const std::vector<int>& defects,
                                 const std::vector<double>* weight_override = nullptr);

// Exposed for cross-validation in tests: forces the blossom pairing path
// regardless of defect count.
MatchResult decode_via_blossom(const MatchingGraph& g, const std::vector<int>& defects,
                               const std::vector<double>* weight_override = nullptr);

}  // namespace foldsim
