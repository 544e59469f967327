#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gfactor/blossoms.hpp"
#include "gfactor/multigraph.hpp"

namespace gfactor {

// Brute-force ground truth for small instances. Everything here enumerates;
// nothing is shared with the solvers beyond the graph and blossom types.

inline constexpr int kOracleMaxEdges = 24;

struct ExactResult {
  bool feasible = true;
  Weight value = 0;
  std::vector<EdgeId> witness;  // lexicographically smallest optimal subset
};

/// Max w(F) over all F with deg_F <= f. Throws std::length_error when m > 24.
ExactResult exact_max_weight_factor(const MultiGraph& g);
/// Min w(C) over all C with deg_C >= f; feasible=false when none exists.
ExactResult exact_min_weight_cover(const MultiGraph& g);
ExactResult exact_max_card_factor(const MultiGraph& g);
ExactResult exact_min_card_cover(const MultiGraph& g);
/// Cover with f = 1 everywhere; the demands of g are ignored.
ExactResult exact_min_weight_1_cover(const MultiGraph& g);

/// A walk in the contracted graph: nodes[i] and nodes[i+1] joined by edges[i].
struct ContractedWalk {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

/// Every edge-simple walk of at most max_len eligible edges in G/fam that
/// meets the terminal-vertex, terminal-edge and alternation requirements,
/// each listed in one orientation only. Stops after max_results walks.
std::vector<ContractedWalk> enumerate_augmenting_walks(const MultiGraph& g, const EdgeSubset& F,
                                                       const BlossomFamily& fam,
                                                       std::span<const char> eligible,
                                                       int max_len, int max_results = 1 << 20);

/// Edges lying on some alternating walk (prefix of a would-be augmenting
/// walk) that starts at an unsaturated terminal and avoids `avoid` edges.
std::vector<char> alternating_reachable_edges(const MultiGraph& g, const EdgeSubset& F,
                                              const BlossomFamily& fam,
                                              std::span<const char> eligible,
                                              std::span<const char> avoid, int max_len);

}  // namespace gfactor
