#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfactor/blossoms.hpp"
#include "gfactor/multigraph.hpp"

namespace gfactor {

enum class Label { kInner, kOuter };

/// A walk in G, given by its start vertex and edge sequence.
struct Walk {
  VertexId start = -1;
  std::vector<EdgeId> edges;
};

struct WalkResult {
  std::vector<Walk> walks;
  std::vector<BlossomId> new_blossoms;  // contracted into the family, z = 0
  std::vector<VertexId> exhausted_roots;
  std::int64_t scans = 0;               // half-edges scanned
  std::vector<char> explored;           // per edge: scanned in some direction
  bool heavy_unsaturated = false;       // an unsaturated heavy blossom was seen
  std::vector<std::string> trace;
};

struct SearchOptions {
  bool trace = false;
  bool validate = false;  // check every walk and new blossom as it is produced
};

/// Outer singleton: unmatched edges. Outer blossom: every edge but eta.
/// Inner singleton: matched edges. Inner blossom: only eta.
bool eligible_for(Label label, bool nontrivial, EdgeId eta, EdgeId e, const EdgeSubset& F);

/// Label of a search-tree node reached through tau (-1 for a root).
Label classify_inner_outer(bool nontrivial, EdgeId eta, EdgeId tau, const EdgeSubset& F);

/// Modified DFS over G / fam restricted to edges with eligible[e] != 0.
/// Augments F along every walk it finds (edge-disjoint, found in order) and
/// rebases the blossoms they pass through; blossoms discovered along the way
/// are contracted into fam.
WalkResult find_augmenting_walks(const MultiGraph& g, EdgeSubset& F, BlossomFamily& fam,
                                 std::span<const char> eligible,
                                 const SearchOptions& opt = {});

/// Empty if `walk` is an augmenting walk w.r.t. F: distinct edges, types
/// alternating, both end edges unmatched, both ends unsaturated (deficiency
/// at least 2 if they coincide).
std::optional<std::string> augmenting_walk_error(const MultiGraph& g, const EdgeSubset& F,
                                                 const Walk& walk);

/// Flips F along the walk and re-roots every blossom whose boundary the walk
/// crosses.
void apply_walk(const MultiGraph& g, EdgeSubset& F, BlossomFamily& fam, const Walk& walk);

}  // namespace gfactor
