#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfactor/multigraph.hpp"

namespace gfactor {

using BlossomId = int;
/// Dual values are integers counting half-delta units.
using DualUnits = std::int64_t;

enum class Parity { kEven, kOdd };

/// A node of the contracted graph: a vertex id in [0, n) or n + blossom id.
using NodeId = int;

/// One blossom of the laminar family. children[i] and children[i+1 mod l]
/// are joined by cycle[i]; children[0] holds the base vertex.
struct Blossom {
  std::vector<NodeId> children;
  std::vector<EdgeId> cycle;
  VertexId base = -1;
  EdgeId eta = -1;  // -1 when the base edge set is empty
  DualUnits z = 0;
  BlossomId parent = -1;
  std::vector<VertexId> members;
  bool alive = false;
};

/// Input to contract(): the closed walk over current root nodes.
struct BlossomSpec {
  std::vector<NodeId> children;
  std::vector<EdgeId> cycle;
  EdgeId eta = -1;
};

/// Laminar blossom family with O(1) maximal-blossom lookup per vertex.
class BlossomFamily {
 public:
  BlossomFamily() = default;
  explicit BlossomFamily(int n);

  int num_vertices() const { return n_; }
  /// Number of blossom slots (alive or free).
  int capacity() const { return static_cast<int>(blossoms_.size()); }
  int size() const { return alive_count_; }
  bool empty() const { return alive_count_ == 0; }
  bool alive(BlossomId b) const {
    return b >= 0 && b < capacity() && blossoms_[b].alive;
  }
  const Blossom& at(BlossomId b) const { return blossoms_[b]; }
  Blossom& at(BlossomId b) { return blossoms_[b]; }

  bool is_vertex_node(NodeId x) const { return x < n_; }
  BlossomId blossom_of(NodeId x) const { return x - n_; }
  NodeId node_of_blossom(BlossomId b) const { return n_ + b; }

  /// Maximal blossom (as a node) containing v, or v itself.
  NodeId top(VertexId v) const { return top_[v]; }
  /// Innermost blossom containing v, or -1.
  BlossomId innermost(VertexId v) const { return vparent_[v]; }
  /// Blossoms containing v, innermost first.
  std::vector<BlossomId> ancestors(VertexId v) const;
  bool contains(BlossomId b, VertexId v) const;
  /// The child node of b whose vertex set holds v (v must lie in b).
  NodeId child_containing(BlossomId b, VertexId v) const;
  int child_index(BlossomId b, VertexId v) const;
  std::vector<BlossomId> roots() const;
  std::vector<BlossomId> alive_ids() const;

  VertexId node_base(NodeId x) const { return is_vertex_node(x) ? x : at(blossom_of(x)).base; }
  EdgeId node_eta(NodeId x) const { return is_vertex_node(x) ? -1 : at(blossom_of(x)).eta; }
  std::span<const VertexId> node_members(NodeId x) const;

  /// Adds a blossom over current root nodes without any structural checks.
  BlossomId contract_unchecked(const BlossomSpec& spec);
  /// Removes a root blossom; its children become roots. Throws unless z == 0.
  void dissolve_root(BlossomId b);
  /// Removes a root blossom regardless of z.
  void dissolve_root_unchecked(BlossomId b);
  void clear();

  /// Re-roots b at new base edge `eta` after an augmentation changed the
  /// types of C_B edges: rotates the cycle so that the child holding the new
  /// base comes first. Sub-blossoms are handled by their own calls.
  void rebase(const MultiGraph& g, BlossomId b, EdgeId eta);

 private:
  int n_ = 0;
  std::vector<Blossom> blossoms_;
  std::vector<BlossomId> free_;
  std::vector<BlossomId> vparent_;
  std::vector<NodeId> top_;
  std::vector<VertexId> self_;  // self_[v] == v, backs node_members for singletons
  int alive_count_ = 0;
};

/// True when both C_B edges at a singleton base are unmatched (recursively
/// through a nontrivial base child).
bool is_light(const BlossomFamily& fam, BlossomId b, const EdgeSubset& F);
/// Type (true = matched) of the first edge of every alternating walk leaving
/// the base inside b.
bool start_type(const BlossomFamily& fam, BlossomId b, const EdgeSubset& F);

/// delta(B): edges with exactly one endpoint in b.
std::vector<EdgeId> boundary(const MultiGraph& g, const BlossomFamily& fam, BlossomId b);
/// I(B) = delta_F(B) xor eta(B), sorted.
std::vector<EdgeId> i_set(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                          const EdgeSubset& F);

bool is_mature_factor(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                      const EdgeSubset& F);
bool is_mature_cover(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                     const EdgeSubset& C);

/// Empty when b is a valid blossom w.r.t. F; otherwise a description of the
/// first violated requirement.
std::optional<std::string> blossom_structure_error(const MultiGraph& g,
                                                   const BlossomFamily& fam, BlossomId b,
                                                   const EdgeSubset& F);

/// Alternating walk inside E_B from the base of b to v with the requested
/// length parity; the first edge has type start_type(b).
std::vector<EdgeId> alternating_walk(const MultiGraph& g, const BlossomFamily& fam,
                                     BlossomId b, VertexId v, Parity parity,
                                     const EdgeSubset& F);

/// Walk inside node x from `from` to `to` that alternates with the edges
/// `in` (arriving at `from`) and `out` (leaving `to`). Either may be -1 for
/// a terminal; then the walk starts/ends at the base. One of in/out must be
/// eta(x) when x is a nontrivial blossom and both are given.
std::vector<EdgeId> walk_through(const MultiGraph& g, const BlossomFamily& fam, NodeId x,
                                 VertexId from, EdgeId in, VertexId to, EdgeId out,
                                 const EdgeSubset& F);

/// Validates structure and maturity, then contracts. Throws StructuralError.
BlossomId contract(const MultiGraph& g, BlossomFamily& fam, const BlossomSpec& spec,
                   const EdgeSubset& F);

/// From-scratch laminarity and bookkeeping check (tests / debug).
bool family_consistent(const BlossomFamily& fam);

}  // namespace gfactor
