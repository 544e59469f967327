#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfactor {

using VertexId = int;
using EdgeId = int;
using Weight = std::int64_t;

/// Thrown when an input violates a structural precondition (bad ids,
/// malformed blossoms, broken invariants detected in debug mode).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 1;
  bool is_loop() const { return u == v; }
};

/// A half-edge id h refers to edge h/2 seen from endpoint (h%2 ? v : u).
/// Loops contribute two half-edges at the same vertex.
inline int half_edge(EdgeId e, int side) { return 2 * e + side; }
inline EdgeId edge_of(int h) { return h >> 1; }

/// Multigraph with parallel edges and loops, integer weights in [1, W] and a
/// per-vertex demand f. Immutable after construction.
class MultiGraph {
 public:
  MultiGraph() = default;
  MultiGraph(int n, std::vector<Edge> edges, std::vector<int> demand);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  int demand(VertexId v) const { return f_[v]; }
  std::span<const int> demands() const { return f_; }
  std::int64_t total_demand() const;
  Weight max_weight() const { return max_w_; }

  /// Incident half-edges in input order; a loop appears twice.
  std::span<const int> incident(VertexId v) const {
    return {adj_.data() + adj_start_[v], adj_.data() + adj_start_[v + 1]};
  }
  int degree(VertexId v) const { return adj_start_[v + 1] - adj_start_[v]; }

  VertexId tail(int h) const { return (h & 1) ? edges_[h >> 1].v : edges_[h >> 1].u; }
  VertexId head(int h) const { return (h & 1) ? edges_[h >> 1].u : edges_[h >> 1].v; }
  VertexId other(EdgeId e, VertexId x) const {
    return edges_[e].u == x ? edges_[e].v : edges_[e].u;
  }

  /// Same topology with a different demand function.
  MultiGraph with_demand(std::vector<int> demand) const;
  /// Same topology with different weights (must be >= 1).
  MultiGraph with_weights(std::vector<Weight> weights) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> f_;
  std::vector<int> adj_start_{0};
  std::vector<int> adj_;
  Weight max_w_ = 0;
};

/// An edge subset with cached matched degrees (loops count twice).
class EdgeSubset {
 public:
  EdgeSubset() = default;
  explicit EdgeSubset(const MultiGraph& g);
  EdgeSubset(const MultiGraph& g, std::span<const EdgeId> members);

  bool contains(EdgeId e) const { return member_[e] != 0; }
  int degree(VertexId v) const { return deg_[v]; }
  int size() const { return size_; }
  int num_edges() const { return static_cast<int>(member_.size()); }

  void insert(const MultiGraph& g, EdgeId e);
  void erase(const MultiGraph& g, EdgeId e);
  void toggle(const MultiGraph& g, EdgeId e);

  std::vector<EdgeId> members() const;
  Weight weight(const MultiGraph& g) const;
  /// Recomputes every degree from scratch and compares with the cache.
  bool cache_consistent(const MultiGraph& g) const;

  friend bool operator==(const EdgeSubset& a, const EdgeSubset& b) {
    return a.member_ == b.member_;
  }

 private:
  void check_edge(EdgeId e) const;

  std::vector<char> member_;
  std::vector<int> deg_;
  int size_ = 0;
};

/// f(v) - deg_F(v); negative entries are surplus.
std::vector<int> deficiency(const MultiGraph& g, const EdgeSubset& F);

bool validate_factor(const MultiGraph& g, const EdgeSubset& F);
bool validate_cover(const MultiGraph& g, const EdgeSubset& F);
EdgeSubset complement(const MultiGraph& g, const EdgeSubset& F);

/// f_C(v) = deg(v) - f_F(v). Throws if some entry would be negative.
std::vector<int> complementary_demand(const MultiGraph& g, std::span<const int> f);

}  // namespace gfactor
