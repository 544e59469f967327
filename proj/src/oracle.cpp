#include "gfactor/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace gfactor {

namespace {

enum class Sense { kFactor, kCover };

// Gray-code walk over all 2^m subsets, keeping degrees incrementally.
ExactResult enumerate(const MultiGraph& g, Sense sense, bool unit_weights) {
  const int m = g.num_edges();
  const int n = g.num_vertices();
  if (m > kOracleMaxEdges)
    throw std::length_error("oracle enumeration limited to " + std::to_string(kOracleMaxEdges) +
                            " edges, got " + std::to_string(m));
  auto weight = [&](EdgeId e) -> Weight { return unit_weights ? 1 : g.edge(e).w; };
  auto bad = [&](VertexId v, int d) {
    return sense == Sense::kFactor ? d > g.demand(v) : d < g.demand(v);
  };

  std::vector<int> deg(n, 0);
  int violations = 0;
  for (VertexId v = 0; v < n; ++v) violations += bad(v, 0);
  Weight value = 0;
  std::uint32_t mask = 0;

  ExactResult best;
  best.feasible = false;
  auto members = [&](std::uint32_t s) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < m; ++e)
      if (s >> e & 1U) out.push_back(e);
    return out;
  };
  auto consider = [&] {
    if (violations != 0) return;
    const bool better = !best.feasible ||
                        (sense == Sense::kFactor ? value > best.value : value < best.value);
    if (better) {
      best.feasible = true;
      best.value = value;
      best.witness = members(mask);
    } else if (value == best.value) {
      auto cand = members(mask);
      if (cand < best.witness) best.witness = std::move(cand);
    }
  };
  auto bump = [&](VertexId v, int by) {
    violations -= bad(v, deg[v]);
    deg[v] += by;
    violations += bad(v, deg[v]);
  };

  consider();
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t k = 1; k < total; ++k) {
    const EdgeId e = std::countr_zero(k);
    const int by = (mask >> e & 1U) ? -1 : 1;
    mask ^= 1U << e;
    value += by * weight(e);
    bump(g.edge(e).u, by);
    bump(g.edge(e).v, by);
    consider();
  }
  if (!best.feasible) best.value = 0;
  return best;
}

struct TrailSearch {
  const MultiGraph& g;
  const EdgeSubset& F;
  const BlossomFamily& fam;
  std::span<const char> eligible;
  std::span<const char> avoid;
  int max_len;
  std::vector<int> def;
  std::vector<char> used;
  ContractedWalk path;
  // Called for every valid prefix; returns false to stop the search.
  std::function<bool(bool augmenting)> on_prefix;
  bool stopped = false;

  TrailSearch(const MultiGraph& graph, const EdgeSubset& f, const BlossomFamily& family,
              std::span<const char> elig, std::span<const char> av, int len)
      : g(graph), F(f), fam(family), eligible(elig), avoid(av), max_len(len),
        def(deficiency(graph, f)), used(graph.num_edges(), 0) {}

  bool nontrivial(NodeId x) const { return !fam.is_vertex_node(x); }
  int node_def(NodeId x) const {
    return nontrivial(x) ? def[fam.at(fam.blossom_of(x)).base] : def[x];
  }
  bool terminal(NodeId x) const {
    if (node_def(x) <= 0) return false;
    return !nontrivial(x) || is_light(fam, fam.blossom_of(x), F);
  }

  bool may_leave(NodeId x, EdgeId in, EdgeId out) const {
    if (in == -1) return nontrivial(x) || !F.contains(out);
    if (!nontrivial(x)) return F.contains(in) != F.contains(out);
    const EdgeId eta = fam.at(fam.blossom_of(x)).eta;
    return eta != -1 && (eta == in || eta == out);
  }

  bool ends_augmenting(NodeId y, EdgeId last) const {
    const NodeId start = path.nodes.front();
    if (!terminal(y)) return false;
    if (!nontrivial(y) && F.contains(last)) return false;
    if (y == start) return !nontrivial(y) && def[y] >= 2;
    return true;
  }

  void extend(NodeId x, EdgeId in) {
    if (stopped || static_cast<int>(path.edges.size()) >= max_len) return;
    for (VertexId v : fam.node_members(x)) {
      for (int h : g.incident(v)) {
        const EdgeId e = h >> 1;
        if (used[e] || !eligible[e] || (!avoid.empty() && avoid[e])) continue;
        const NodeId y = fam.top(g.head(h));
        if (y == x && (nontrivial(x) || (h & 1))) continue;
        if (!may_leave(x, in, e)) continue;
        used[e] = 1;
        path.edges.push_back(e);
        path.nodes.push_back(y);
        if (!on_prefix(ends_augmenting(y, e))) stopped = true;
        extend(y, e);
        path.nodes.pop_back();
        path.edges.pop_back();
        used[e] = 0;
        if (stopped) return;
      }
    }
  }

  void run() {
    for (VertexId v = 0; v < g.num_vertices() && !stopped; ++v) {
      const NodeId x = fam.top(v);
      if (nontrivial(x) && fam.at(fam.blossom_of(x)).members.front() != v) continue;
      if (!terminal(x)) continue;
      path.nodes.assign(1, x);
      path.edges.clear();
      extend(x, -1);
    }
  }
};

}  // namespace

ExactResult exact_max_weight_factor(const MultiGraph& g) {
  return enumerate(g, Sense::kFactor, false);
}

ExactResult exact_min_weight_cover(const MultiGraph& g) {
  return enumerate(g, Sense::kCover, false);
}

ExactResult exact_max_card_factor(const MultiGraph& g) {
  return enumerate(g, Sense::kFactor, true);
}

ExactResult exact_min_card_cover(const MultiGraph& g) {
  return enumerate(g, Sense::kCover, true);
}

ExactResult exact_min_weight_1_cover(const MultiGraph& g) {
  return enumerate(g.with_demand(std::vector<int>(g.num_vertices(), 1)), Sense::kCover, false);
}

std::vector<ContractedWalk> enumerate_augmenting_walks(const MultiGraph& g, const EdgeSubset& F,
                                                       const BlossomFamily& fam,
                                                       std::span<const char> eligible,
                                                       int max_len, int max_results) {
  std::vector<ContractedWalk> out;
  TrailSearch s(g, F, fam, eligible, {}, max_len);
  s.on_prefix = [&](bool augmenting) {
    // A walk and its reverse are the same walk; keep the smaller orientation.
    if (augmenting) {
      const std::vector<NodeId> rn(s.path.nodes.rbegin(), s.path.nodes.rend());
      const std::vector<EdgeId> re(s.path.edges.rbegin(), s.path.edges.rend());
      if (std::tie(s.path.nodes, s.path.edges) <= std::tie(rn, re)) out.push_back(s.path);
    }
    return static_cast<int>(out.size()) < max_results;
  };
  s.run();
  return out;
}

std::vector<char> alternating_reachable_edges(const MultiGraph& g, const EdgeSubset& F,
                                              const BlossomFamily& fam,
                                              std::span<const char> eligible,
                                              std::span<const char> avoid, int max_len) {
  std::vector<char> reached(g.num_edges(), 0);
  TrailSearch s(g, F, fam, eligible, avoid, max_len);
  s.on_prefix = [&](bool) {
    reached[s.path.edges.back()] = 1;
    return true;
  };
  s.run();
  return reached;
}

}  // namespace gfactor
