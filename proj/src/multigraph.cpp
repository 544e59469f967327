#include "gfactor/multigraph.hpp"

#include <algorithm>
#include <numeric>

namespace gfactor {

MultiGraph::MultiGraph(int n, std::vector<Edge> edges, std::vector<int> demand)
    : n_(n), edges_(std::move(edges)), f_(std::move(demand)) {
  if (n_ < 0) throw StructuralError("negative vertex count");
  if (static_cast<int>(f_.size()) != n_)
    throw StructuralError("demand vector size differs from vertex count");
  for (int v = 0; v < n_; ++v)
    if (f_[v] < 0) throw StructuralError("negative demand at vertex " + std::to_string(v));

  std::vector<int> deg(n_ + 1, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
      throw StructuralError("edge " + std::to_string(e) + " has an endpoint out of range");
    if (ed.w < 1) throw StructuralError("edge " + std::to_string(e) + " has nonpositive weight");
    ++deg[ed.u];
    ++deg[ed.v];
    max_w_ = std::max(max_w_, ed.w);
  }
  adj_start_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) adj_start_[v + 1] = adj_start_[v] + deg[v];
  adj_.assign(adj_start_[n_], 0);
  std::vector<int> pos(adj_start_.begin(), adj_start_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adj_[pos[edges_[e].u]++] = half_edge(static_cast<EdgeId>(e), 0);
    adj_[pos[edges_[e].v]++] = half_edge(static_cast<EdgeId>(e), 1);
  }
}

std::int64_t MultiGraph::total_demand() const {
  return std::accumulate(f_.begin(), f_.end(), std::int64_t{0});
}

MultiGraph MultiGraph::with_demand(std::vector<int> demand) const {
  return MultiGraph(n_, edges_, std::move(demand));
}

MultiGraph MultiGraph::with_weights(std::vector<Weight> weights) const {
  if (weights.size() != edges_.size()) throw StructuralError("weight vector size mismatch");
  std::vector<Edge> es = edges_;
  for (std::size_t e = 0; e < es.size(); ++e) es[e].w = weights[e];
  return MultiGraph(n_, std::move(es), f_);
}

EdgeSubset::EdgeSubset(const MultiGraph& g)
    : member_(g.num_edges(), 0), deg_(g.num_vertices(), 0) {}

EdgeSubset::EdgeSubset(const MultiGraph& g, std::span<const EdgeId> members) : EdgeSubset(g) {
  for (EdgeId e : members) {
    check_edge(e);
    if (!contains(e)) insert(g, e);
  }
}

void EdgeSubset::check_edge(EdgeId e) const {
  if (e < 0 || e >= num_edges())
    throw StructuralError("edge id " + std::to_string(e) + " out of range");
}

void EdgeSubset::insert(const MultiGraph& g, EdgeId e) {
  check_edge(e);
  if (member_[e]) return;
  member_[e] = 1;
  ++size_;
  ++deg_[g.edge(e).u];
  ++deg_[g.edge(e).v];
}

void EdgeSubset::erase(const MultiGraph& g, EdgeId e) {
  check_edge(e);
  if (!member_[e]) return;
  member_[e] = 0;
  --size_;
  --deg_[g.edge(e).u];
  --deg_[g.edge(e).v];
}

void EdgeSubset::toggle(const MultiGraph& g, EdgeId e) {
  if (contains(e))
    erase(g, e);
  else
    insert(g, e);
}

std::vector<EdgeId> EdgeSubset::members() const {
  std::vector<EdgeId> out;
  out.reserve(size_);
  for (int e = 0; e < num_edges(); ++e)
    if (member_[e]) out.push_back(e);
  return out;
}

Weight EdgeSubset::weight(const MultiGraph& g) const {
  Weight s = 0;
  for (int e = 0; e < num_edges(); ++e)
    if (member_[e]) s += g.edge(e).w;
  return s;
}

bool EdgeSubset::cache_consistent(const MultiGraph& g) const {
  std::vector<int> d(g.num_vertices(), 0);
  int count = 0;
  for (int e = 0; e < num_edges(); ++e) {
    if (!member_[e]) continue;
    ++count;
    ++d[g.edge(e).u];
    ++d[g.edge(e).v];
  }
  return d == deg_ && count == size_;
}

namespace {
void check_shape(const MultiGraph& g, const EdgeSubset& F) {
  if (F.num_edges() != g.num_edges())
    throw StructuralError("edge subset indexes " + std::to_string(F.num_edges()) +
                          " edges, graph has " + std::to_string(g.num_edges()));
}
}  // namespace

std::vector<int> deficiency(const MultiGraph& g, const EdgeSubset& F) {
  check_shape(g, F);
  std::vector<int> d(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) d[v] = g.demand(v) - F.degree(v);
  return d;
}

bool validate_factor(const MultiGraph& g, const EdgeSubset& F) {
  check_shape(g, F);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (F.degree(v) > g.demand(v)) return false;
  return true;
}

bool validate_cover(const MultiGraph& g, const EdgeSubset& F) {
  check_shape(g, F);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (F.degree(v) < g.demand(v)) return false;
  return true;
}

EdgeSubset complement(const MultiGraph& g, const EdgeSubset& F) {
  check_shape(g, F);
  EdgeSubset C(g);
  for (int e = 0; e < g.num_edges(); ++e)
    if (!F.contains(e)) C.insert(g, e);
  return C;
}

std::vector<int> complementary_demand(const MultiGraph& g, std::span<const int> f) {
  if (static_cast<int>(f.size()) != g.num_vertices())
    throw StructuralError("demand vector size mismatch");
  std::vector<int> out(f.size());
  for (int v = 0; v < g.num_vertices(); ++v) {
    out[v] = g.degree(v) - f[v];
    if (out[v] < 0)
      throw StructuralError("demand exceeds degree at vertex " + std::to_string(v));
  }
  return out;
}

}  // namespace gfactor
