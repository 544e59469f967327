#include "gfactor/blossoms.hpp"

#include <algorithm>
#include <string>

namespace gfactor {

BlossomFamily::BlossomFamily(int n) : n_(n), vparent_(n, -1), top_(n), self_(n) {
  for (int v = 0; v < n; ++v) top_[v] = self_[v] = v;
}

void BlossomFamily::clear() {
  blossoms_.clear();
  free_.clear();
  alive_count_ = 0;
  std::fill(vparent_.begin(), vparent_.end(), -1);
  for (int v = 0; v < n_; ++v) top_[v] = v;
}

std::vector<BlossomId> BlossomFamily::ancestors(VertexId v) const {
  std::vector<BlossomId> out;
  for (BlossomId b = vparent_[v]; b != -1; b = blossoms_[b].parent) out.push_back(b);
  return out;
}

bool BlossomFamily::contains(BlossomId b, VertexId v) const {
  for (BlossomId p = vparent_[v]; p != -1; p = blossoms_[p].parent)
    if (p == b) return true;
  return false;
}

NodeId BlossomFamily::child_containing(BlossomId b, VertexId v) const {
  NodeId x = v;
  BlossomId p = vparent_[v];
  while (p != b) {
    if (p == -1) throw StructuralError("vertex " + std::to_string(v) + " not inside blossom");
    x = node_of_blossom(p);
    p = blossoms_[p].parent;
  }
  return x;
}

int BlossomFamily::child_index(BlossomId b, VertexId v) const {
  const NodeId x = child_containing(b, v);
  const auto& ch = blossoms_[b].children;
  return static_cast<int>(std::find(ch.begin(), ch.end(), x) - ch.begin());
}

std::vector<BlossomId> BlossomFamily::roots() const {
  std::vector<BlossomId> out;
  for (BlossomId b = 0; b < capacity(); ++b)
    if (blossoms_[b].alive && blossoms_[b].parent == -1) out.push_back(b);
  return out;
}

std::vector<BlossomId> BlossomFamily::alive_ids() const {
  std::vector<BlossomId> out;
  for (BlossomId b = 0; b < capacity(); ++b)
    if (blossoms_[b].alive) out.push_back(b);
  return out;
}

std::span<const VertexId> BlossomFamily::node_members(NodeId x) const {
  if (is_vertex_node(x)) return {&self_[x], 1};
  return blossoms_[blossom_of(x)].members;
}

BlossomId BlossomFamily::contract_unchecked(const BlossomSpec& spec) {
  if (spec.children.empty() || spec.children.size() != spec.cycle.size())
    throw StructuralError("blossom needs one cycle edge per child");
  for (NodeId c : spec.children) {
    const bool root = is_vertex_node(c) ? vparent_[c] == -1
                                        : (alive(blossom_of(c)) && at(blossom_of(c)).parent == -1);
    if (!root) throw StructuralError("blossom child is not a root node");
  }
  BlossomId b;
  if (!free_.empty()) {
    b = free_.back();
    free_.pop_back();
  } else {
    b = capacity();
    blossoms_.emplace_back();
  }
  Blossom& B = blossoms_[b];
  B = Blossom{};
  B.children = spec.children;
  B.cycle = spec.cycle;
  B.eta = spec.eta;
  B.alive = true;
  for (NodeId c : spec.children) {
    if (is_vertex_node(c)) {
      vparent_[c] = b;
      B.members.push_back(c);
    } else {
      Blossom& C = blossoms_[blossom_of(c)];
      C.parent = b;
      B.members.insert(B.members.end(), C.members.begin(), C.members.end());
    }
  }
  B.base = node_base(spec.children[0]);
  for (VertexId v : B.members) top_[v] = node_of_blossom(b);
  ++alive_count_;
  return b;
}

void BlossomFamily::dissolve_root(BlossomId b) {
  if (!alive(b)) throw StructuralError("dissolving a dead blossom");
  if (blossoms_[b].parent != -1) throw StructuralError("dissolving a non-root blossom");
  if (blossoms_[b].z != 0) throw StructuralError("dissolving a root blossom with positive z");
  dissolve_root_unchecked(b);
}

void BlossomFamily::dissolve_root_unchecked(BlossomId b) {
  Blossom& B = blossoms_[b];
  for (NodeId c : B.children) {
    if (is_vertex_node(c)) {
      vparent_[c] = -1;
      top_[c] = c;
    } else {
      Blossom& C = blossoms_[blossom_of(c)];
      C.parent = -1;
      for (VertexId v : C.members) top_[v] = c;
    }
  }
  B = Blossom{};
  free_.push_back(b);
  --alive_count_;
}

void BlossomFamily::rebase(const MultiGraph& g, BlossomId b, EdgeId eta) {
  Blossom& B = blossoms_[b];
  B.eta = eta;
  if (eta == -1) return;
  const Edge& ed = g.edge(eta);
  const VertexId nb = contains(b, ed.u) ? ed.u : ed.v;
  const int k = child_index(b, nb);
  std::rotate(B.children.begin(), B.children.begin() + k, B.children.end());
  std::rotate(B.cycle.begin(), B.cycle.begin() + k, B.cycle.end());
  B.base = nb;
}

bool is_light(const BlossomFamily& fam, BlossomId b, const EdgeSubset& F) {
  for (;;) {
    const Blossom& B = fam.at(b);
    if (fam.is_vertex_node(B.children[0])) return !F.contains(B.cycle[0]);
    b = fam.blossom_of(B.children[0]);
  }
}

bool start_type(const BlossomFamily& fam, BlossomId b, const EdgeSubset& F) {
  const Blossom& B = fam.at(b);
  if (B.eta != -1) return !F.contains(B.eta);
  return !is_light(fam, b, F);
}

namespace {

std::vector<char> member_mask(const BlossomFamily& fam, BlossomId b) {
  std::vector<char> mark(fam.num_vertices(), 0);
  for (VertexId v : fam.at(b).members) mark[v] = 1;
  return mark;
}

bool in_node(const BlossomFamily& fam, NodeId x, VertexId v) {
  return fam.is_vertex_node(x) ? x == v : fam.contains(fam.blossom_of(x), v);
}

VertexId endpoint_in(const MultiGraph& g, const BlossomFamily& fam, EdgeId e, NodeId x) {
  const Edge& ed = g.edge(e);
  if (in_node(fam, x, ed.u)) return ed.u;
  if (in_node(fam, x, ed.v)) return ed.v;
  throw StructuralError("edge " + std::to_string(e) + " does not touch blossom child");
}

// Parity of a walk from the base of b whose last edge must differ in type
// from `next`: odd exactly when the start type equals the required last type.
Parity parity_before(const BlossomFamily& fam, BlossomId b, EdgeId next, const EdgeSubset& F) {
  const bool last_type = !F.contains(next);
  return start_type(fam, b, F) == last_type ? Parity::kOdd : Parity::kEven;
}

class WalkBuilder {
 public:
  WalkBuilder(const MultiGraph& g, const BlossomFamily& fam, const EdgeSubset& F,
              std::vector<EdgeId>& out)
      : g_(g), fam_(fam), F_(F), out_(out) {}

  void from_base(BlossomId b, VertexId v, Parity parity) {
    const Blossom& B = fam_.at(b);
    const bool t0 = start_type(fam_, b, F_);
    const int k = fam_.child_index(b, v);
    if (k == 0) {
      const NodeId c0 = B.children[0];
      if (!fam_.is_vertex_node(c0)) {
        from_base(fam_.blossom_of(c0), v, parity);
      } else if (parity == Parity::kOdd) {
        full_cycle(b);
      }
      return;
    }
    const NodeId ck = B.children[k];
    if (fam_.is_vertex_node(ck)) {
      const bool forward_odd = t0 == F_.contains(B.cycle[k - 1]);
      if (forward_odd == (parity == Parity::kOdd))
        forward(b, k);
      else
        backward(b, k);
      return;
    }
    const EdgeId eta_k = fam_.at(fam_.blossom_of(ck)).eta;
    if (eta_k == B.cycle[k - 1])
      forward(b, k);
    else if (eta_k == B.cycle[k])
      backward(b, k);
    else
      throw StructuralError("sub-blossom base edge is not on the blossom cycle");
    const bool prefix_odd = t0 == F_.contains(eta_k);
    const bool want_odd = (parity == Parity::kOdd) != prefix_odd;
    from_base(fam_.blossom_of(ck), v, want_odd ? Parity::kOdd : Parity::kEven);
  }

  void through(NodeId x, VertexId from, EdgeId in, VertexId to, EdgeId out) {
    if (fam_.is_vertex_node(x) || (in == -1 && out == -1)) return;
    const BlossomId b = fam_.blossom_of(x);
    const EdgeId eta = fam_.at(b).eta;
    if (in == -1 || (in == eta && out != -1)) {
      from_base(b, to, parity_before(fam_, b, out, F_));
    } else if (out == -1 || out == eta) {
      std::vector<EdgeId> tmp;
      WalkBuilder sub(g_, fam_, F_, tmp);
      sub.from_base(b, from, parity_before(fam_, b, in, F_));
      out_.insert(out_.end(), tmp.rbegin(), tmp.rend());
    } else {
      throw StructuralError("walk through blossom does not use its base edge");
    }
  }

 private:
  void leave_base_child(BlossomId b, EdgeId first) {
    const NodeId c0 = fam_.at(b).children[0];
    if (fam_.is_vertex_node(c0)) return;
    const BlossomId cb = fam_.blossom_of(c0);
    from_base(cb, endpoint_in(g_, fam_, first, c0), parity_before(fam_, cb, first, F_));
  }

  void pass_child(BlossomId b, int i, EdgeId in, EdgeId out) {
    const NodeId c = fam_.at(b).children[i];
    through(c, endpoint_in(g_, fam_, in, c), in, endpoint_in(g_, fam_, out, c), out);
  }

  void forward(BlossomId b, int k) {
    const Blossom& B = fam_.at(b);
    leave_base_child(b, B.cycle[0]);
    out_.push_back(B.cycle[0]);
    for (int i = 1; i < k; ++i) {
      pass_child(b, i, B.cycle[i - 1], B.cycle[i]);
      out_.push_back(B.cycle[i]);
    }
  }

  void backward(BlossomId b, int k) {
    const Blossom& B = fam_.at(b);
    const int l = static_cast<int>(B.children.size());
    leave_base_child(b, B.cycle[l - 1]);
    out_.push_back(B.cycle[l - 1]);
    for (int i = l - 1; i > k; --i) {
      pass_child(b, i, B.cycle[i], B.cycle[i - 1]);
      out_.push_back(B.cycle[i - 1]);
    }
  }

  void full_cycle(BlossomId b) {
    const Blossom& B = fam_.at(b);
    const int l = static_cast<int>(B.children.size());
    out_.push_back(B.cycle[0]);
    for (int i = 1; i < l; ++i) {
      pass_child(b, i, B.cycle[i - 1], B.cycle[i]);
      out_.push_back(B.cycle[i]);
    }
  }

  const MultiGraph& g_;
  const BlossomFamily& fam_;
  const EdgeSubset& F_;
  std::vector<EdgeId>& out_;
};

}  // namespace

std::vector<EdgeId> boundary(const MultiGraph& g, const BlossomFamily& fam, BlossomId b) {
  const auto mark = member_mask(fam, b);
  std::vector<EdgeId> out;
  for (VertexId v : fam.at(b).members)
    for (int h : g.incident(v))
      if (!mark[g.head(h)]) out.push_back(edge_of(h));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> i_set(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                          const EdgeSubset& F) {
  std::vector<EdgeId> out;
  const EdgeId eta = fam.at(b).eta;
  bool eta_seen = false;
  for (EdgeId e : boundary(g, fam, b)) {
    if (e == eta) {
      eta_seen = true;
      if (!F.contains(e)) out.push_back(e);
    } else if (F.contains(e)) {
      out.push_back(e);
    }
  }
  if (eta != -1 && !eta_seen) throw StructuralError("base edge is not on the blossom boundary");
  return out;
}

namespace {
bool mature_impl(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                 const EdgeSubset& F, bool cover) {
  const Blossom& B = fam.at(b);
  for (VertexId v : B.members)
    if (v != B.base && F.degree(v) != g.demand(v)) return false;
  const int slack = cover ? F.degree(B.base) - g.demand(B.base)
                          : g.demand(B.base) - F.degree(B.base);
  if (slack == 0) return B.eta != -1;
  if (slack == 1) return B.eta == -1 && (is_light(fam, b, F) != cover);
  return false;
}
}  // namespace

bool is_mature_factor(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                      const EdgeSubset& F) {
  return mature_impl(g, fam, b, F, false);
}

bool is_mature_cover(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                     const EdgeSubset& C) {
  return mature_impl(g, fam, b, C, true);
}

std::optional<std::string> blossom_structure_error(const MultiGraph& g,
                                                   const BlossomFamily& fam, BlossomId b,
                                                   const EdgeSubset& F) {
  const Blossom& B = fam.at(b);
  const int l = static_cast<int>(B.children.size());
  if (l == 0 || static_cast<int>(B.cycle.size()) != l) return "cycle length mismatch";
  for (int i = 0; i < l; ++i) {
    const Edge& ed = g.edge(B.cycle[i]);
    const NodeId a = B.children[i], c = B.children[(i + 1) % l];
    const bool ok = (in_node(fam, a, ed.u) && in_node(fam, c, ed.v)) ||
                    (in_node(fam, a, ed.v) && in_node(fam, c, ed.u));
    if (!ok) return "cycle edge " + std::to_string(B.cycle[i]) + " does not join its children";
  }
  const NodeId c0 = B.children[0];
  if (fam.is_vertex_node(c0)) {
    if (F.contains(B.cycle[0]) != F.contains(B.cycle[l - 1])) return "base requirement";
  }
  for (int i = 1; i < l; ++i) {
    const NodeId c = B.children[i];
    const EdgeId prev = B.cycle[i - 1], next = B.cycle[i];
    if (fam.is_vertex_node(c)) {
      if (F.contains(prev) == F.contains(next))
        return "alternation at singleton " + std::to_string(c);
    } else {
      const EdgeId eta = fam.at(fam.blossom_of(c)).eta;
      if (eta == -1 || (eta != prev && eta != next))
        return "alternation at sub-blossom " + std::to_string(fam.blossom_of(c));
    }
  }
  if (!fam.is_vertex_node(c0)) {
    if (B.eta != fam.at(fam.blossom_of(c0)).eta) return "base edge differs from base child";
  } else if (B.eta != -1) {
    const Edge& ed = g.edge(B.eta);
    const bool at_base = ed.u == B.base || ed.v == B.base;
    const bool crossing = fam.contains(b, ed.u) != fam.contains(b, ed.v);
    if (!at_base || !crossing) return "base edge not in delta(beta) cap delta(B)";
    if (F.contains(B.eta) == F.contains(B.cycle[0])) return "base edge has the cycle's type";
  }
  if (B.base != fam.node_base(c0)) return "base vertex differs from base child";
  return std::nullopt;
}

std::vector<EdgeId> alternating_walk(const MultiGraph& g, const BlossomFamily& fam,
                                     BlossomId b, VertexId v, Parity parity,
                                     const EdgeSubset& F) {
  std::vector<EdgeId> out;
  WalkBuilder(g, fam, F, out).from_base(b, v, parity);
  return out;
}

std::vector<EdgeId> walk_through(const MultiGraph& g, const BlossomFamily& fam, NodeId x,
                                 VertexId from, EdgeId in, VertexId to, EdgeId out,
                                 const EdgeSubset& F) {
  std::vector<EdgeId> res;
  WalkBuilder(g, fam, F, res).through(x, from, in, to, out);
  return res;
}

BlossomId contract(const MultiGraph& g, BlossomFamily& fam, const BlossomSpec& spec,
                   const EdgeSubset& F) {
  const BlossomId b = fam.contract_unchecked(spec);
  std::optional<std::string> err = blossom_structure_error(g, fam, b, F);
  if (!err && !is_mature_factor(g, fam, b, F)) err = "immature blossom";
  if (err) {
    fam.dissolve_root_unchecked(b);
    throw StructuralError("cannot contract: " + *err);
  }
  return b;
}

bool family_consistent(const BlossomFamily& fam) {
  const int n = fam.num_vertices();
  std::vector<std::vector<char>> sets;
  std::vector<BlossomId> ids = fam.alive_ids();
  for (BlossomId b : ids) {
    const Blossom& B = fam.at(b);
    std::vector<VertexId> expect;
    for (NodeId c : B.children) {
      if (fam.is_vertex_node(c)) {
        if (fam.innermost(c) != b) return false;
        expect.push_back(c);
      } else {
        const BlossomId cb = fam.blossom_of(c);
        if (!fam.alive(cb) || fam.at(cb).parent != b) return false;
        expect.insert(expect.end(), fam.at(cb).members.begin(), fam.at(cb).members.end());
      }
    }
    std::vector<VertexId> got = B.members;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    if (expect != got || std::adjacent_find(got.begin(), got.end()) != got.end()) return false;
    std::vector<char> s(n, 0);
    for (VertexId v : got) s[v] = 1;
    sets.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      bool inter = false, i_in_j = true, j_in_i = true;
      for (int v = 0; v < n; ++v) {
        if (sets[i][v] && sets[j][v]) inter = true;
        if (sets[i][v] && !sets[j][v]) i_in_j = false;
        if (sets[j][v] && !sets[i][v]) j_in_i = false;
      }
      if (inter && !i_in_j && !j_in_i) return false;
    }
  for (VertexId v = 0; v < n; ++v) {
    BlossomId b = fam.innermost(v);
    NodeId expect = v;
    while (b != -1) {
      expect = fam.node_of_blossom(b);
      b = fam.at(b).parent;
    }
    if (fam.top(v) != expect) return false;
  }
  return true;
}

}  // namespace gfactor
