#include "gfactor/search_aw.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace gfactor {

bool eligible_for(Label label, bool nontrivial, EdgeId eta, EdgeId e, const EdgeSubset& F) {
  if (!nontrivial) return label == Label::kOuter ? !F.contains(e) : F.contains(e);
  return label == Label::kOuter ? e != eta : e == eta;
}

Label classify_inner_outer(bool nontrivial, EdgeId eta, EdgeId tau, const EdgeSubset& F) {
  if (tau == -1) return Label::kOuter;
  if (!nontrivial) return F.contains(tau) ? Label::kOuter : Label::kInner;
  return tau == eta ? Label::kOuter : Label::kInner;
}

std::optional<std::string> augmenting_walk_error(const MultiGraph& g, const EdgeSubset& F,
                                                 const Walk& walk) {
  if (walk.edges.empty()) return "empty walk";
  if (walk.start < 0 || walk.start >= g.num_vertices()) return "bad start vertex";
  std::vector<EdgeId> sorted = walk.edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "repeated edge";
  VertexId cur = walk.start;
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    const EdgeId e = walk.edges[i];
    if (e < 0 || e >= g.num_edges()) return "edge id out of range";
    const Edge& ed = g.edge(e);
    if (ed.u != cur && ed.v != cur)
      return "edge " + std::to_string(e) + " does not continue the walk";
    cur = ed.u == cur ? ed.v : ed.u;
    if (i > 0 && F.contains(e) == F.contains(walk.edges[i - 1]))
      return "types do not alternate at edge " + std::to_string(e);
  }
  if (F.contains(walk.edges.front()) || F.contains(walk.edges.back()))
    return "walk must start and end with unmatched edges";
  auto def = [&](VertexId v) { return g.demand(v) - F.degree(v); };
  if (cur == walk.start) {
    if (def(cur) < 2) return "closed walk needs deficiency 2 at its end";
  } else if (def(walk.start) < 1 || def(cur) < 1) {
    return "walk ends are not both unsaturated";
  }
  return std::nullopt;
}

void apply_walk(const MultiGraph& g, EdgeSubset& F, BlossomFamily& fam, const Walk& walk) {
  std::map<BlossomId, std::vector<EdgeId>> crossing;
  if (!fam.empty()) {
    for (EdgeId e : walk.edges) {
      const Edge& ed = g.edge(e);
      const auto au = fam.ancestors(ed.u);
      const auto av = fam.ancestors(ed.v);
      std::size_t iu = au.size(), iv = av.size();
      while (iu > 0 && iv > 0 && au[iu - 1] == av[iv - 1]) {
        --iu;
        --iv;
      }
      for (std::size_t k = 0; k < iu; ++k) crossing[au[k]].push_back(e);
      for (std::size_t k = 0; k < iv; ++k) crossing[av[k]].push_back(e);
    }
  }
  for (EdgeId e : walk.edges) F.toggle(g, e);
  for (auto& [b, edges] : crossing) {
    std::vector<EdgeId> s = edges;
    if (fam.at(b).eta != -1) s.push_back(fam.at(b).eta);
    std::sort(s.begin(), s.end());
    std::vector<EdgeId> odd;
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      if ((j - i) % 2 == 1) odd.push_back(s[i]);
      i = j;
    }
    if (odd.size() > 1)
      throw StructuralError("walk leaves blossom " + std::to_string(b) +
                            " with more than one base edge");
    if (!odd.empty()) fam.rebase(g, b, odd.front());
    else fam.at(b).eta = -1;
  }
}

namespace {

class Search {
 public:
  Search(const MultiGraph& g, EdgeSubset& F, BlossomFamily& fam, std::span<const char> eligible,
         const SearchOptions& opt, WalkResult& res)
      : g_(g), F_(F), fam_(fam), elig_(eligible), opt_(opt), res_(res),
        scanned_(2 * g.num_edges(), 0), ever_(2 * g.num_edges(), 0), augmented_(g.num_edges(), 0),
        cur_out_(g.num_vertices(), 0), cur_in_(g.num_vertices(), 0),
        cur_blossom_(g.num_vertices(), 0), next_pending_(g.num_vertices(), -1),
        in_pending_(g.num_vertices(), 0), deferred_(2 * g.num_vertices()) {
    if (static_cast<int>(eligible.size()) != g.num_edges())
      throw StructuralError("eligibility mask has the wrong length");
  }

  void run() {
    const int n = g_.num_vertices();
    for (VertexId v = 0; v < n; ++v) {
      for (;;) {
        const NodeId x = fam_.top(v);
        if (deficiency(v) < 1) break;
        if (!fam_.is_vertex_node(x)) {
          const Blossom& B = fam_.at(fam_.blossom_of(x));
          if (B.base != v) break;
          if (B.eta != -1 || !is_light(fam_, fam_.blossom_of(x), F_)) {
            res_.heavy_unsaturated = true;
            break;
          }
        }
        if (state(x).root_done) break;
        if (!grow(x)) {
          state(root_).root_done = true;
          res_.exhausted_roots.push_back(v);
          break;
        }
      }
    }
  }

 private:
  struct NodeState {
    int tree = -1;
    Label label = Label::kOuter;
    EdgeId tau = -1;
    int released = -1;   // tree in which this node was found open
    NodeId parent = -1;
    int pre = -1;
    bool on_stack = false;
    bool root_done = false;
    bool pending_ready = false;
    VertexId head = -1;  // pending member vertices, scanned when outer
    VertexId tail = -1;
  };

  NodeState& state(NodeId x) {
    if (x >= static_cast<int>(st_.size())) st_.resize(x + 1);
    return st_[x];
  }

  // Tree parent as a current node: parents recorded before a contraction
  // may since have been absorbed into a larger blossom.
  NodeId parent_of(NodeId x) {
    const NodeId p = state(x).parent;
    return p == -1 ? -1 : fam_.top(fam_.node_base(p));
  }

  bool nontrivial(NodeId x) const { return !fam_.is_vertex_node(x); }
  int deficiency(VertexId v) const { return g_.demand(v) - F_.degree(v); }
  int node_deficiency(NodeId x) const { return deficiency(fam_.node_base(x)); }

  bool eligible_for_node(NodeId x, EdgeId e) {
    return eligible_for(state(x).label, nontrivial(x), fam_.node_eta(x), e, F_);
  }

  void note(const char* op, long id) {
    if (opt_.trace) res_.trace.push_back(std::string(op) + " " + std::to_string(id));
  }

  void ensure_pending(NodeId x) {
    NodeState& s = state(x);
    if (s.pending_ready || !nontrivial(x)) return;
    s.pending_ready = true;
    s.head = s.tail = -1;
    for (VertexId v : fam_.at(fam_.blossom_of(x)).members) append_pending(s, v);
  }

  void append_pending(NodeState& s, VertexId v) {
    next_pending_[v] = -1;
    in_pending_[v] = 1;
    if (s.tail == -1) s.head = v;
    else next_pending_[s.tail] = v;
    s.tail = v;
  }

  // Half-edges handed back by a successful tree, checked before the cursor.
  int take_deferred(VertexId v, int type, NodeId x, EdgeId eta) {
    auto& d = deferred_[2 * v + type];
    while (!d.empty()) {
      const int h = d.back();
      if (usable(h) && edge_of(h) != eta && fam_.top(g_.head(h)) != x) return h;
      d.pop_back();
    }
    return -1;
  }

  bool usable(int h) const {
    const EdgeId e = edge_of(h);
    return !scanned_[h] && !augmented_[e] && elig_[e];
  }

  // Next unscanned half-edge eligible for x, or -1.
  int next_half(NodeId x) {
    if (!nontrivial(x)) {
      const auto inc = g_.incident(x);
      const bool outer = state(x).label == Label::kOuter;
      if (int h = take_deferred(x, outer ? 0 : 1, -1, -1); h != -1) return h;
      int& c = outer ? cur_out_[x] : cur_in_[x];
      while (c < static_cast<int>(inc.size())) {
        const int h = inc[c];
        if (usable(h) && F_.contains(edge_of(h)) != outer) return h;
        ++c;
      }
      return -1;
    }
    const BlossomId b = fam_.blossom_of(x);
    const EdgeId eta = fam_.at(b).eta;
    if (state(x).label == Label::kInner) {
      if (eta == -1) return -1;
      const Edge& ed = g_.edge(eta);
      const int h = half_edge(eta, fam_.top(ed.u) == x ? 0 : 1);
      return usable(h) ? h : -1;
    }
    NodeState& s = state(x);
    while (s.head != -1) {
      const VertexId v = s.head;
      for (int type = 0; type < 2; ++type)
        if (int h = take_deferred(v, type, x, eta); h != -1) return h;
      const auto inc = g_.incident(v);
      int& c = cur_blossom_[v];
      while (c < static_cast<int>(inc.size())) {
        const int h = inc[c];
        if (usable(h) && edge_of(h) != eta && fam_.top(g_.head(h)) != x) return h;
        ++c;
      }
      in_pending_[v] = 0;
      s.head = next_pending_[v];
      if (s.head == -1) s.tail = -1;
    }
    return -1;
  }

  bool grow(NodeId r) {
    ++tree_;
    NodeState& s = state(r);
    s.tree = tree_;
    s.label = Label::kOuter;
    s.tau = -1;
    s.parent = -1;
    s.pre = clock_++;
    s.on_stack = true;
    ensure_pending(r);
    stack_.assign(1, r);
    root_ = r;
    tree_scans_.clear();
    tree_nodes_.assign(1, r);
    while (!stack_.empty()) {
      const NodeId x = stack_.back();
      const int h = next_half(x);
      if (h == -1) {
        state(x).on_stack = false;
        stack_.pop_back();
        note("retract", x);
        continue;
      }
      scanned_[h] = ever_[h] = 1;
      ++res_.scans;
      tree_scans_.push_back(h);
      if (process(x, h)) return true;
    }
    return false;
  }

  bool valid_terminal(NodeId y) {
    if (!nontrivial(y)) return true;
    const BlossomId b = fam_.blossom_of(y);
    if (fam_.at(b).eta == -1 && is_light(fam_, b, F_)) return true;
    res_.heavy_unsaturated = true;
    return false;
  }

  bool closes_at_root(NodeId y, EdgeId e) const {
    return y == root_ && !nontrivial(y) && deficiency(y) >= 2 && !F_.contains(e);
  }

  // Returns true when an augmentation ended the current tree.
  bool process(NodeId x, int h) {
    const EdgeId e = edge_of(h);
    const NodeId y = fam_.top(g_.head(h));
    if (y == x) {
      if (nontrivial(x)) return false;
      // loop at a singleton
      if (closes_at_root(x, e)) {
        augment_closed(e);
        return true;
      }
      return form(std::vector<NodeId>{x}, e);
    }
    NodeState& ys = state(y);
    if (ys.tree != tree_) {
      if (node_deficiency(y) >= 1 && (!F_.contains(e) || nontrivial(y)) && valid_terminal(y)) {
        augment_to(e, y);
        return true;
      }
      if (!nontrivial(y) || ys.tree == -1) {
        extend(x, e, y);
        return false;
      }
      return false;
    }
    if (ys.on_stack) {
      if (closes_at_root(y, e)) {
        augment_closed(e);
        return true;
      }
      if (!eligible_for_node(y, e)) return false;
      const auto it = std::find(stack_.begin(), stack_.end(), y);
      return form(std::vector<NodeId>(it, stack_.end()), e);
    }
    if (ys.pre > state(x).pre) {
      if (!eligible_for_node(y, e)) return false;
      std::vector<NodeId> path;
      for (NodeId p = y; p != x; p = parent_of(p)) path.push_back(p);
      path.push_back(x);
      std::reverse(path.begin(), path.end());
      return form(path, e);
    }
    return false;
  }

  void extend(NodeId x, EdgeId e, NodeId y) {
    NodeState& s = state(y);
    s.tree = tree_;
    s.tau = e;
    s.parent = x;
    s.pre = clock_++;
    s.on_stack = true;
    s.label = classify_inner_outer(nontrivial(y), fam_.node_eta(y), e, F_);
    if (s.label == Label::kOuter) ensure_pending(y);
    stack_.push_back(y);
    tree_nodes_.push_back(y);
    note("extend", e);
  }

  // Contracted walk: nodes[i] and nodes[i+1] are joined by edges[i].
  struct Contracted {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
  };

  Contracted stack_prefix(NodeId last) const {
    Contracted c;
    for (NodeId x : stack_) {
      if (!c.nodes.empty()) c.edges.push_back(st_[x].tau);
      c.nodes.push_back(x);
      if (x == last) break;
    }
    return c;
  }

  void augment_to(EdgeId e, NodeId y) {
    Contracted c = stack_prefix(stack_.back());
    c.edges.push_back(e);
    c.nodes.push_back(y);
    augment(c);
  }

  void augment_closed(EdgeId e) {
    Contracted c = stack_prefix(stack_.back());
    c.edges.push_back(e);
    c.nodes.push_back(root_);
    augment(c);
  }

  // `cycle` lists the blossom's nodes from its base downwards along tree
  // edges; `e` joins the last node back to the first.
  bool form(const std::vector<NodeId>& cycle, EdgeId e) {
    const NodeId a = cycle.front();
    const NodeId d = cycle.back();
    for (std::size_t i = 1; i < cycle.size(); ++i) {
      const NodeId s = cycle[i];
      if (nontrivial(s) || deficiency(s) < 1) continue;
      // root -> a, e, then back up the tree from d to the unsaturated singleton
      Contracted c = stack_prefix(a);
      c.edges.push_back(e);
      c.nodes.push_back(d);
      for (NodeId p = d; p != s; p = parent_of(p)) {
        c.edges.push_back(state(p).tau);
        c.nodes.push_back(parent_of(p));
      }
      augment(c);
      return true;
    }
    if (!nontrivial(a) && deficiency(a) >= (a == root_ ? 2 : 1)) {
      Contracted c = stack_prefix(a);
      for (std::size_t i = 1; i < cycle.size(); ++i) {
        c.edges.push_back(state(cycle[i]).tau);
        c.nodes.push_back(cycle[i]);
      }
      c.edges.push_back(e);
      c.nodes.push_back(a);
      augment(c);
      return true;
    }

    BlossomSpec spec;
    spec.children = cycle;
    for (std::size_t i = 1; i < cycle.size(); ++i) spec.cycle.push_back(state(cycle[i]).tau);
    spec.cycle.push_back(e);
    spec.eta = nontrivial(a) ? fam_.node_eta(a) : (a == root_ ? -1 : state(a).tau);
    for (NodeId c : cycle)
      if (nontrivial(c)) ensure_pending(c);

    const NodeState as = state(a);
    const BlossomId b = fam_.contract_unchecked(spec);
    if (opt_.validate) {
      auto err = blossom_structure_error(g_, fam_, b, F_);
      if (!err && !is_mature_factor(g_, fam_, b, F_)) err = "immature";
      if (err) throw StructuralError("search formed an invalid blossom: " + *err);
    }
    const NodeId nb = fam_.node_of_blossom(b);
    NodeState& s = state(nb);
    s = NodeState{};
    s.tree = tree_;
    s.label = Label::kOuter;
    s.tau = as.tau;
    s.parent = as.parent;
    s.pre = as.pre;
    s.on_stack = true;
    s.pending_ready = true;
    for (NodeId c : cycle) {
      VertexId h = c, t = c;
      if (nontrivial(c)) {
        h = state(c).head;
        t = state(c).tail;
      } else {
        next_pending_[c] = -1;
        in_pending_[c] = 1;
      }
      state(c).on_stack = false;
      if (h == -1) continue;
      if (s.tail == -1) s.head = h;
      else next_pending_[s.tail] = h;
      s.tail = t;
    }
    if (a == root_) root_ = nb;
    const auto it = std::find(stack_.begin(), stack_.end(), a);
    stack_.erase(it, stack_.end());
    stack_.push_back(nb);
    tree_nodes_.push_back(nb);
    res_.new_blossoms.push_back(b);
    note("blossom", e);
    return false;
  }

  VertexId endpoint_in_node(EdgeId e, NodeId x) const {
    const Edge& ed = g_.edge(e);
    return fam_.top(ed.u) == x ? ed.u : ed.v;
  }

  void augment(const Contracted& c) {
    Walk w;
    w.start = fam_.node_base(c.nodes.front());
    const std::size_t k = c.nodes.size();
    for (std::size_t i = 0; i < k; ++i) {
      const NodeId x = c.nodes[i];
      const EdgeId in = i > 0 ? c.edges[i - 1] : -1;
      const EdgeId out = i + 1 < k ? c.edges[i] : -1;
      if (nontrivial(x)) {
        const VertexId from = in == -1 ? fam_.node_base(x) : endpoint_in_node(in, x);
        const VertexId to = out == -1 ? fam_.node_base(x) : endpoint_in_node(out, x);
        const auto inner = walk_through(g_, fam_, x, from, in, to, out, F_);
        w.edges.insert(w.edges.end(), inner.begin(), inner.end());
      }
      if (out != -1) w.edges.push_back(out);
    }
    if (opt_.validate) {
      if (auto err = augmenting_walk_error(g_, F_, w))
        throw StructuralError("search produced a non-augmenting walk: " + *err);
    }
    apply_walk(g_, F_, fam_, w);
    for (EdgeId e : w.edges) augmented_[e] = 1;
    release_open_scans();
    // A successful tree is dissolved; its nodes may join later trees under
    // a different label.
    for (NodeId x : tree_nodes_) {
      state(x).tree = -1;
      state(x).on_stack = false;
    }
    stack_.clear();
    note("augment", c.edges.back());
    res_.walks.push_back(std::move(w));
  }

  // Scans into nodes still open when the tree ended would otherwise mark
  // edges as explored whose far side was never finished. A node whose own
  // scan is handed back is open again, so this runs to a fixed point.
  void release_open_scans() {
    std::unordered_map<NodeId, std::vector<int>> into;
    std::vector<NodeId> open;
    for (int h : tree_scans_) {
      if (augmented_[edge_of(h)] || !scanned_[h]) continue;
      const NodeId x = fam_.top(g_.tail(h));
      const NodeId y = fam_.top(g_.head(h));
      if (x == y) continue;
      into[y].push_back(h);
      if (state(y).on_stack && state(y).released != tree_) {
        state(y).released = tree_;
        open.push_back(y);
      }
    }
    while (!open.empty()) {
      const NodeId y = open.back();
      open.pop_back();
      const auto it = into.find(y);
      if (it == into.end()) continue;
      for (int h : it->second) {
        if (!scanned_[h]) continue;
        release(h);
        const NodeId x = fam_.top(g_.tail(h));
        if (state(x).released != tree_) {
          state(x).released = tree_;
          open.push_back(x);
        }
      }
    }
  }

  void release(int h) {
    const EdgeId e = edge_of(h);
    if (augmented_[e] || !scanned_[h]) return;
    scanned_[h] = 0;
    const VertexId v = g_.tail(h);
    deferred_[2 * v + (F_.contains(e) ? 1 : 0)].push_back(h);
    const NodeId x = fam_.top(v);
    if (nontrivial(x) && !in_pending_[v]) {
      NodeState& s = state(x);
      if (s.pending_ready) append_pending(s, v);
    }
  }

  const MultiGraph& g_;
  EdgeSubset& F_;
  BlossomFamily& fam_;
  std::span<const char> elig_;

 public:
  void export_explored() {
    res_.explored.assign(g_.num_edges(), 0);
    for (EdgeId e = 0; e < g_.num_edges(); ++e)
      res_.explored[e] = ever_[2 * e] || ever_[2 * e + 1];
  }

 private:
  const SearchOptions& opt_;
  WalkResult& res_;

  std::vector<char> scanned_;
  std::vector<char> ever_;  // scanned at some point, even if later handed back
  std::vector<char> augmented_;
  std::vector<int> cur_out_, cur_in_, cur_blossom_;
  std::vector<VertexId> next_pending_;
  std::vector<char> in_pending_;
  std::vector<std::vector<int>> deferred_;  // per vertex and edge type
  std::vector<int> tree_scans_;
  std::vector<NodeId> tree_nodes_;
  std::vector<NodeState> st_;
  std::vector<NodeId> stack_;
  NodeId root_ = -1;
  int tree_ = -1;
  int clock_ = 0;
};

}  // namespace

WalkResult find_augmenting_walks(const MultiGraph& g, EdgeSubset& F, BlossomFamily& fam,
                                 std::span<const char> eligible, const SearchOptions& opt) {
  WalkResult res;
  Search s(g, F, fam, eligible, opt, res);
  s.run();
  s.export_explored();
  return res;
}

}  // namespace gfactor
