#include "gfactor/edmonds.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <deque>

namespace gfactor {

EdmondsState::EdmondsState(const MultiGraph& graph, std::vector<DualUnits> weights,
                           DualUnits d, DualUnits y0)
    : g(&graph), F(graph), omega(graph.num_vertices()), y(graph.num_vertices(), y0), delta(d),
      w(std::move(weights)) {
  if (static_cast<int>(w.size()) != graph.num_edges())
    throw StructuralError("weight vector has the wrong length");
  if (delta < 2 || delta % 2 != 0) throw StructuralError("delta must be a positive even unit count");
}

bool eligible_uniform(DualUnits yz, DualUnits w, DualUnits delta, bool matched, bool blossom_edge) {
  if (blossom_edge) return true;
  return matched ? yz == w : yz == w - delta;
}

bool eligible_scaled(DualUnits yz, DualUnits w, DualUnits delta, bool matched, bool blossom_edge) {
  if (blossom_edge) return true;
  if (!matched) return yz == w - delta;
  const DualUnits d = yz - w;
  return d >= 0 && d % delta == 0;
}

namespace {

bool criterion(const EdmondsState& s, DualUnits yz, EdgeId e, bool blossom_edge) {
  const bool matched = s.F.contains(e);
  return s.mode == EligibilityMode::kUniform
             ? eligible_uniform(yz, s.w[e], s.delta, matched, blossom_edge)
             : eligible_scaled(yz, s.w[e], s.delta, matched, blossom_edge);
}

bool on_blossom_cycle(const BlossomFamily& fam, EdgeId e, const MultiGraph& g) {
  for (BlossomId b : fam.ancestors(g.edge(e).u))
    for (EdgeId c : fam.at(b).cycle)
      if (c == e) return true;
  return false;
}

int deficiency(const EdmondsState& s, VertexId v) { return s.g->demand(v) - s.F.degree(v); }

void structural_fail(const char* where, const std::string& what) {
  throw StructuralError(std::string(where) + ": " + what);
}

void check_blossoms(const EdmondsState& s, const char* where) {
  const MultiGraph& g = *s.g;
  if (!family_consistent(s.omega)) structural_fail(where, "blossom family bookkeeping");
  for (BlossomId b : s.omega.alive_ids()) {
    if (auto err = blossom_structure_error(g, s.omega, b, s.F))
      structural_fail(where, "blossom " + std::to_string(b) + ": " + *err);
    if (!is_mature_factor(g, s.omega, b, s.F))
      structural_fail(where, "blossom " + std::to_string(b) + " immature");
  }
}

}  // namespace

bool is_eligible_uniform(const EdmondsState& s, EdgeId e) {
  const DualUnits yz = yz_factor(*s.g, s.omega, s.y, s.F, e);
  return eligible_uniform(yz, s.w[e], s.delta, s.F.contains(e), on_blossom_cycle(s.omega, e, *s.g));
}

bool is_eligible_scaled(const EdmondsState& s, EdgeId e) {
  const DualUnits yz = yz_factor(*s.g, s.omega, s.y, s.F, e);
  return eligible_scaled(yz, s.w[e], s.delta, s.F.contains(e), on_blossom_cycle(s.omega, e, *s.g));
}

std::vector<char> eligibility_mask(const EdmondsState& s, std::span<const DualUnits> yz) {
  const MultiGraph& g = *s.g;
  std::vector<char> mask = blossom_edge_mask(g, s.omega);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (mask[e]) continue;
    if (!s.active.empty() && !s.active[e]) continue;
    mask[e] = criterion(s, yz[e], e, false) ? 1 : 0;
  }
  return mask;
}

DualUnits unsaturated_dual(const EdmondsState& s) {
  for (VertexId v = 0; v < s.g->num_vertices(); ++v)
    if (deficiency(s, v) >= 1) return s.y[v];
  return -1;
}

SearchSet compute_search_set(const EdmondsState& s, std::span<const char> eligible) {
  const MultiGraph& g = *s.g;
  const BlossomFamily& fam = s.omega;
  const int n = g.num_vertices();
  SearchSet S;
  const int cap = n + fam.capacity();
  S.reached.assign(cap, 0);
  S.label.assign(cap, Label::kOuter);
  S.v_out.assign(n, 0);
  S.v_in.assign(n, 0);

  std::deque<NodeId> queue;
  for (VertexId v = 0; v < n; ++v) {
    if (deficiency(s, v) < 1) continue;
    const NodeId x = fam.top(v);
    if (!fam.is_vertex_node(x)) {
      const BlossomId b = fam.blossom_of(x);
      if (fam.at(b).base != v || fam.at(b).eta != -1 || !is_light(fam, b, s.F)) continue;
    }
    if (S.reached[x]) continue;
    S.reached[x] = 1;
    S.label[x] = Label::kOuter;
    queue.push_back(x);
  }

  auto visit = [&](NodeId x, int h) {
    const EdgeId e = edge_of(h);
    if (!eligible[e]) return;
    const bool nontrivial = !fam.is_vertex_node(x);
    if (!eligible_for(S.label[x], nontrivial, fam.node_eta(x), e, s.F)) return;
    const NodeId y = fam.top(g.head(h));
    const bool y_nontrivial = !fam.is_vertex_node(y);
    if (y == x) {
      if (!nontrivial) ++S.conflicts;  // an eligible loop closes a blossom
      return;
    }
    if (!S.reached[y]) {
      S.reached[y] = 1;
      S.label[y] = classify_inner_outer(y_nontrivial, fam.node_eta(y), e, s.F);
      queue.push_back(y);
    } else if (eligible_for(S.label[y], y_nontrivial, fam.node_eta(y), e, s.F)) {
      ++S.conflicts;
    }
  };

  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    if (fam.is_vertex_node(x)) {
      for (int h : g.incident(x)) visit(x, h);
      continue;
    }
    const BlossomId b = fam.blossom_of(x);
    if (S.label[x] == Label::kInner) {
      const EdgeId eta = fam.at(b).eta;
      if (eta != -1) visit(x, half_edge(eta, fam.top(g.edge(eta).u) == x ? 0 : 1));
      continue;
    }
    for (VertexId v : fam.at(b).members)
      for (int h : g.incident(v))
        if (fam.top(g.head(h)) != x) visit(x, h);
  }

  for (NodeId x = 0; x < cap; ++x) {
    if (!S.reached[x]) continue;
    const bool outer = S.label[x] == Label::kOuter;
    for (VertexId v : fam.node_members(x)) (outer ? S.v_out : S.v_in)[v] = 1;
    if (!fam.is_vertex_node(x))
      (outer ? S.outer_roots : S.inner_roots).push_back(fam.blossom_of(x));
  }
  return S;
}

void assert_invariants(const EdmondsState& s, const char* where) {
  const MultiGraph& g = *s.g;
  if (!s.F.cache_consistent(g)) structural_fail(where, "matched-degree cache");
  if (!validate_factor(g, s.F)) structural_fail(where, "F exceeds a demand");
  check_blossoms(s, where);
  InvariantSpec spec;
  spec.delta = s.delta;
  spec.w = s.w;
  if (s.mode == EligibilityMode::kScaled) spec.tight_allowance = s.tight_allowance;
  spec.active = s.active;
  const auto failures = check_invariant(g, s.F, s.y, s.omega, spec);
  if (!failures.empty())
    structural_fail(where, failures.front().clause + " (" + failures.front().witness + ")");
}

IterationResult run_iteration(EdmondsState& s) {
  IterationResult out;
  const DualUnits uy = unsaturated_dual(s);
  if (uy < 0 || uy <= s.y_target) {
    out.done = true;
    return out;
  }
  const MultiGraph& g = *s.g;
  IterationStats& st = out.stats;
  const auto yz = all_yz_factor(g, s.omega, s.y, s.F);

  SearchOptions opt;
  opt.validate = s.debug;
  std::vector<char> mask;
  for (;;) {
    mask = eligibility_mask(s, yz);
    WalkResult res = find_augmenting_walks(g, s.F, s.omega, mask, opt);
    ++st.passes;
    st.max_scans = std::max(st.max_scans, res.scans);
    if (s.debug && res.scans > 2 * static_cast<std::int64_t>(g.num_edges()))
      throw StructuralError("search scanned more than 2m half-edges");
    if (s.debug && res.heavy_unsaturated)
      throw StructuralError("unsaturated heavy blossom met during search");
    if (s.after_pass) s.after_pass(s, mask, res);
    if (res.walks.empty()) {
      st.contractions += static_cast<int>(res.new_blossoms.size());
      // A cycle edge gets the same tightness allowance as a matched edge,
      // counted from the scale it joined the blossom.
      if (s.mode == EligibilityMode::kScaled)
        for (BlossomId b : res.new_blossoms)
          for (EdgeId e : s.omega.at(b).cycle)
            if (s.first_scale[e] < 0) {
              s.first_scale[e] = s.scale;
              s.tight_allowance[e] = 0;
            }
      break;
    }
    st.augmentations += static_cast<int>(res.walks.size());
    if (s.mode == EligibilityMode::kScaled) {
      for (const Walk& w : res.walks)
        for (EdgeId e : w.edges)
          if (s.F.contains(e) && s.first_scale[e] < 0) {
            s.first_scale[e] = s.scale;
            s.tight_allowance[e] = 0;
          }
    }
    // Blossoms found while augmenting are rediscovered by the next pass.
    for (auto it = res.new_blossoms.rbegin(); it != res.new_blossoms.rend(); ++it)
      s.omega.dissolve_root(*it);
    if (s.debug) {
      check_blossoms(s, "augmentation");
      if (all_yz_factor(g, s.omega, s.y, s.F) != yz)
        structural_fail("augmentation", "yz changed (I-set not preserved)");
    }
  }
  if (s.after_search) s.after_search(s, mask);

  const SearchSet S = compute_search_set(s, mask);
  const DualUnits half = s.delta / 2;
  if (s.debug) {
    if (S.conflicts != 0)
      structural_fail("search set", "edge eligible for both endpoints after step 1");
    int parity = -1;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (!S.v_out[v] && !S.v_in[v]) continue;
      const int p = static_cast<int>((s.y[v] / half) & 1);
      if (parity == -1) parity = p;
      else if (p != parity) structural_fail("parity", "vertex " + std::to_string(v));
    }
  }

  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (S.v_out[v]) {
      s.y[v] -= half;
      st.y_removed += half;
    } else if (S.v_in[v]) {
      s.y[v] += half;
    }
  }
  for (BlossomId b : S.outer_roots) s.omega.at(b).z += s.delta;
  for (BlossomId b : S.inner_roots) {
    if (s.omega.at(b).z < s.delta)
      structural_fail("dual adjustment", "inner blossom " + std::to_string(b) + " has z < delta");
    s.omega.at(b).z -= s.delta;
  }

  std::vector<BlossomId> work = s.omega.roots();
  while (!work.empty()) {
    const BlossomId b = work.back();
    work.pop_back();
    if (!s.omega.alive(b) || s.omega.at(b).parent != -1 || s.omega.at(b).z != 0) continue;
    const std::vector<NodeId> children = s.omega.at(b).children;
    s.omega.dissolve_root(b);
    ++st.dissolutions;
    for (NodeId c : children)
      if (!s.omega.is_vertex_node(c)) work.push_back(s.omega.blossom_of(c));
  }

  if (s.debug) assert_invariants(s, "dual adjustment");
  return out;
}

bool debug_from_env() {
  const char* v = std::getenv("GFACTOR_DEBUG_ASSERT");
  return v != nullptr && std::strcmp(v, "1") == 0;
}

}  // namespace gfactor
