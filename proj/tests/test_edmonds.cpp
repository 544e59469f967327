#include "doctest.h"
#include "helpers.hpp"

#include <functional>

#include "gfactor/edmonds.hpp"
#include "gfactor/io.hpp"
#include "gfactor/solvers.hpp"

using namespace gfactor;
using testing::make_graph;

namespace {

struct Snapshot {
  MultiGraph g;
  EdgeSubset F;
  std::vector<DualUnits> y;
  std::vector<char> mask;
};

// Post-step-1 states without blossoms, taken from small-weight runs.
std::vector<Snapshot> flat_states(int seeds) {
  std::vector<Snapshot> out;
  for (int seed = 1; seed <= seeds; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    c.n = 6;
    c.m = 10;
    const MultiGraph g = generate_instance(c);
    SolveConfig cfg;
    cfg.after_search = [&](const EdmondsState& s, std::span<const char> mask) {
      if (s.omega.empty())
        out.push_back({g, s.F, s.y, std::vector<char>(mask.begin(), mask.end())});
    };
    solve_small_weight(g, Rational(1, 2), cfg);
  }
  return out;
}

// Labels by exhaustive trail enumeration: a vertex reached by an unmatched
// last edge is inner, by a matched one outer; roots are outer.
void brute_labels(const MultiGraph& g, const EdgeSubset& F, const std::vector<char>& mask,
                  std::vector<char>& out, std::vector<char>& in) {
  const int n = g.num_vertices();
  out.assign(n, 0);
  in.assign(n, 0);
  std::vector<char> used(g.num_edges(), 0);
  std::function<void(VertexId, bool)> dfs = [&](VertexId v, bool last_matched) {
    for (int h : g.incident(v)) {
      const EdgeId e = edge_of(h);
      if (used[e] || !mask[e] || F.contains(e) == last_matched) continue;
      const VertexId u = g.head(h);
      (F.contains(e) ? out : in)[u] = 1;
      used[e] = 1;
      dfs(u, F.contains(e));
      used[e] = 0;
    }
  };
  for (VertexId v = 0; v < n; ++v) {
    if (g.demand(v) - F.degree(v) < 1) continue;
    out[v] = 1;
    dfs(v, true);  // the first edge must be unmatched
  }
}

}  // namespace

TEST_CASE("uniform eligibility") {
  CHECK(eligible_uniform(123, 10, 2, false, true));
  CHECK_FALSE(eligible_uniform(10, 10, 2, false, false));
  CHECK(eligible_uniform(8, 10, 2, false, false));
  CHECK(eligible_uniform(10, 10, 2, true, false));
  CHECK_FALSE(eligible_uniform(12, 10, 2, true, false));
}

TEST_CASE("scaled eligibility") {
  CHECK(eligible_scaled(10 + 3 * 4, 10, 4, true, false));
  CHECK_FALSE(eligible_scaled(10 - 4, 10, 4, true, false));
  CHECK_FALSE(eligible_scaled(10 + 2, 10, 4, true, false));
  CHECK(eligible_scaled(10 - 4, 10, 4, false, false));
  CHECK_FALSE(eligible_scaled(10, 10, 4, false, false));
  CHECK(eligible_scaled(-50, 10, 4, false, true));
}

TEST_CASE("edge on a blossom cycle is eligible regardless of yz") {
  // Triangle blossom on 0,1,2 plus a pendant edge (2,3).
  const auto g = make_graph(4, {{0, 1, 5}, {1, 2, 5}, {2, 0, 5}, {2, 3, 5}}, {1, 1, 1, 1});
  EdmondsState s(g, {10, 10, 10, 10}, 2, 0);
  s.F.insert(g, 1);
  s.omega.contract_unchecked({{0, 1, 2}, {0, 1, 2}, -1});
  for (EdgeId e : {0, 1, 2}) {
    CHECK(is_eligible_uniform(s, e));
    CHECK(is_eligible_scaled(s, e));
  }
  CHECK_FALSE(is_eligible_uniform(s, 3));
  s.y = {0, 0, 4, 4};  // yz(2,3) = 8 = w - delta
  CHECK(is_eligible_uniform(s, 3));
}

TEST_CASE("iteration is a no-op once unsaturated duals reach the target") {
  const auto g = make_graph(2, {{0, 1, 1}}, {1, 1});
  EdmondsState s(g, {2}, 2, 0);
  const auto r = run_iteration(s);
  CHECK(r.done);
  CHECK(s.F.size() == 0);
  CHECK(s.y == std::vector<DualUnits>{0, 0});
}

TEST_CASE("single eligible edge is augmented in one iteration") {
  const auto g = make_graph(2, {{0, 1, 1}}, {1, 1});
  EdmondsState s(g, {4}, 2, 1);  // yz = 2 = w - delta
  s.debug = true;
  const auto r = run_iteration(s);
  CHECK_FALSE(r.done);
  CHECK(r.stats.augmentations == 1);
  CHECK(s.F.contains(0));
  CHECK(deficiency(g, s.F) == std::vector<int>{0, 0});
  CHECK(run_iteration(s).done);
}

TEST_CASE("isolated unsaturated vertex loses half a delta") {
  const auto g = make_graph(2, {{0, 1, 1}}, {1, 0});
  EdmondsState s(g, {8}, 2, 4);  // yz = w: dominated but not eligible
  s.debug = true;
  const auto r = run_iteration(s);
  CHECK_FALSE(r.done);
  CHECK(r.stats.augmentations == 0);
  CHECK(s.y[0] == 3);
  CHECK(s.y[1] == 4);
  CHECK(r.stats.y_removed == 1);
}

TEST_CASE("search set is empty without unsaturated vertices") {
  const auto g = make_graph(2, {{0, 1, 1}}, {1, 1});
  EdmondsState s(g, {2}, 2, 1);
  s.F.insert(g, 0);
  const auto yz = all_yz_factor(g, s.omega, s.y, s.F);
  const auto S = compute_search_set(s, eligibility_mask(s, yz));
  CHECK(S.v_out == std::vector<char>{0, 0});
  CHECK(S.v_in == std::vector<char>{0, 0});
}

TEST_CASE("a root does not leave through a matched edge") {
  const auto g = make_graph(2, {{0, 1, 1}}, {2, 1});
  EdmondsState s(g, {2}, 2, 1);  // matched with yz = w: eligible
  s.F.insert(g, 0);
  const auto yz = all_yz_factor(g, s.omega, s.y, s.F);
  const auto mask = eligibility_mask(s, yz);
  REQUIRE(mask[0]);
  const auto S = compute_search_set(s, mask);
  CHECK(S.v_out == std::vector<char>{1, 0});
  CHECK(S.v_in == std::vector<char>{0, 0});
}

TEST_CASE("search set labels match exhaustive reachability") {
  const auto states = flat_states(60);
  REQUIRE(states.size() > 50);
  for (const Snapshot& st : states) {
    EdmondsState s(st.g, std::vector<DualUnits>(st.g.num_edges(), 0), 2, 0);
    s.F = st.F;
    s.y = st.y;
    const SearchSet S = compute_search_set(s, st.mask);
    REQUIRE(S.conflicts == 0);
    std::vector<char> out, in;
    brute_labels(st.g, st.F, st.mask, out, in);
    CHECK(S.v_out == out);
    CHECK(S.v_in == in);
  }
}

TEST_CASE("augmented edges leave the eligible graph") {
  int checked = 0;
  for (int seed = 1; seed <= 80; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    const MultiGraph g = generate_instance(c);
    SolveConfig cfg;
    cfg.after_pass = [&](const EdmondsState& s, std::span<const char>, const WalkResult& r) {
      const auto yz = all_yz_factor(g, s.omega, s.y, s.F);
      const auto mask = eligibility_mask(s, yz);
      const auto cycle = blossom_edge_mask(g, s.omega);
      for (const Walk& w : r.walks)
        for (EdgeId e : w.edges) {
          if (cycle[e]) continue;
          CHECK_FALSE(mask[e]);
          ++checked;
        }
    };
    solve_small_weight(g, Rational(1, 4), cfg);
  }
  CHECK(checked > 100);
}

TEST_CASE("debug invariants hold and iterations stay within kW") {
  for (int seed = 1; seed <= 60; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    const MultiGraph g = generate_instance(c);
    const std::int64_t k = 3;
    const Weight W = std::max<Weight>(g.max_weight(), 1);
    std::vector<DualUnits> w(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) w[e] = 2 * k * g.edge(e).w;
    EdmondsState s(g, w, 2, k * W);
    s.debug = true;
    assert_invariants(s, "start");
    std::int64_t its = 0;
    while (!run_iteration(s).done) ++its;
    CHECK(its <= k * W);
    assert_invariants(s, "end");
    CHECK(validate_factor(g, s.F));
  }
}

TEST_CASE("debug switch reads the environment") {
  setenv("GFACTOR_DEBUG_ASSERT", "1", 1);
  CHECK(debug_from_env());
  setenv("GFACTOR_DEBUG_ASSERT", "0", 1);
  CHECK_FALSE(debug_from_env());
  unsetenv("GFACTOR_DEBUG_ASSERT");
  CHECK_FALSE(debug_from_env());
}
