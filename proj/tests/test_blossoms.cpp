#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "gfactor/blossoms.hpp"
#include "gfactor/io.hpp"
#include "gfactor/solvers.hpp"

using namespace gfactor;
using testing::make_graph;

namespace {

BlossomId triangle_blossom(BlossomFamily& fam, EdgeId eta = -1) {
  return fam.contract_unchecked({{0, 1, 2}, {0, 1, 2}, eta});
}

std::vector<EdgeId> cycle_edges(const BlossomFamily& fam, BlossomId b) {
  std::vector<EdgeId> out(fam.at(b).cycle);
  for (NodeId c : fam.at(b).children)
    if (!fam.is_vertex_node(c)) {
      auto sub = cycle_edges(fam, fam.blossom_of(c));
      out.insert(out.end(), sub.begin(), sub.end());
    }
  return out;
}

// Independent walk check: starts at the base, stays in E_B, alternates,
// first edge of the start type, ends at v with the requested parity.
bool valid_inner_walk(const MultiGraph& g, const BlossomFamily& fam, BlossomId b, VertexId v,
                      Parity parity, const EdgeSubset& F, const std::vector<EdgeId>& walk) {
  const auto eb = cycle_edges(fam, b);
  const std::set<EdgeId> allowed(eb.begin(), eb.end());
  VertexId cur = fam.at(b).base;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const EdgeId e = walk[i];
    if (!allowed.count(e)) return false;
    const Edge& ed = g.edge(e);
    if (ed.u != cur && ed.v != cur) return false;
    cur = ed.u == cur ? ed.v : ed.u;
    if (i == 0 && F.contains(e) != start_type(fam, b, F)) return false;
    if (i > 0 && F.contains(e) == F.contains(walk[i - 1])) return false;
  }
  const bool odd = walk.size() % 2 == 1;
  return cur == v && odd == (parity == Parity::kOdd);
}

}  // namespace

TEST_CASE("i_set is boundary matches xor base edge") {
  // Triangle 0-1-2 plus outside vertices 3, 4, 5.
  const auto g = make_graph(6,
                            {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 3, 1}, {1, 4, 1}, {0, 5, 1},
                             {3, 4, 1}, {2, 5, 1}},
                            {2, 1, 2, 1, 1, 1});
  const EdgeSubset F(g, std::vector<EdgeId>{3, 7});
  {
    BlossomFamily fam(6);
    const BlossomId b = triangle_blossom(fam);
    CHECK(i_set(g, fam, b, F) == std::vector<EdgeId>{3, 7});
  }
  {
    BlossomFamily fam(6);
    const BlossomId b = triangle_blossom(fam, 3);
    CHECK(i_set(g, fam, b, F) == std::vector<EdgeId>{7});
  }
  {
    BlossomFamily fam(6);
    const BlossomId b = triangle_blossom(fam, 5);
    CHECK(i_set(g, fam, b, F) == std::vector<EdgeId>{3, 5, 7});
  }
}

TEST_CASE("maturity of triangle blossoms") {
  SUBCASE("saturated with a matched base edge") {
    const auto g = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 3, 1}}, {1, 1, 1, 1});
    const EdgeSubset F(g, std::vector<EdgeId>{1, 3});
    BlossomFamily fam(4);
    const BlossomId b = triangle_blossom(fam, 3);
    CHECK_FALSE(blossom_structure_error(g, fam, b, F).has_value());
    CHECK(is_light(fam, b, F));
    CHECK(is_mature_factor(g, fam, b, F));
  }
  SUBCASE("heavy with deficient base") {
    const auto g = testing::triangle(1, 1, 1, {3, 1, 1});
    const EdgeSubset F(g, std::vector<EdgeId>{0, 2});
    BlossomFamily fam(3);
    const BlossomId b = triangle_blossom(fam);
    CHECK_FALSE(blossom_structure_error(g, fam, b, F).has_value());
    CHECK_FALSE(is_light(fam, b, F));
    CHECK_FALSE(is_mature_factor(g, fam, b, F));
  }
  SUBCASE("base deficiency two") {
    const auto g = testing::triangle(1, 1, 1, {2, 1, 1});
    const EdgeSubset F(g, std::vector<EdgeId>{1});
    BlossomFamily fam(3);
    const BlossomId b = triangle_blossom(fam);
    CHECK_FALSE(is_mature_factor(g, fam, b, F));
  }
}

TEST_CASE("maturity for covers mirrors factors") {
  // Complement of the saturated light triangle above is a heavy cover blossom.
  const auto g = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 3, 1}}, {2, 1, 1, 0});
  SUBCASE("no surplus") {
    const EdgeSubset C(g, std::vector<EdgeId>{0, 2});
    BlossomFamily fam(4);
    const BlossomId b = triangle_blossom(fam, 3);
    CHECK(is_mature_cover(g, fam, b, C));
  }
  SUBCASE("surplus two at the base") {
    const auto g2 = g.with_demand({0, 1, 1, 0});
    const EdgeSubset C(g2, std::vector<EdgeId>{0, 2});
    BlossomFamily fam(4);
    const BlossomId b = triangle_blossom(fam);
    CHECK_FALSE(is_mature_cover(g2, fam, b, C));
  }
  SUBCASE("surplus at a non-base vertex") {
    const EdgeSubset C(g, std::vector<EdgeId>{0, 1, 2});
    BlossomFamily fam(4);
    const BlossomId b = triangle_blossom(fam);
    CHECK_FALSE(is_mature_cover(g, fam, b, C));
  }
}

TEST_CASE("alternating walks inside a triangle") {
  const auto g = testing::triangle();
  const EdgeSubset F(g, std::vector<EdgeId>{1});
  BlossomFamily fam(3);
  const BlossomId b = triangle_blossom(fam);
  CHECK(alternating_walk(g, fam, b, 0, Parity::kEven, F).empty());
  CHECK(alternating_walk(g, fam, b, 1, Parity::kOdd, F) == std::vector<EdgeId>{0});
  CHECK(alternating_walk(g, fam, b, 1, Parity::kEven, F) == std::vector<EdgeId>{2, 1});
  const auto closed = alternating_walk(g, fam, b, 0, Parity::kOdd, F);
  CHECK(closed.size() == 3);
  CHECK(valid_inner_walk(g, fam, b, 0, Parity::kOdd, F, closed));
}

TEST_CASE("contract and dissolve update the maximal blossom") {
  BlossomFamily fam(4);
  const BlossomId b = triangle_blossom(fam);
  for (VertexId v : {0, 1, 2}) CHECK(fam.top(v) == fam.node_of_blossom(b));
  CHECK(fam.top(3) == 3);
  CHECK(fam.at(b).base == 0);
  fam.dissolve_root(b);
  for (VertexId v : {0, 1, 2}) CHECK(fam.top(v) == v);
  CHECK(fam.empty());
}

TEST_CASE("dissolve_root refuses positive z") {
  BlossomFamily fam(3);
  const BlossomId b = triangle_blossom(fam);
  fam.at(b).z = 2;
  CHECK_THROWS_AS(fam.dissolve_root(b), StructuralError);
}

TEST_CASE("laminarity under random contract and dissolve") {
  std::mt19937 rng(11);
  const int n = 12;
  for (int round = 0; round < 100; ++round) {
    BlossomFamily fam(n);
    for (int step = 0; step < 30; ++step) {
      std::vector<NodeId> roots;
      for (VertexId v = 0; v < n; ++v)
        if (fam.top(v) == v) roots.push_back(v);
      for (BlossomId b : fam.roots()) roots.push_back(fam.node_of_blossom(b));
      std::shuffle(roots.begin(), roots.end(), rng);
      if (rng() % 3 != 0 && roots.size() >= 2) {
        const std::size_t k = 1 + rng() % std::min<std::size_t>(roots.size(), 5);
        std::vector<NodeId> kids(roots.begin(), roots.begin() + k);
        fam.contract_unchecked({kids, std::vector<EdgeId>(k, 0), -1});
      } else if (!fam.empty()) {
        const auto rs = fam.roots();
        fam.dissolve_root(rs[rng() % rs.size()]);
      }
      REQUIRE(family_consistent(fam));
      // From-scratch laminarity over member sets.
      const auto ids = fam.alive_ids();
      for (BlossomId a : ids)
        for (BlossomId c : ids) {
          std::set<VertexId> A(fam.at(a).members.begin(), fam.at(a).members.end());
          std::set<VertexId> C(fam.at(c).members.begin(), fam.at(c).members.end());
          std::vector<VertexId> both;
          std::set_intersection(A.begin(), A.end(), C.begin(), C.end(), std::back_inserter(both));
          const bool ok = both.empty() || both.size() == A.size() || both.size() == C.size();
          REQUIRE(ok);
        }
      for (VertexId v = 0; v < n; ++v) {
        const NodeId t = fam.top(v);
        if (fam.is_vertex_node(t)) {
          CHECK(t == v);
          CHECK(fam.innermost(v) == -1);
        } else {
          CHECK(fam.at(fam.blossom_of(t)).parent == -1);
          CHECK(fam.contains(fam.blossom_of(t), v));
        }
      }
    }
  }
}

TEST_CASE("walks in nested blossoms found during solving") {
  int nested = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    c.n = 10;
    c.m = 18;
    const MultiGraph g = generate_instance(c);
    SolveConfig cfg;
    cfg.eps = Rational(1, 4);
    cfg.after_search = [&](const EdmondsState& s, std::span<const char>) {
      for (BlossomId b : s.omega.alive_ids()) {
        const Blossom& B = s.omega.at(b);
        const bool has_sub = std::any_of(B.children.begin(), B.children.end(),
                                         [&](NodeId x) { return !s.omega.is_vertex_node(x); });
        nested += has_sub;
        for (VertexId v : B.members)
          for (Parity p : {Parity::kEven, Parity::kOdd}) {
            const auto walk = alternating_walk(g, s.omega, b, v, p, s.F);
            REQUIRE(valid_inner_walk(g, s.omega, b, v, p, s.F, walk));
          }
      }
    };
    solve_small_weight(g, cfg.eps, cfg);
  }
  CHECK(nested > 0);
}
