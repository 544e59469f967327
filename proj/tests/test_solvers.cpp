#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <stdexcept>

#include "gfactor/io.hpp"
#include "gfactor/oracle.hpp"
#include "gfactor/solvers.hpp"

using namespace gfactor;
using testing::make_graph;
using testing::triangle;

namespace {

// value >= (1 - c eps) opt, exactly.
bool factor_within(Weight value, Weight opt, int c, Rational eps) {
  return value * eps.den >= (eps.den - c * eps.num) * opt;
}

// value <= (1 + c eps) opt, exactly.
bool cover_within(Weight value, Weight opt, int c, Rational eps) {
  return value * eps.den <= (eps.den + c * eps.num) * opt;
}

// opt <= bound for a rational bound.
bool at_most(Weight opt, Rational bound) { return opt * bound.den <= bound.num; }
bool at_least(Weight opt, Rational bound) { return opt * bound.den >= bound.num; }

MultiGraph suite_instance(int seed) {
  GeneratorConfig c;
  c.seed = static_cast<std::uint64_t>(seed);
  c.n = 2 + seed % 7;
  c.m = seed % 15;
  return generate_instance(c);
}

MultiGraph with_demand_one(const MultiGraph& g) {
  return g.with_demand(std::vector<int>(g.num_vertices(), 1));
}

}  // namespace

TEST_CASE("small-weight on a single edge") {
  const auto g = make_graph(2, {{0, 1, 5}}, {1, 1});
  const auto s = solve_small_weight(g, Rational(1, 2));
  CHECK(s.value == 5);
  CHECK(s.edges.contains(0));
  CHECK(s.report.pass);
}

TEST_CASE("small-weight on the (3,1,3) triangle picks a weight-3 edge") {
  const auto g = triangle(3, 1, 3);
  REQUIRE(exact_max_weight_factor(g).value == 3);
  const auto s = solve_small_weight(g, Rational(1, 4));
  CHECK(s.value == 3);
  CHECK(s.edges.size() == 1);
  CHECK(s.report.pass);
}

TEST_CASE("eps outside (0,1) and nonpositive weights are rejected") {
  const auto g = make_graph(2, {{0, 1, 5}}, {1, 1});
  CHECK_THROWS_AS(solve_small_weight(g, Rational(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(solve_scaling(g, Rational(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(solve_min_weight_cover(g, Rational(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(weight_scale(0, 8), std::invalid_argument);
}

TEST_CASE("scale windows and the window length") {
  CHECK(weight_scale(3, 8) == 2);
  CHECK(weight_scale(8, 8) == 0);
  CHECK(weight_scale(4, 8) == 1);
  CHECK(weight_scale(1, 8) == 3);
  CHECK(eps_exponent(Rational(1, 4)) == 2);
  CHECK(eps_exponent(Rational(1, 3)) == 2);
  CHECK(eps_exponent(Rational(3, 4)) == 1);
  // 2^-(log 1/eps + 2) = eps/4 <= eps.
  for (int k = 1; k <= 20; ++k) {
    const int lambda = k + kLinearWindowExtra;
    CHECK(std::ldexp(1.0, -lambda) <= std::ldexp(1.0, -k));
  }
}

TEST_CASE("iteration budget and monotone unsaturated duals") {
  for (int seed = 1; seed <= 40; ++seed) {
    const auto g = suite_instance(seed);
    SolveConfig cfg;
    cfg.debug = true;
    std::vector<DualUnits> last;
    cfg.after_search = [&](const EdmondsState& s, std::span<const char>) {
      const auto def = deficiency(g, s.F);
      DualUnits seen = -1;
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (def[v] == 0) continue;
        if (seen >= 0) CHECK(s.y[v] == seen);
        seen = s.y[v];
        if (!last.empty()) CHECK(s.y[v] <= last[v]);
      }
      last = s.y;
    };
    const auto s = solve_small_weight(g, Rational(1, 4), cfg);
    const Weight W = std::max<Weight>(g.max_weight(), 1);
    CHECK(s.stats.iterations <= 4 * W);
  }
}

TEST_CASE("factor drivers meet their bounds against the oracle") {
  for (int seed = 1; seed <= 200; ++seed) {
    const auto g = suite_instance(seed);
    const Weight opt = exact_max_weight_factor(g).value;
    for (Rational eps : {Rational(1, 2), Rational(1, 4)}) {
      const auto sw = solve_small_weight(g, eps);
      CHECK(validate_factor(g, sw.edges));
      CHECK(factor_within(sw.value, opt, 1, eps));
      CHECK(sw.report.pass);
      CHECK(at_most(opt, sw.report.dual_bound));
      CHECK(opt - sw.value <= sw.report.gap.num / sw.report.gap.den);

      const auto sc = solve_scaling(g, eps);
      CHECK(validate_factor(g, sc.edges));
      CHECK(factor_within(sc.value, opt, kScalingFactorConstant, eps));
      CHECK(sc.report.pass);
      CHECK(at_most(opt, sc.report.dual_bound));

      const auto li = solve_linear(g, eps);
      CHECK(validate_factor(g, li.edges));
      CHECK(factor_within(li.value, opt, kLinearFactorConstant, eps));
      CHECK(li.report.pass);
      CHECK(at_most(opt, li.report.dual_bound));
    }
  }
}

TEST_CASE("unit weights make the scaling drivers agree with small-weight") {
  for (int seed = 1; seed <= 60; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    c.max_weight = 1;
    const auto g = generate_instance(c);
    const auto eps = Rational(1, 4);
    const Weight v = solve_small_weight(g, eps).value;
    const auto sc = solve_scaling(g, eps);
    CHECK(sc.stats.iterations_per_scale.size() == 1);
    CHECK(sc.value == v);
    CHECK(solve_linear(g, eps).value == v);
  }
}

TEST_CASE("cardinality solvers are exact") {
  CHECK(solve_max_card_factor(triangle(1, 1, 1, {0, 0, 0})).edges.size() == 0);
  const auto p4 = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {1, 1, 1, 1});
  CHECK(solve_max_card_factor(p4).value == 2);
  // Star with four leaves: every leaf needs its own edge.
  const auto star = make_graph(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}, {1, 1, 1, 1, 1});
  CHECK(solve_min_card_cover(star).value == 4);

  int within = 0, total = 0;
  for (int seed = 1; seed <= 200; ++seed) {
    const auto g = suite_instance(seed);
    const auto s = solve_max_card_factor(g);
    CHECK(validate_factor(g, s.edges));
    CHECK(s.value == exact_max_card_factor(g).value);
    const auto bound = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(g.total_demand()))));
    within += s.stats.phase2_passes <= bound + 1;
    ++total;

    const auto oc = exact_min_card_cover(g);
    const auto c = solve_min_card_cover(g);
    CHECK(c.feasible == oc.feasible);
    if (!oc.feasible) continue;
    CHECK(validate_cover(g, c.edges));
    CHECK(c.value == oc.value);
  }
  CHECK(within * 100 >= total * 99);
}

TEST_CASE("weighted cover") {
  CHECK(solve_min_weight_cover(triangle(3, 1, 3, {0, 0, 0}), Rational(1, 4)).edges.size() == 0);
  const auto p = make_graph(3, {{0, 1, 1}, {1, 2, 2}}, {1, 1, 1});
  const auto s = solve_min_weight_cover(p, Rational(1, 4));
  CHECK(s.value == 3);
  CHECK(s.report.pass);
  const auto bad = make_graph(2, {{0, 1, 1}}, {2, 1});
  CHECK_FALSE(solve_min_weight_cover(bad, Rational(1, 4)).feasible);

  for (int seed = 1; seed <= 200; ++seed) {
    const auto g = suite_instance(seed);
    const auto oc = exact_min_weight_cover(g);
    for (Algorithm a : {Algorithm::kSmallWeight, Algorithm::kScaling, Algorithm::kLinear}) {
      SolveConfig cfg;
      cfg.algorithm = a;
      const auto eps = Rational(1, 4);
      const auto c = solve_min_weight_cover(g, eps, cfg);
      CHECK(c.feasible == oc.feasible);
      if (!oc.feasible) continue;
      CHECK(validate_cover(g, c.edges));
      const int k = a == Algorithm::kSmallWeight ? kSmallWeightCoverConstant
                    : a == Algorithm::kScaling   ? kScalingCoverConstant
                                                 : kLinearCoverConstant;
      CHECK(cover_within(c.value, oc.value, k, eps));
      CHECK(c.report.pass);
      CHECK(at_least(oc.value, c.report.dual_bound));
    }
  }
}

TEST_CASE("cover certificate is the factor certificate on the complementary demand") {
  for (int seed = 1; seed <= 40; ++seed) {
    const auto g = suite_instance(seed);
    const auto c = solve_min_weight_cover(g, Rational(1, 4));
    if (!c.feasible) continue;
    const auto gf = g.with_demand(complementary_demand(g, g.demands()));
    const auto f = solve_small_weight(gf, Rational(1, 4));
    CHECK(format_certificate(c.cert, Objective::kCover, nullptr) ==
          format_certificate(f.cert, Objective::kCover, nullptr));
    CHECK(c.edges == complement(g, f.edges));
  }
}

TEST_CASE("1-cover via matching") {
  const auto p = make_graph(3, {{0, 1, 1}, {1, 2, 2}}, {1, 1, 1});
  CHECK(solve_1_cover_via_matching(p, Rational(1, 4)).value == 3);
  const auto one = make_graph(2, {{0, 1, 7}}, {1, 1});
  const auto s1 = solve_1_cover_via_matching(one, Rational(1, 4));
  CHECK(s1.edges.members() == std::vector<EdgeId>{0});
  CHECK_FALSE(solve_1_cover_via_matching(make_graph(3, {{0, 1, 1}}, {1, 1, 1}), Rational(1, 4))
                  .feasible);

  int ran = 0;
  for (int seed = 1; seed <= 200; ++seed) {
    const auto g = with_demand_one(suite_instance(seed));
    const auto oc = exact_min_weight_1_cover(g);
    const auto s = solve_1_cover_via_matching(g, Rational(1, 4));
    CHECK(s.feasible == oc.feasible);
    if (!oc.feasible) continue;
    ++ran;
    CHECK(s.stats.reduced_weights_ok);
    CHECK(validate_cover(g, s.edges));
    CHECK(cover_within(s.value, oc.value, 1, Rational(1, 4)));
  }
  CHECK(ran > 30);
}

TEST_CASE("dispatch and names") {
  for (Problem p : {Problem::kMaxWeightFactor, Problem::kMinWeightCover, Problem::kMaxCardFactor,
                    Problem::kMinCardCover, Problem::kMinWeight1Cover})
    CHECK(parse_problem(to_string(p)) == p);
  for (Algorithm a : {Algorithm::kSmallWeight, Algorithm::kScaling, Algorithm::kLinear,
                      Algorithm::kAuto})
    CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS(parse_problem("nope"));

  const auto g = triangle(3, 1, 3);
  SolveConfig cfg;
  cfg.algorithm = Algorithm::kScaling;
  const auto s = solve(g, cfg);
  CHECK(s.algorithm == Algorithm::kScaling);
  CHECK(s.value == 3);
}
