#include "gfactor/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfactor {

namespace {

void check_eps(Rational eps) {
  if (eps.num <= 0 || eps.num >= eps.den)
    throw std::invalid_argument("eps must lie strictly between 0 and 1, got " + eps.to_string());
}

int bits_for(Weight w) {
  int b = 0;
  while ((Weight{1} << b) < w) ++b;
  return b;
}

void absorb(SolveStats& st, const IterationStats& it) {
  st.augmentations += it.augmentations;
  st.contractions += it.contractions;
  st.dissolutions += it.dissolutions;
  st.search_passes += it.passes;
  st.max_scans = std::max(st.max_scans, it.max_scans);
}

// Runs iterations until done; returns the number that made progress.
int drive(EdmondsState& s, SolveStats& st) {
  int count = 0;
  for (;;) {
    const IterationResult r = run_iteration(s);
    if (r.done) return count;
    ++count;
    absorb(st, r.stats);
  }
}

Solution finish_factor(const MultiGraph& g, EdmondsState& s, Certificate cert, SolveStats st,
                       Algorithm algo, Rational eps) {
  Solution sol;
  sol.edges = s.F;
  sol.value = s.F.weight(g);
  cert.y = s.y;
  cert.omega = s.omega;
  cert.eps = eps;
  cert.algorithm = to_string(algo);
  sol.cert = std::move(cert);
  sol.has_certificate = true;
  sol.report = check_factor_slackness(g, sol.edges, sol.cert, sol.cert.delta, 0);
  sol.stats = std::move(st);
  sol.algorithm = algo;
  sol.eps = eps;
  return sol;
}

Solution small_weight_k(const MultiGraph& g, std::int64_t k, const SolveConfig& cfg) {
  const Weight W = std::max<Weight>(g.max_weight(), 1);
  std::vector<DualUnits> w(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) w[e] = 2 * k * g.edge(e).w;
  EdmondsState s(g, std::move(w), 2, k * W);
  s.debug = cfg.debug;
  s.after_search = cfg.after_search;
  s.after_pass = cfg.after_pass;
  if (s.debug) assert_invariants(s, "initialisation");
  SolveStats st;
  st.iterations = drive(s, st);
  st.iterations_per_scale = {st.iterations};
  if (st.iterations > k * W)
    throw StructuralError("small-weight driver exceeded its iteration budget");
  Certificate cert;
  cert.unit_den = 2 * k;
  cert.delta = 2;
  return finish_factor(g, s, std::move(cert), std::move(st), Algorithm::kSmallWeight,
                       Rational(1, k));
}

Solution scaling_impl(const MultiGraph& g, Rational eps, const SolveConfig& cfg, bool linear) {
  check_eps(eps);
  ScaleGrid grid;
  grid.a = std::max(1, eps_exponent(eps));
  grid.b = bits_for(std::max<Weight>(g.max_weight(), 1));
  const int L = grid.num_scales();
  const int m = g.num_edges();
  const Weight padded = Weight{1} << grid.b;

  auto weights_at = [&](int i) {
    std::vector<DualUnits> w(m);
    for (EdgeId e = 0; e < m; ++e) w[e] = grid.rounded_weight(g.edge(e).w, i);
    return w;
  };
  EdmondsState s(g, weights_at(0), grid.delta(0), DualUnits{1} << (grid.a + grid.b));
  s.mode = EligibilityMode::kScaled;
  s.first_scale.assign(m, -1);
  s.tight_allowance.assign(m, 0);
  s.debug = cfg.debug;
  s.after_search = cfg.after_search;
  s.after_pass = cfg.after_pass;

  // Window of scales in which each edge is considered by the linear driver.
  // The edge cannot be eligible before scale(e) - 1: every y is at least
  // W/2^(i+2) during scale i, so yz >= W/2^(i+1) > w there.
  std::vector<int> first_active(m, 0), last_active(m, L - 1);
  if (linear) {
    const int lambda = grid.a + kLinearWindowExtra;
    for (EdgeId e = 0; e < m; ++e) {
      const int sc = weight_scale(g.edge(e).w, padded);
      first_active[e] = std::max(0, sc - 1);
      last_active[e] = std::min(L - 1, sc + lambda);
    }
  }

  SolveStats st;
  for (int i = 0; i < L; ++i) {
    s.scale = i;
    s.delta = grid.delta(i);
    s.w = weights_at(i);
    for (EdgeId e = 0; e < m; ++e)
      s.tight_allowance[e] =
          s.first_scale[e] >= 0 ? 2 * grid.delta(s.first_scale[e]) - 2 * grid.delta(i) : 0;
    s.y_target = i == L - 1 ? 0 : DualUnits{1} << (grid.a + grid.b - i - 1);
    if (linear) {
      s.active.assign(m, 0);
      for (EdgeId e = 0; e < m; ++e) s.active[e] = first_active[e] <= i && i <= last_active[e];
    }
    if (s.debug) assert_invariants(s, "scale start");
    const int its = drive(s, st);
    st.iterations += its;
    st.iterations_per_scale.push_back(its);
    if (i + 1 < L)
      for (auto& yv : s.y) yv += grid.delta(i + 1);
  }

  Certificate cert;
  cert.unit_den = grid.unit_den();
  cert.delta = grid.delta(L - 1);
  cert.lower_slack.assign(m, 0);
  cert.upper_slack.assign(m, 0);
  for (EdgeId e = 0; e < m; ++e)
    if (s.first_scale[e] >= 0)
      cert.upper_slack[e] = 2 * grid.delta(s.first_scale[e]) - 2 * grid.delta(L - 1);
  if (linear) {
    // Edges retired before the last scale may have drifted; record the drift.
    const auto yz = all_yz_factor(g, s.omega, s.y, s.F);
    const auto in_blossom = blossom_edge_mask(g, s.omega);
    for (EdgeId e = 0; e < m; ++e) {
      if (last_active[e] == L - 1 || in_blossom[e]) continue;
      const DualUnits w = grid.weight_units(g.edge(e).w);
      if (s.F.contains(e))
        cert.upper_slack[e] = std::max(cert.upper_slack[e], yz[e] - w);
      else
        cert.lower_slack[e] = std::max<DualUnits>(0, w - cert.delta - yz[e]);
    }
  }
  const Algorithm algo = linear ? Algorithm::kLinear : Algorithm::kScaling;
  return finish_factor(g, s, std::move(cert), std::move(st), algo,
                       Rational(1, std::int64_t{1} << grid.a));
}

Solution infeasible(const MultiGraph& g, std::string why) {
  Solution sol;
  sol.feasible = false;
  sol.infeasible_reason = std::move(why);
  sol.edges = EdgeSubset(g);
  return sol;
}

// Phase 2 of the cardinality algorithm: augment with every edge eligible
// until a pass finds nothing.
int augment_to_optimum(const MultiGraph& g, EdgeSubset& F, SolveStats& st, bool debug) {
  const std::vector<char> all(g.num_edges(), 1);
  SearchOptions opt;
  opt.validate = debug;
  int passes = 0;
  for (;;) {
    BlossomFamily fam(g.num_vertices());
    const WalkResult r = find_augmenting_walks(g, F, fam, all, opt);
    ++passes;
    st.max_scans = std::max(st.max_scans, r.scans);
    st.augmentations += static_cast<int>(r.walks.size());
    if (debug && r.scans > 2 * static_cast<std::int64_t>(g.num_edges()))
      throw StructuralError("search scanned more than 2m half-edges");
    if (r.walks.empty()) return passes;
  }
}

}  // namespace

int eps_exponent(Rational eps) {
  check_eps(eps);
  int a = 0;
  while ((eps.num << a) < eps.den) ++a;
  return a;
}

int weight_scale(Weight w, Weight padded_w) {
  if (w < 1) throw std::invalid_argument("weights must be positive");
  int i = 0;
  while ((w << i) < padded_w) ++i;
  return i;
}

Solution solve_small_weight(const MultiGraph& g, Rational eps, const SolveConfig& cfg) {
  check_eps(eps);
  const std::int64_t k = (eps.den + eps.num - 1) / eps.num;
  return small_weight_k(g, k, cfg);
}

Solution solve_scaling(const MultiGraph& g, Rational eps, const SolveConfig& cfg) {
  return scaling_impl(g, eps, cfg, false);
}

Solution solve_linear(const MultiGraph& g, Rational eps, const SolveConfig& cfg) {
  return scaling_impl(g, eps, cfg, true);
}

Solution solve_max_card_factor(const MultiGraph& g, const SolveConfig& cfg) {
  std::vector<Edge> unit(g.edges().begin(), g.edges().end());
  for (auto& e : unit) e.w = 1;
  const MultiGraph g1(g.num_vertices(), std::move(unit),
                      std::vector<int>(g.demands().begin(), g.demands().end()));
  const std::int64_t fv = g.total_demand();
  const auto k = std::max<std::int64_t>(
      2, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(fv)))));
  Solution phase1 = small_weight_k(g1, k, cfg);

  Solution sol;
  sol.stats = phase1.stats;
  sol.edges = phase1.edges;
  sol.stats.phase2_passes = augment_to_optimum(g, sol.edges, sol.stats, cfg.debug);
  sol.value = sol.edges.size();
  sol.algorithm = Algorithm::kSmallWeight;
  sol.eps = Rational(1, k);
  return sol;
}

Solution solve_min_card_cover(const MultiGraph& g, const SolveConfig& cfg) {
  std::vector<int> fc;
  try {
    fc = complementary_demand(g, g.demands());
  } catch (const StructuralError& e) {
    return infeasible(g, e.what());
  }
  Solution sol = solve_max_card_factor(g.with_demand(std::move(fc)), cfg);
  sol.edges = complement(g, sol.edges);
  sol.value = sol.edges.size();
  return sol;
}

Solution solve_min_weight_cover(const MultiGraph& g, Rational eps, const SolveConfig& cfg) {
  check_eps(eps);
  std::vector<int> fc;
  try {
    fc = complementary_demand(g, g.demands());
  } catch (const StructuralError& e) {
    return infeasible(g, e.what());
  }
  const MultiGraph gf = g.with_demand(std::move(fc));
  Algorithm algo = cfg.algorithm == Algorithm::kAuto ? choose_algorithm(g, eps) : cfg.algorithm;
  Solution sol;
  switch (algo) {
    case Algorithm::kScaling: sol = solve_scaling(gf, eps, cfg); break;
    case Algorithm::kLinear: sol = solve_linear(gf, eps, cfg); break;
    default: sol = solve_small_weight(gf, eps, cfg); break;
  }
  sol.edges = complement(g, sol.edges);
  sol.value = sol.edges.weight(g);
  sol.report = check_cover_slackness(g, sol.edges, sol.cert, 0, sol.cert.delta);
  return sol;
}

Solution solve_1_cover_via_matching(const MultiGraph& g, Rational eps, const SolveConfig& cfg) {
  check_eps(eps);
  const int n = g.num_vertices();
  std::vector<Weight> mu(n, 0);
  std::vector<EdgeId> cheapest(n, -1);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    for (VertexId x : {ed.u, ed.v})
      if (cheapest[x] == -1 || ed.w < mu[x]) {
        mu[x] = ed.w;
        cheapest[x] = e;
      }
  }
  for (VertexId v = 0; v < n; ++v)
    if (cheapest[v] == -1) return infeasible(g, "vertex " + std::to_string(v) + " is isolated");

  SolveStats st;
  std::vector<Edge> kept;
  std::vector<EdgeId> origin;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const Weight reduced = mu[ed.u] + mu[ed.v] - ed.w;
    if (reduced > ed.w) st.reduced_weights_ok = false;
    if (reduced <= 0) continue;
    kept.push_back({ed.u, ed.v, reduced});
    origin.push_back(e);
  }
  const MultiGraph gm(n, std::move(kept), std::vector<int>(n, 1));
  Solution matching = solve_small_weight(gm, eps, cfg);

  Solution sol;
  sol.edges = EdgeSubset(g);
  for (EdgeId e : matching.edges.members()) sol.edges.insert(g, origin[e]);
  for (VertexId v = 0; v < n; ++v)
    if (sol.edges.degree(v) == 0) sol.edges.insert(g, cheapest[v]);
  sol.value = sol.edges.weight(g);
  sol.stats = matching.stats;
  sol.stats.reduced_weights_ok = st.reduced_weights_ok;
  sol.algorithm = Algorithm::kSmallWeight;
  sol.eps = eps;
  return sol;
}

Algorithm choose_algorithm(const MultiGraph& g, Rational eps) {
  const double inv = eps.to_double() > 0 ? 1.0 / eps.to_double() : 2.0;
  const double log_inv = std::max(1.0, std::log2(inv));
  return static_cast<double>(g.max_weight()) <= g.num_edges() * log_inv ? Algorithm::kSmallWeight
                                                                        : Algorithm::kLinear;
}

Solution solve(const MultiGraph& g, const SolveConfig& cfg) {
  switch (cfg.problem) {
    case Problem::kMaxWeightFactor: {
      const Algorithm a =
          cfg.algorithm == Algorithm::kAuto ? choose_algorithm(g, cfg.eps) : cfg.algorithm;
      if (a == Algorithm::kScaling) return solve_scaling(g, cfg.eps, cfg);
      if (a == Algorithm::kLinear) return solve_linear(g, cfg.eps, cfg);
      return solve_small_weight(g, cfg.eps, cfg);
    }
    case Problem::kMinWeightCover: return solve_min_weight_cover(g, cfg.eps, cfg);
    case Problem::kMaxCardFactor: return solve_max_card_factor(g, cfg);
    case Problem::kMinCardCover: return solve_min_card_cover(g, cfg);
    case Problem::kMinWeight1Cover: return solve_1_cover_via_matching(g, cfg.eps, cfg);
  }
  throw std::invalid_argument("unknown problem");
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::kMaxWeightFactor: return "max-weight-factor";
    case Problem::kMinWeightCover: return "min-weight-cover";
    case Problem::kMaxCardFactor: return "max-card-factor";
    case Problem::kMinCardCover: return "min-card-cover";
    case Problem::kMinWeight1Cover: return "min-weight-1-cover";
  }
  return "?";
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSmallWeight: return "small-weight";
    case Algorithm::kScaling: return "scaling";
    case Algorithm::kLinear: return "linear";
    case Algorithm::kAuto: return "auto";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  for (Problem p : {Problem::kMaxWeightFactor, Problem::kMinWeightCover, Problem::kMaxCardFactor,
                    Problem::kMinCardCover, Problem::kMinWeight1Cover})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a :
       {Algorithm::kSmallWeight, Algorithm::kScaling, Algorithm::kLinear, Algorithm::kAuto})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

}  // namespace gfactor
