#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfactor/certificates.hpp"
#include "gfactor/edmonds.hpp"
#include "gfactor/multigraph.hpp"

namespace gfactor {

enum class Problem {
  kMaxWeightFactor,
  kMinWeightCover,
  kMaxCardFactor,
  kMinCardCover,
  kMinWeight1Cover,
};

enum class Algorithm { kSmallWeight, kScaling, kLinear, kAuto };

// Approximation constants proved for the drivers (valid for eps <= 1/2):
//   scaling factor     w(F) >= (1 - 5 eps) opt
//   linear factor      w(F) >= (1 - 7 eps) opt
//   cover, small-weight  w(C) <= (1 + 2 eps) opt
//   cover, scaling     w(C) <= (1 + 10 eps) opt
//   cover, linear      w(C) <= (1 + 34 eps) opt
inline constexpr int kScalingFactorConstant = 5;
inline constexpr int kLinearFactorConstant = 7;
inline constexpr int kSmallWeightCoverConstant = 2;
inline constexpr int kScalingCoverConstant = 10;
inline constexpr int kLinearCoverConstant = 34;

/// Extra scales an edge stays active for in the linear driver beyond
/// log2(1/eps).
inline constexpr int kLinearWindowExtra = 2;

struct SolveConfig {
  Problem problem = Problem::kMaxWeightFactor;
  Rational eps{1, 4};
  Algorithm algorithm = Algorithm::kAuto;
  bool debug = false;
  SearchHook after_search;  // forwarded to every Edmonds iteration
  PassHook after_pass;
};

struct SolveStats {
  int iterations = 0;
  std::vector<int> iterations_per_scale;
  int augmentations = 0;
  int contractions = 0;
  int dissolutions = 0;
  int search_passes = 0;
  int phase2_passes = 0;
  std::int64_t max_scans = 0;
  // 1-cover reduction: every reduced weight was at most the original one.
  bool reduced_weights_ok = true;
};

struct Solution {
  bool feasible = true;
  std::string infeasible_reason;
  EdgeSubset edges;
  Weight value = 0;
  bool has_certificate = false;
  Certificate cert;
  BoundReport report;
  SolveStats stats;
  Algorithm algorithm = Algorithm::kSmallWeight;
  Rational eps;  // the eps actually used (rounded for the scaling drivers)
};

/// (1 - eps)-approximate maximum weight f-factor in O(W m / eps).
Solution solve_small_weight(const MultiGraph& g, Rational eps, const SolveConfig& cfg = {});
/// Scaling driver; eps is rounded down and W padded to powers of two.
Solution solve_scaling(const MultiGraph& g, Rational eps, const SolveConfig& cfg = {});
/// Scaling driver where every edge takes part in O(log 1/eps) scales only.
Solution solve_linear(const MultiGraph& g, Rational eps, const SolveConfig& cfg = {});

Solution solve_max_card_factor(const MultiGraph& g, const SolveConfig& cfg = {});
Solution solve_min_card_cover(const MultiGraph& g, const SolveConfig& cfg = {});
/// Complements a factor for deg - f; infeasible when some deg(v) < f(v).
Solution solve_min_weight_cover(const MultiGraph& g, Rational eps, const SolveConfig& cfg = {});
/// Minimum weight 1-edge cover (demands of g are ignored) via matching.
Solution solve_1_cover_via_matching(const MultiGraph& g, Rational eps,
                                    const SolveConfig& cfg = {});

/// Dispatches on cfg.problem and cfg.algorithm.
Solution solve(const MultiGraph& g, const SolveConfig& cfg);

Algorithm choose_algorithm(const MultiGraph& g, Rational eps);

/// scale(e): the i with w in [W/2^i, W/2^(i-1)), for W padded to 2^b.
int weight_scale(Weight w, Weight padded_w);

/// Smallest a with 2^-a <= eps.
int eps_exponent(Rational eps);

std::string to_string(Problem p);
std::string to_string(Algorithm a);
Problem parse_problem(const std::string& s);
Algorithm parse_algorithm(const std::string& s);

}  // namespace gfactor
