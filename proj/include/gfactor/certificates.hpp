#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gfactor/blossoms.hpp"
#include "gfactor/multigraph.hpp"

namespace gfactor {

/// Exact p/q with q > 0, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Parses "p/q" or "p". Throws std::invalid_argument.
Rational parse_rational(const std::string& s);

/// Snapshot of the dual solution that certifies a factor or cover.
/// All dual quantities are integers; one unit equals 1/unit_den weight.
struct Certificate {
  std::int64_t unit_den = 2;
  DualUnits delta = 2;  // final granularity in units
  std::vector<DualUnits> y;
  BlossomFamily omega;
  // Optional per-edge extra slack in units, added to the lower bound
  // (yz >= w - delta1 - lower) and the upper bound (yz <= w + delta2 + upper).
  // Empty means zero everywhere.
  std::vector<DualUnits> lower_slack;
  std::vector<DualUnits> upper_slack;
  std::string algorithm;
  Rational eps{1, 2};
};

/// yz for the factor aggregate: z(B) counts when e is in gamma(B) or I(B).
DualUnits yz_factor(const MultiGraph& g, const BlossomFamily& fam,
                    std::span<const DualUnits> y, const EdgeSubset& F, EdgeId e);
/// yz for the cover aggregate: z(B) counts when e is in gamma(B) or delta(B) \ I_C(B).
DualUnits yz_cover(const MultiGraph& g, const BlossomFamily& fam,
                   std::span<const DualUnits> y, const EdgeSubset& C, EdgeId e);
/// yz_factor for every edge.
std::vector<DualUnits> all_yz_factor(const MultiGraph& g, const BlossomFamily& fam,
                                     std::span<const DualUnits> y, const EdgeSubset& F);

/// Edges lying on some blossom cycle (the union of E_B).
std::vector<char> blossom_edge_mask(const MultiGraph& g, const BlossomFamily& fam);

struct Failure {
  std::string clause;
  std::string witness;
};

enum class Objective { kFactor, kCover };

struct BoundReport {
  Objective objective = Objective::kFactor;
  bool pass = true;
  bool domination_ok = true;
  bool tightness_ok = true;
  bool maturity_ok = true;
  bool free_duals_ok = true;
  bool nonnegative_ok = true;
  std::vector<Failure> failures;

  Weight value = 0;
  std::int64_t size = 0;
  std::int64_t unit_den = 1;
  DualUnits delta1 = 0;
  DualUnits delta2 = 0;
  // Upper bound on the size of an optimal solution, used in the gap formula.
  std::int64_t opt_size_bound = 0;
  // Factor: value >= opt - gap. Cover: value <= opt + gap.
  Rational gap;
  // Weak-duality bound: opt <= dual_bound (factor) or opt >= dual_bound (cover).
  Rational dual_bound;
};

/// Checks domination, tightness, maturity and free-vertex duals for a
/// factor F, with delta1 / delta2 given in dual units.
BoundReport check_factor_slackness(const MultiGraph& g, const EdgeSubset& F,
                                   const Certificate& cert, DualUnits delta1,
                                   DualUnits delta2);
/// Mirror for an edge cover C.
BoundReport check_cover_slackness(const MultiGraph& g, const EdgeSubset& C,
                                  const Certificate& cert, DualUnits delta1,
                                  DualUnits delta2);

/// Parameters of an in-search invariant check (uniform or scaled).
struct InvariantSpec {
  DualUnits delta = 2;                        // current delta in units
  std::span<const DualUnits> w;               // effective weight per edge, in units
  std::span<const DualUnits> tight_allowance; // per-edge extra above w; empty = 0
  std::span<const char> active;               // edges subject to the check; empty = all
};

/// Granularity, domination, tightness, maturity and equal unsaturated duals.
std::vector<Failure> check_invariant(const MultiGraph& g, const EdgeSubset& F,
                                     std::span<const DualUnits> y, const BlossomFamily& fam,
                                     const InvariantSpec& spec);

/// Grid of the scaling drivers: W = 2^b, eps = 2^-a, scales 0..L-1 with
/// L = b + 1. One unit is eps/2, so delta_i = 2^(L-i) units.
struct ScaleGrid {
  int a = 1;
  int b = 0;
  int num_scales() const { return b + 1; }
  std::int64_t unit_den() const { return std::int64_t{1} << (a + 1); }
  DualUnits delta(int i) const { return DualUnits{1} << (num_scales() - i); }
  DualUnits weight_units(Weight w) const { return w * unit_den(); }
  DualUnits rounded_weight(Weight w, int i) const {
    return delta(i) * (weight_units(w) / delta(i));
  }
};

/// Invariant check at scale i; first_scale[e] is the earliest scale at which
/// e was matched (-1 if never).
std::vector<Failure> check_invariant_scaled(const MultiGraph& g, const EdgeSubset& F,
                                            std::span<const DualUnits> y,
                                            const BlossomFamily& fam, const ScaleGrid& grid,
                                            int i, std::span<const int> first_scale,
                                            std::span<const char> active = {});

}  // namespace gfactor
