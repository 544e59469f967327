#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gfactor/blossoms.hpp"
#include "gfactor/certificates.hpp"
#include "gfactor/multigraph.hpp"
#include "gfactor/search_aw.hpp"

namespace gfactor {

enum class EligibilityMode { kUniform, kScaled };

struct IterationStats {
  int passes = 0;
  int augmentations = 0;
  int contractions = 0;
  int dissolutions = 0;
  std::int64_t max_scans = 0;
  DualUnits y_removed = 0;  // total decrease over outer vertices
};

struct EdmondsState;
using SearchHook = std::function<void(const EdmondsState&, std::span<const char> eligible)>;
/// Sees the state right after one search pass, before blossoms found while
/// augmenting are dissolved.
using PassHook = std::function<void(const EdmondsState&, std::span<const char> eligible,
                                    const WalkResult&)>;

/// Primal/dual state of Edmonds' search. All duals and weights in units.
struct EdmondsState {
  const MultiGraph* g = nullptr;
  EdgeSubset F;
  BlossomFamily omega;
  std::vector<DualUnits> y;
  DualUnits delta = 2;
  std::vector<DualUnits> w;  // effective weights (w, or w_i at scale i)
  EligibilityMode mode = EligibilityMode::kUniform;
  DualUnits y_target = 0;    // iterations stop once unsaturated y reach this

  // Scaled mode: current scale and earliest scale each edge was matched.
  int scale = 0;
  std::vector<int> first_scale;
  std::vector<DualUnits> tight_allowance;  // 2 delta_j - 2 delta_i, for debug checks
  std::vector<char> active;                // edges taking part; empty = all

  bool debug = false;
  SearchHook after_search;  // called with the final eligibility mask of step 1
  PassHook after_pass;

  EdmondsState() = default;
  /// F = empty, Omega = empty, every y = y0.
  EdmondsState(const MultiGraph& graph, std::vector<DualUnits> weights, DualUnits delta,
               DualUnits y0);
};

/// Eligibility on precomputed numbers: blossom edge, unmatched at w - delta, or
/// matched at exactly w.
bool eligible_uniform(DualUnits yz, DualUnits w, DualUnits delta, bool matched, bool blossom_edge);
/// Scaled criterion: matched edges may sit any nonnegative multiple of delta above w.
bool eligible_scaled(DualUnits yz, DualUnits w, DualUnits delta, bool matched, bool blossom_edge);

bool is_eligible_uniform(const EdmondsState& s, EdgeId e);
bool is_eligible_scaled(const EdmondsState& s, EdgeId e);

/// Eligibility of every edge given yz values.
std::vector<char> eligibility_mask(const EdmondsState& s, std::span<const DualUnits> yz);

struct SearchSet {
  std::vector<char> reached;  // per node id (vertex or n + blossom)
  std::vector<Label> label;   // per node id, meaningful when reached
  std::vector<char> v_out;    // per vertex
  std::vector<char> v_in;     // per vertex
  std::vector<BlossomId> outer_roots;
  std::vector<BlossomId> inner_roots;
  int conflicts = 0;          // edges eligible for both reached endpoints
};

/// Nodes of G / Omega reachable from unsaturated vertices by eligible
/// alternating walks, labelled inner/outer.
SearchSet compute_search_set(const EdmondsState& s, std::span<const char> eligible);

struct IterationResult {
  bool done = false;
  IterationStats stats;
};

/// One iteration: augmentation and blossom formation, dual adjustment,
/// blossom dissolution. Returns done without mutation when there is no
/// unsaturated vertex or their duals already reached y_target.
IterationResult run_iteration(EdmondsState& s);

/// Unsaturated dual value, or -1 if every vertex is saturated.
DualUnits unsaturated_dual(const EdmondsState& s);

/// Full invariant rescan for the current mode; throws StructuralError.
void assert_invariants(const EdmondsState& s, const char* where);

/// True when GFACTOR_DEBUG_ASSERT=1 is set in the environment.
bool debug_from_env();

}  // namespace gfactor
