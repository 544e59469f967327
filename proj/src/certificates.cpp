#include "gfactor/certificates.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gfactor {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    const std::int64_t n = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad rational '" + s + "'");
    return Rational(n);
  }
  const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
  const std::int64_t n = std::stoll(a, &used);
  if (used != a.size()) throw std::invalid_argument("bad rational '" + s + "'");
  const std::int64_t d = std::stoll(b, &used);
  if (used != b.size() || d <= 0) throw std::invalid_argument("bad rational '" + s + "'");
  return Rational(n, d);
}

namespace {

// Shared body of both aggregates. For blossoms holding exactly one endpoint,
// `in_set` says whether e is in I(B) (factor) or in delta(B) \ I_C(B) (cover).
DualUnits yz_impl(const MultiGraph& g, const BlossomFamily& fam, std::span<const DualUnits> y,
                  bool matched, bool cover, EdgeId e) {
  const Edge& ed = g.edge(e);
  DualUnits s = y[ed.u] + y[ed.v];
  if (fam.empty()) return s;
  const auto au = fam.ancestors(ed.u);
  const auto av = fam.ancestors(ed.v);
  std::size_t iu = au.size(), iv = av.size();
  while (iu > 0 && iv > 0 && au[iu - 1] == av[iv - 1]) {
    --iu;
    --iv;
    s += fam.at(au[iu]).z;
  }
  auto one_sided = [&](BlossomId b) {
    const bool in_i = matched != (fam.at(b).eta == e);
    return cover ? !in_i : in_i;
  };
  for (std::size_t k = 0; k < iu; ++k)
    if (one_sided(au[k])) s += fam.at(au[k]).z;
  for (std::size_t k = 0; k < iv; ++k)
    if (one_sided(av[k])) s += fam.at(av[k]).z;
  return s;
}

struct BlossomCount {
  std::int64_t f_sum = 0;
  int i_size = 0;
  int matched_in_scope = 0;  // |S ∩ (gamma ∪ I)| (factor) or |S ∩ (gamma ∪ delta∖I)| (cover)
};

BlossomCount count_blossom(const MultiGraph& g, const BlossomFamily& fam, BlossomId b,
                           const EdgeSubset& S, bool cover) {
  BlossomCount c;
  std::vector<char> mark(g.num_vertices(), 0);
  const Blossom& B = fam.at(b);
  for (VertexId v : B.members) {
    mark[v] = 1;
    c.f_sum += g.demand(v);
  }
  for (VertexId v : B.members) {
    for (int h : g.incident(v)) {
      const EdgeId e = edge_of(h);
      const VertexId x = g.head(h);
      if (mark[x]) {
        // inner edge: count once, from the u side (loops have both half-edges here)
        if ((h & 1) == 0 && S.contains(e)) ++c.matched_in_scope;
        continue;
      }
      const bool in_i = S.contains(e) != (e == B.eta);
      if (in_i) ++c.i_size;
      const bool in_scope = cover ? !in_i : in_i;
      if (in_scope && S.contains(e)) ++c.matched_in_scope;
    }
  }
  return c;
}

std::int64_t floor_div2(std::int64_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }
std::int64_t ceil_div2(std::int64_t x) { return -floor_div2(-x); }

constexpr std::size_t kMaxFailures = 32;

void add_failure(BoundReport& r, const std::string& clause, const std::string& witness) {
  r.pass = false;
  if (r.failures.size() < kMaxFailures) r.failures.push_back({clause, witness});
}

BoundReport check_impl(const MultiGraph& g, const EdgeSubset& S, const Certificate& cert,
                       DualUnits d1, DualUnits d2, bool cover) {
  if (S.num_edges() != g.num_edges()) throw StructuralError("edge subset size mismatch");
  if (static_cast<int>(cert.y.size()) != g.num_vertices())
    throw StructuralError("certificate has " + std::to_string(cert.y.size()) +
                          " y-values, graph has " + std::to_string(g.num_vertices()) +
                          " vertices");
  if (cert.omega.num_vertices() != g.num_vertices())
    throw StructuralError("certificate blossom family has the wrong vertex count");
  const int m = g.num_edges();
  auto slack = [&](const std::vector<DualUnits>& v, EdgeId e) {
    return v.empty() ? DualUnits{0} : v[e];
  };
  if ((!cert.lower_slack.empty() && static_cast<int>(cert.lower_slack.size()) != m) ||
      (!cert.upper_slack.empty() && static_cast<int>(cert.upper_slack.size()) != m))
    throw StructuralError("per-edge slack vectors have the wrong length");

  BoundReport r;
  r.objective = cover ? Objective::kCover : Objective::kFactor;
  r.unit_den = cert.unit_den;
  r.delta1 = d1;
  r.delta2 = d2;
  r.value = S.weight(g);
  r.size = S.size();

  const auto& y = cert.y;
  const auto& fam = cert.omega;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (y[v] < 0) {
      r.nonnegative_ok = false;
      add_failure(r, "nonnegative", "vertex " + std::to_string(v));
    }
  for (BlossomId b : fam.alive_ids())
    if (fam.at(b).z < 0) {
      r.nonnegative_ok = false;
      add_failure(r, "nonnegative", "blossom " + std::to_string(b));
    }

  DualUnits dual = 0;
  DualUnits max_free_slack = 0;
  DualUnits matched_slack = 0;
  for (EdgeId e = 0; e < m; ++e) {
    const bool in = S.contains(e);
    const DualUnits yz = yz_impl(g, fam, y, in, cover, e);
    const DualUnits w = g.edge(e).w * cert.unit_den;
    const DualUnits lo = slack(cert.lower_slack, e), hi = slack(cert.upper_slack, e);
    if (!cover) {
      dual += std::max<DualUnits>(0, w - yz);
      if (!in && yz < w - d1 - lo) {
        r.domination_ok = false;
        add_failure(r, "domination", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                                         " w=" + std::to_string(w));
      }
      if (in && yz > w + d2 + hi) {
        r.tightness_ok = false;
        add_failure(r, "tightness", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                                        " w=" + std::to_string(w));
      }
      if (!in) max_free_slack = std::max(max_free_slack, lo);
      if (in) matched_slack += hi;
    } else {
      dual -= std::max<DualUnits>(0, yz - w);
      if (!in && yz > w + d1 + hi) {
        r.domination_ok = false;
        add_failure(r, "domination", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                                         " w=" + std::to_string(w));
      }
      if (in && yz < w - d2 - lo) {
        r.tightness_ok = false;
        add_failure(r, "tightness", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                                        " w=" + std::to_string(w));
      }
      if (!in) max_free_slack = std::max(max_free_slack, hi);
      if (in) matched_slack += lo;
    }
  }

  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    dual += static_cast<DualUnits>(g.demand(v)) * y[v];
    const bool free = cover ? S.degree(v) > g.demand(v) : S.degree(v) < g.demand(v);
    if (free && y[v] != 0) {
      r.free_duals_ok = false;
      add_failure(r, cover ? "oversaturated-dual" : "unsaturated-dual",
                  "vertex " + std::to_string(v) + " y=" + std::to_string(y[v]));
    }
  }

  for (BlossomId b : fam.alive_ids()) {
    const BlossomCount c = count_blossom(g, fam, b, S, cover);
    const std::int64_t cap =
        cover ? ceil_div2(c.f_sum - c.i_size) : floor_div2(c.f_sum + c.i_size);
    dual += cap * fam.at(b).z;
    if (c.matched_in_scope != cap) {
      r.maturity_ok = false;
      add_failure(r, "maturity", "blossom " + std::to_string(b) + " count=" +
                                     std::to_string(c.matched_in_scope) + " expected=" +
                                     std::to_string(cap));
    }
  }

  const std::int64_t fv = g.total_demand();
  r.opt_size_bound = std::min<std::int64_t>(m, cover ? fv : fv / 2);
  const DualUnits gap_units = (d1 + max_free_slack) * r.opt_size_bound + d2 * r.size + matched_slack;
  r.gap = Rational(gap_units, cert.unit_den);
  r.dual_bound = Rational(dual, cert.unit_den);
  return r;
}

}  // namespace

DualUnits yz_factor(const MultiGraph& g, const BlossomFamily& fam, std::span<const DualUnits> y,
                    const EdgeSubset& F, EdgeId e) {
  return yz_impl(g, fam, y, F.contains(e), false, e);
}

DualUnits yz_cover(const MultiGraph& g, const BlossomFamily& fam, std::span<const DualUnits> y,
                   const EdgeSubset& C, EdgeId e) {
  return yz_impl(g, fam, y, C.contains(e), true, e);
}

std::vector<DualUnits> all_yz_factor(const MultiGraph& g, const BlossomFamily& fam,
                                     std::span<const DualUnits> y, const EdgeSubset& F) {
  std::vector<DualUnits> out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) out[e] = yz_impl(g, fam, y, F.contains(e), false, e);
  return out;
}

std::vector<char> blossom_edge_mask(const MultiGraph& g, const BlossomFamily& fam) {
  std::vector<char> mask(g.num_edges(), 0);
  for (BlossomId b : fam.alive_ids())
    for (EdgeId e : fam.at(b).cycle) mask[e] = 1;
  return mask;
}

BoundReport check_factor_slackness(const MultiGraph& g, const EdgeSubset& F,
                                   const Certificate& cert, DualUnits delta1,
                                   DualUnits delta2) {
  return check_impl(g, F, cert, delta1, delta2, false);
}

BoundReport check_cover_slackness(const MultiGraph& g, const EdgeSubset& C,
                                  const Certificate& cert, DualUnits delta1,
                                  DualUnits delta2) {
  return check_impl(g, C, cert, delta1, delta2, true);
}

std::vector<Failure> check_invariant(const MultiGraph& g, const EdgeSubset& F,
                                     std::span<const DualUnits> y, const BlossomFamily& fam,
                                     const InvariantSpec& spec) {
  std::vector<Failure> out;
  auto fail = [&](std::string clause, std::string witness) {
    if (out.size() < kMaxFailures) out.push_back({std::move(clause), std::move(witness)});
  };
  const DualUnits half = spec.delta / 2;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (half == 0 || y[v] % half != 0) fail("granularity", "vertex " + std::to_string(v));
  for (BlossomId b : fam.alive_ids()) {
    const DualUnits z = fam.at(b).z;
    if (z < 0 || z % spec.delta != 0) fail("granularity", "blossom " + std::to_string(b));
  }

  const auto in_blossom = blossom_edge_mask(g, fam);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!spec.active.empty() && !spec.active[e] && !in_blossom[e]) continue;
    const bool in = F.contains(e);
    const DualUnits yz = yz_impl(g, fam, y, in, false, e);
    const DualUnits w = spec.w[e];
    if ((!in || in_blossom[e]) && yz < w - spec.delta)
      fail("domination", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                             " w=" + std::to_string(w));
    const DualUnits allow = spec.tight_allowance.empty() ? 0 : spec.tight_allowance[e];
    if ((in || in_blossom[e]) && yz > w + allow)
      fail("tightness", "edge " + std::to_string(e) + " yz=" + std::to_string(yz) +
                            " w=" + std::to_string(w));
  }

  for (BlossomId b : fam.alive_ids()) {
    const BlossomCount c = count_blossom(g, fam, b, F, false);
    if (c.matched_in_scope != floor_div2(c.f_sum + c.i_size))
      fail("maturity", "blossom " + std::to_string(b));
  }

  bool have_free = false;
  DualUnits free_y = 0, min_other = 0;
  bool have_other = false;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (F.degree(v) < g.demand(v)) {
      if (have_free && y[v] != free_y) fail("unsaturated-equal", "vertex " + std::to_string(v));
      have_free = true;
      free_y = y[v];
    } else {
      min_other = have_other ? std::min(min_other, y[v]) : y[v];
      have_other = true;
    }
  }
  if (have_free && have_other && min_other < free_y)
    fail("unsaturated-minimal", "y=" + std::to_string(free_y));
  return out;
}

std::vector<Failure> check_invariant_scaled(const MultiGraph& g, const EdgeSubset& F,
                                            std::span<const DualUnits> y,
                                            const BlossomFamily& fam, const ScaleGrid& grid,
                                            int i, std::span<const int> first_scale,
                                            std::span<const char> active) {
  std::vector<DualUnits> w(g.num_edges()), allow(g.num_edges(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    w[e] = grid.rounded_weight(g.edge(e).w, i);
    const int j = first_scale.empty() ? -1 : first_scale[e];
    if (j >= 0) allow[e] = 2 * grid.delta(j) - 2 * grid.delta(i);
  }
  InvariantSpec spec;
  spec.delta = grid.delta(i);
  spec.w = w;
  spec.tight_allowance = allow;
  spec.active = active;
  return check_invariant(g, F, y, fam, spec);
}

}  // namespace gfactor
