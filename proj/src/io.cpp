#include "gfactor/io.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <random>
#include <sstream>
#include <vector>

namespace gfactor {

namespace {

struct LineReader {
  std::istream& in;
  int line = 0;

  // Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tok) {
    std::string s;
    while (std::getline(in, s)) {
      ++line;
      if (!s.empty() && s.back() == '\r') s.pop_back();
      std::istringstream ss(s);
      tok.clear();
      for (std::string t; ss >> t;) tok.push_back(t);
      if (tok.empty() || tok[0] == "c") continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, what); }

  std::int64_t integer(const std::string& t) const {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) fail("expected an integer, got '" + t + "'");
    return v;
  }

  int index(const std::string& t, int bound, const char* what) const {
    const std::int64_t v = integer(t);
    if (v < 0 || v >= bound) fail(std::string(what) + " " + t + " out of range");
    return static_cast<int>(v);
  }

  Rational rational(const std::string& t) const {
    try {
      return parse_rational(t);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  void arity(const std::vector<std::string>& tok, std::size_t k) const {
    if (tok.size() != k)
      fail("'" + tok[0] + "' record needs " + std::to_string(k - 1) + " fields");
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace

MultiGraph parse_instance(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> tok;
  if (!r.next(tok)) throw ParseError(r.line, "missing header 'p gfactor <n> <m>'");
  if (tok.size() != 4 || tok[0] != "p" || tok[1] != "gfactor")
    r.fail("expected header 'p gfactor <n> <m>'");
  const std::int64_t n = r.integer(tok[2]);
  const std::int64_t m = r.integer(tok[3]);
  if (n < 0 || m < 0) r.fail("negative size in header");

  std::vector<int> f(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<Edge> edges;
  edges.reserve(m);
  while (r.next(tok)) {
    if (tok[0] == "v") {
      r.arity(tok, 3);
      const int v = r.index(tok[1], static_cast<int>(n), "vertex");
      if (seen[v]) r.fail("vertex " + tok[1] + " listed twice");
      const std::int64_t d = r.integer(tok[2]);
      if (d < 0) r.fail("negative demand");
      seen[v] = 1;
      f[v] = static_cast<int>(d);
    } else if (tok[0] == "e") {
      r.arity(tok, 4);
      if (static_cast<std::int64_t>(edges.size()) == m) r.fail("more edges than the header says");
      const int u = r.index(tok[1], static_cast<int>(n), "vertex");
      const int v = r.index(tok[2], static_cast<int>(n), "vertex");
      const std::int64_t w = r.integer(tok[3]);
      if (w < 1) r.fail("weights must be positive integers");
      edges.push_back({u, v, w});
    } else {
      r.fail("unknown record '" + tok[0] + "'");
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[v]) throw ParseError(r.line, "vertex " + std::to_string(v) + " has no 'v' line");
  if (static_cast<std::int64_t>(edges.size()) != m)
    throw ParseError(r.line, "header promises " + std::to_string(m) + " edges, found " +
                                 std::to_string(edges.size()));
  return MultiGraph(static_cast<int>(n), std::move(edges), std::move(f));
}

std::string format_instance(const MultiGraph& g) {
  std::ostringstream out;
  out << "p gfactor " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (VertexId v = 0; v < g.num_vertices(); ++v) out << "v " << v << ' ' << g.demand(v) << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << e.w << '\n';
  return out.str();
}

EdgeSubset parse_solution(std::istream& in, const MultiGraph& g) {
  LineReader r{in};
  std::vector<std::string> tok;
  if (!r.next(tok) || tok[0] != "s" || tok.size() != 2) r.fail("expected header 's <k>'");
  const std::int64_t k = r.integer(tok[1]);
  EdgeSubset S(g);
  std::int64_t count = 0;
  while (r.next(tok)) {
    if (tok[0] != "e") r.fail("unknown record '" + tok[0] + "'");
    r.arity(tok, 2);
    const EdgeId e = r.index(tok[1], g.num_edges(), "edge");
    if (S.contains(e)) r.fail("edge " + tok[1] + " listed twice");
    S.insert(g, e);
    ++count;
  }
  if (count != k)
    throw ParseError(r.line, "header promises " + std::to_string(k) + " edges, found " +
                                 std::to_string(count));
  return S;
}

std::string format_solution(const MultiGraph& g, const EdgeSubset& S) {
  (void)g;
  std::ostringstream out;
  const auto mem = S.members();
  out << "s " << mem.size() << '\n';
  for (EdgeId e : mem) out << "e " << e << '\n';
  return out.str();
}

std::string format_report(const BoundReport& r) {
  std::ostringstream out;
  out << "objective " << (r.objective == Objective::kFactor ? "factor" : "cover") << '\n'
      << "pass " << r.pass << '\n'
      << "domination " << r.domination_ok << '\n'
      << "tightness " << r.tightness_ok << '\n'
      << "maturity " << r.maturity_ok << '\n'
      << "free_duals " << r.free_duals_ok << '\n'
      << "nonnegative " << r.nonnegative_ok << '\n'
      << "value " << r.value << '\n'
      << "size " << r.size << '\n'
      << "delta1 " << Rational(r.delta1, r.unit_den).to_string() << '\n'
      << "delta2 " << Rational(r.delta2, r.unit_den).to_string() << '\n'
      << "opt_size_bound " << r.opt_size_bound << '\n'
      << "gap " << r.gap.to_string() << '\n'
      << "dual_bound " << r.dual_bound.to_string() << '\n';
  for (const Failure& f : r.failures) out << "failure " << f.clause << ": " << f.witness << '\n';
  return out.str();
}

std::string format_certificate(const Certificate& cert, Objective objective,
                               const BoundReport* report) {
  std::ostringstream out;
  const BlossomFamily& fam = cert.omega;
  for (std::size_t v = 0; v < cert.y.size(); ++v) out << "y " << v << ' ' << cert.y[v] << '\n';

  // Children get smaller ids than their parents.
  std::vector<BlossomId> order;
  std::vector<int> renum(fam.capacity(), -1);
  std::function<void(BlossomId)> visit = [&](BlossomId b) {
    for (NodeId c : fam.at(b).children)
      if (!fam.is_vertex_node(c)) visit(fam.blossom_of(c));
    renum[b] = static_cast<int>(order.size());
    order.push_back(b);
  };
  for (BlossomId b : fam.roots()) visit(b);
  for (BlossomId b : order) {
    const Blossom& B = fam.at(b);
    out << "B " << renum[b] << " parent="
        << (B.parent == -1 ? std::string("-") : std::to_string(renum[B.parent]))
        << " beta=" << B.base
        << " eta=" << (B.eta == -1 ? std::string("-") : std::to_string(B.eta)) << " z=" << B.z
        << " verts=" << join(B.members, [](VertexId v) { return std::to_string(v); })
        << " children=" << join(B.children, [&](NodeId c) {
             return fam.is_vertex_node(c) ? std::to_string(c)
                                          : "b" + std::to_string(renum[fam.blossom_of(c)]);
           })
        << " cycle=" << join(B.cycle, [](EdgeId e) { return std::to_string(e); }) << '\n';
  }
  const std::size_t m = std::max(cert.lower_slack.size(), cert.upper_slack.size());
  for (std::size_t e = 0; e < m; ++e) {
    const DualUnits lo = e < cert.lower_slack.size() ? cert.lower_slack[e] : 0;
    const DualUnits hi = e < cert.upper_slack.size() ? cert.upper_slack[e] : 0;
    if (lo != 0 || hi != 0) out << "s " << e << ' ' << lo << ' ' << hi << '\n';
  }
  out << "unit 1/" << cert.unit_den << '\n'
      << "delta " << Rational(cert.delta, cert.unit_den).to_string() << '\n'
      << "eps " << cert.eps.to_string() << '\n'
      << "algorithm " << (cert.algorithm.empty() ? "-" : cert.algorithm) << '\n'
      << "objective " << (objective == Objective::kFactor ? "factor" : "cover") << '\n';
  if (report) {
    std::istringstream lines(format_report(*report));
    for (std::string s; std::getline(lines, s);)
      if (s.rfind("objective ", 0) != 0) out << "r " << s << '\n';
  }
  return out.str();
}

CertificateFile parse_certificate(std::istream& in, const MultiGraph& g) {
  LineReader r{in};
  CertificateFile file;
  Certificate& cert = file.cert;
  const int n = g.num_vertices();
  const int m = g.num_edges();
  cert.y.assign(n, 0);
  std::vector<char> have_y(n, 0);

  struct Record {
    int line;
    std::map<std::string, std::string> kv;
  };
  std::vector<Record> blossoms;
  std::vector<std::pair<int, std::vector<DualUnits>>> slacks;
  Rational delta_w;
  bool have_unit = false, have_delta = false, have_objective = false;

  std::vector<std::string> tok;
  while (r.next(tok)) {
    const std::string& k = tok[0];
    if (k == "y") {
      r.arity(tok, 3);
      const int v = r.index(tok[1], n, "vertex");
      if (have_y[v]) r.fail("duplicate y for vertex " + tok[1]);
      have_y[v] = 1;
      cert.y[v] = r.integer(tok[2]);
    } else if (k == "B") {
      if (tok.size() < 2) r.fail("blossom record without id");
      Record rec{r.line, {}};
      rec.kv["id"] = tok[1];
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) r.fail("expected key=value, got '" + tok[i] + "'");
        rec.kv[tok[i].substr(0, eq)] = tok[i].substr(eq + 1);
      }
      for (const char* key : {"parent", "beta", "eta", "z", "verts", "children", "cycle"})
        if (!rec.kv.count(key)) r.fail(std::string("blossom record lacks ") + key + "=");
      blossoms.push_back(std::move(rec));
    } else if (k == "s") {
      r.arity(tok, 4);
      const int e = r.index(tok[1], m, "edge");
      slacks.push_back({e, {r.integer(tok[2]), r.integer(tok[3])}});
    } else if (k == "unit") {
      r.arity(tok, 2);
      const Rational u = r.rational(tok[1]);
      if (u.num != 1 || u.den < 1) r.fail("unit must be 1/<den>");
      cert.unit_den = u.den;
      have_unit = true;
    } else if (k == "delta") {
      r.arity(tok, 2);
      delta_w = r.rational(tok[1]);
      have_delta = true;
    } else if (k == "eps") {
      r.arity(tok, 2);
      cert.eps = r.rational(tok[1]);
    } else if (k == "algorithm") {
      r.arity(tok, 2);
      cert.algorithm = tok[1] == "-" ? "" : tok[1];
    } else if (k == "objective") {
      r.arity(tok, 2);
      if (tok[1] == "factor") file.objective = Objective::kFactor;
      else if (tok[1] == "cover") file.objective = Objective::kCover;
      else r.fail("objective must be factor or cover");
      have_objective = true;
    } else if (k == "r") {
      if (tok.size() < 3) r.fail("report line needs a key and a value");
      std::string v = tok[2];
      for (std::size_t i = 3; i < tok.size(); ++i) v += " " + tok[i];
      file.report[tok[1]] = v;
    } else {
      r.fail("unknown record '" + k + "'");
    }
  }
  for (int v = 0; v < n; ++v)
    if (!have_y[v]) throw ParseError(r.line, "no y line for vertex " + std::to_string(v));
  if (!have_unit || !have_delta || !have_objective)
    throw ParseError(r.line, "footer needs unit, delta and objective lines");
  const Rational du(delta_w.num * cert.unit_den, delta_w.den);
  if (du.den != 1) throw ParseError(r.line, "delta is not a whole number of units");
  cert.delta = du.num;

  if (!slacks.empty()) {
    cert.lower_slack.assign(m, 0);
    cert.upper_slack.assign(m, 0);
    for (const auto& [e, lu] : slacks) {
      cert.lower_slack[e] = lu[0];
      cert.upper_slack[e] = lu[1];
    }
  }

  cert.omega = BlossomFamily(n);
  std::sort(blossoms.begin(), blossoms.end(), [&](const Record& a, const Record& b) {
    return a.kv.at("id") < b.kv.at("id");
  });
  const int k = static_cast<int>(blossoms.size());
  std::vector<const Record*> by_id(k, nullptr);
  for (const Record& rec : blossoms) {
    r.line = rec.line;
    const int id = r.index(rec.kv.at("id"), k, "blossom id");
    if (by_id[id]) r.fail("duplicate blossom id");
    by_id[id] = &rec;
  }
  for (int id = 0; id < k; ++id) {
    const Record& rec = *by_id[id];
    r.line = rec.line;
    BlossomSpec spec;
    for (const std::string& c : split(rec.kv.at("children"), ',')) {
      if (!c.empty() && c[0] == 'b') {
        const int child = r.index(c.substr(1), id, "child blossom");
        spec.children.push_back(cert.omega.node_of_blossom(child));
      } else {
        spec.children.push_back(r.index(c, n, "child vertex"));
      }
    }
    for (const std::string& e : split(rec.kv.at("cycle"), ',')) spec.cycle.push_back(r.index(e, m, "edge"));
    const std::string& eta = rec.kv.at("eta");
    spec.eta = eta == "-" ? -1 : r.index(eta, m, "edge");
    BlossomId b;
    try {
      b = cert.omega.contract_unchecked(spec);
    } catch (const StructuralError& e) {
      r.fail(e.what());
    }
    if (b != id) r.fail("blossom ids must be dense and children-first");
    Blossom& B = cert.omega.at(b);
    B.z = r.integer(rec.kv.at("z"));
    if (B.base != r.index(rec.kv.at("beta"), n, "vertex")) r.fail("beta is not in the first child");
    std::vector<VertexId> verts;
    for (const std::string& v : split(rec.kv.at("verts"), ',')) verts.push_back(r.index(v, n, "vertex"));
    std::vector<VertexId> have = B.members;
    std::sort(verts.begin(), verts.end());
    std::sort(have.begin(), have.end());
    if (verts != have) r.fail("verts do not match the children");
  }
  for (int id = 0; id < k; ++id) {
    const Record& rec = *by_id[id];
    r.line = rec.line;
    const std::string& p = rec.kv.at("parent");
    const int want = p == "-" ? -1 : r.index(p, k, "parent");
    if (cert.omega.at(id).parent != want) r.fail("parent does not match the children lists");
  }
  return file;
}

MultiGraph generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n < 0 || cfg.m < 0 || cfg.max_weight < 1 || cfg.f_min < 0 || cfg.f_max < cfg.f_min)
    throw std::invalid_argument("bad generator parameters");
  if (cfg.n == 0 && cfg.m > 0) throw std::invalid_argument("edges need at least one vertex");
  // mt19937_64 output is fixed by the standard; distributions are not, so
  // reduce by hand to keep instances identical across standard libraries.
  std::mt19937_64 rng(cfg.seed);
  auto below = [&](std::uint64_t k) { return static_cast<std::int64_t>(rng() % k); };
  auto chance = [&](double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
  };

  std::vector<int> f(cfg.n);
  for (int& d : f) d = cfg.f_min + static_cast<int>(below(cfg.f_max - cfg.f_min + 1));
  std::vector<Edge> edges;
  edges.reserve(cfg.m);
  for (int i = 0; i < cfg.m; ++i) {
    Edge e;
    e.w = 1 + below(static_cast<std::uint64_t>(cfg.max_weight));
    if (cfg.n == 1 || chance(cfg.p_loop)) {
      e.u = e.v = static_cast<VertexId>(below(cfg.n));
    } else if (!edges.empty() && chance(cfg.p_parallel)) {
      const Edge& o = edges[below(edges.size())];
      e.u = o.u;
      e.v = o.v;
    } else {
      e.u = static_cast<VertexId>(below(cfg.n));
      e.v = static_cast<VertexId>(below(cfg.n - 1));
      if (e.v >= e.u) ++e.v;
    }
    edges.push_back(e);
  }
  return MultiGraph(cfg.n, std::move(edges), std::move(f));
}

}  // namespace gfactor
