// gfactor: solve, verify and generate f-factor / f-edge-cover instances.
//
// Exit codes: 0 success, 1 bad input or usage, 2 infeasible instance,
// 3 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gfactor/io.hpp"
#include "gfactor/solvers.hpp"

using namespace gfactor;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kInfeasible = 2;
constexpr int kVerifyFailed = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

MultiGraph read_instance(const std::string& path) {
  if (path == "-") return parse_instance(std::cin);
  auto in = open_in(path);
  return parse_instance(in);
}

bool is_cover(Problem p) { return p != Problem::kMaxWeightFactor && p != Problem::kMaxCardFactor; }

// Feasibility of S for the problem; returns a reason on failure.
std::optional<std::string> feasibility_error(const MultiGraph& g, const EdgeSubset& S, Problem p) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const int need = p == Problem::kMinWeight1Cover ? 1 : g.demand(v);
    const int d = S.degree(v);
    if (is_cover(p) && d < need)
      return "vertex " + std::to_string(v) + " has degree " + std::to_string(d) + " < " +
             std::to_string(need);
    if (!is_cover(p) && d > need)
      return "vertex " + std::to_string(v) + " has degree " + std::to_string(d) + " > " +
             std::to_string(need);
  }
  return std::nullopt;
}

BoundReport check(const MultiGraph& g, const EdgeSubset& S, const CertificateFile& f) {
  const DualUnits d = f.cert.delta;
  return f.objective == Objective::kFactor ? check_factor_slackness(g, S, f.cert, d, 0)
                                           : check_cover_slackness(g, S, f.cert, 0, d);
}

int report_failure(const BoundReport& r) {
  std::cerr << "verification failed\n";
  for (const Failure& f : r.failures) std::cerr << "  " << f.clause << ": " << f.witness << '\n';
  return kVerifyFailed;
}

struct VerifyArgs {
  std::string instance, solution, certificate;
  std::string problem = "max-weight-factor";
};

int run_verify(const VerifyArgs& a) {
  const MultiGraph g = read_instance(a.instance);
  auto sin = open_in(a.solution);
  const EdgeSubset S = parse_solution(sin, g);
  const Problem p = parse_problem(a.problem);
  if (auto why = feasibility_error(g, S, p)) {
    std::cerr << "verification failed\n  feasibility: " << *why << '\n';
    return kVerifyFailed;
  }
  if (!a.certificate.empty()) {
    auto cin = open_in(a.certificate);
    const CertificateFile f = parse_certificate(cin, g);
    const BoundReport r = check(g, S, f);
    if (!r.pass) return report_failure(r);
    std::cout << format_report(r);
  }
  std::cout << "ok value " << S.weight(g) << '\n';
  return kOk;
}

struct SolveArgs {
  std::string input = "-";
  std::string problem = "max-weight-factor";
  std::string eps = "1/4";
  std::string algo = "auto";
  std::string out_solution, out_cert;
  bool verify = false;
  bool stats = false;
};

void print_stats(const Solution& s) {
  const SolveStats& st = s.stats;
  std::cerr << "c algorithm " << to_string(s.algorithm) << "\nc eps " << s.eps.to_string()
            << "\nc iterations " << st.iterations << "\nc iterations_per_scale";
  for (int i : st.iterations_per_scale) std::cerr << ' ' << i;
  std::cerr << "\nc augmentations " << st.augmentations << "\nc contractions " << st.contractions
            << "\nc dissolutions " << st.dissolutions << "\nc search_passes " << st.search_passes
            << "\nc phase2_passes " << st.phase2_passes << "\nc max_scans " << st.max_scans
            << '\n';
  if (s.has_certificate)
    std::cerr << "c gap " << s.report.gap.to_string() << "\nc dual_bound "
              << s.report.dual_bound.to_string() << '\n';
}

int run_solve(const SolveArgs& a) {
  const MultiGraph g = read_instance(a.input);
  SolveConfig cfg;
  cfg.problem = parse_problem(a.problem);
  cfg.eps = parse_rational(a.eps);
  cfg.algorithm = parse_algorithm(a.algo);
  cfg.debug = debug_from_env();
  const Solution s = solve(g, cfg);
  if (!s.feasible) {
    std::cerr << "infeasible: " << s.infeasible_reason << '\n';
    return kInfeasible;
  }
  const Objective obj = is_cover(cfg.problem) ? Objective::kCover : Objective::kFactor;
  const std::string sol_text = format_solution(g, s.edges);
  const std::string cert_text =
      s.has_certificate ? format_certificate(s.cert, obj, &s.report) : std::string();

  if (a.out_solution.empty())
    std::cout << "c value " << s.value << '\n' << sol_text;
  else
    write_file(a.out_solution, sol_text);
  if (!a.out_cert.empty()) {
    if (!s.has_certificate) std::cerr << "note: no certificate for " << a.problem << '\n';
    else write_file(a.out_cert, cert_text);
  }
  if (a.stats) print_stats(s);

  if (a.verify) {
    // Check what was written, not the in-memory objects.
    std::istringstream sin(sol_text);
    const EdgeSubset S = parse_solution(sin, g);
    if (auto why = feasibility_error(g, S, cfg.problem)) {
      std::cerr << "verification failed\n  feasibility: " << *why << '\n';
      return kVerifyFailed;
    }
    if (s.has_certificate) {
      std::istringstream cin(cert_text);
      const BoundReport r = check(g, S, parse_certificate(cin, g));
      if (!r.pass) return report_failure(r);
    }
    std::cerr << "c verified\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate maximum weight f-factors and minimum weight f-edge covers"};
  app.require_subcommand(1);

  SolveArgs sa;
  VerifyArgs va;
  bool verify_only = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("-i,--input", sa.input, "instance file, - for stdin");
  solve_cmd->add_option("-p,--problem", sa.problem,
                        "max-weight-factor | min-weight-cover | max-card-factor | "
                        "min-card-cover | min-weight-1-cover");
  solve_cmd->add_option("-e,--eps", sa.eps, "accuracy p/q in (0,1)");
  solve_cmd->add_option("-a,--algo", sa.algo, "small-weight | scaling | linear | auto");
  solve_cmd->add_option("--output-solution", sa.out_solution);
  solve_cmd->add_option("--output-cert", sa.out_cert);
  solve_cmd->add_flag("--verify", sa.verify, "re-check the written solution and certificate");
  solve_cmd->add_flag("--stats", sa.stats, "print counters to stderr");
  solve_cmd->add_flag("--verify-only", verify_only,
                      "skip solving; check --solution and --cert against --input");
  solve_cmd->add_option("--solution", va.solution);
  solve_cmd->add_option("--cert", va.certificate);

  auto* verify_cmd = app.add_subcommand("verify", "check a solution and optional certificate");
  verify_cmd->add_option("-i,--input", va.instance)->required();
  verify_cmd->add_option("-s,--solution", va.solution)->required();
  verify_cmd->add_option("-c,--cert", va.certificate);
  verify_cmd->add_option("-p,--problem", va.problem);

  GeneratorConfig gc;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "write a random instance");
  gen_cmd->add_option("-n", gc.n);
  gen_cmd->add_option("-m", gc.m);
  gen_cmd->add_option("-W,--max-weight", gc.max_weight);
  gen_cmd->add_option("--f-min", gc.f_min);
  gen_cmd->add_option("--f-max", gc.f_max);
  gen_cmd->add_option("--seed", gc.seed);
  gen_cmd->add_option("--p-loop", gc.p_loop);
  gen_cmd->add_option("--p-parallel", gc.p_parallel);
  gen_cmd->add_option("-o,--output", gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*solve_cmd) {
      if (!verify_only) return run_solve(sa);
      if (va.solution.empty()) throw InputError("--verify-only needs --solution");
      va.instance = sa.input;
      va.problem = sa.problem;
      return run_verify(va);
    }
    if (*verify_cmd) return run_verify(va);
    const std::string text = format_instance(generate_instance(gc));
    if (gen_out.empty()) std::cout << text;
    else write_file(gen_out, text);
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const StructuralError& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
