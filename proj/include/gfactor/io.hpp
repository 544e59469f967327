#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "gfactor/certificates.hpp"
#include "gfactor/multigraph.hpp"

namespace gfactor {

/// Malformed input; line is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Instance: "p gfactor <n> <m>", then "v <id> <f>" and "e <u> <v> <w>".
// Lines starting with 'c' and blank lines are ignored.
MultiGraph parse_instance(std::istream& in);
std::string format_instance(const MultiGraph& g);

// Solution: "s <k>" followed by k lines "e <edge-id>".
EdgeSubset parse_solution(std::istream& in, const MultiGraph& g);
std::string format_solution(const MultiGraph& g, const EdgeSubset& S);

struct CertificateFile {
  Certificate cert;
  Objective objective = Objective::kFactor;
  // Footer "r <key> <value>" lines as written; informational only.
  std::map<std::string, std::string> report;
};

// Certificate: "y <v> <units>", "B <id> parent= beta= eta= z= verts= children= cycle=",
// "s <e> <lower> <upper>", footer "unit 1/<den>", "delta <p/q>", "eps <p/q>",
// "algorithm <name>", "objective factor|cover" and report lines.
// Blossoms are numbered children first.
CertificateFile parse_certificate(std::istream& in, const MultiGraph& g);
std::string format_certificate(const Certificate& cert, Objective objective,
                               const BoundReport* report);

/// One "key value" line per field.
std::string format_report(const BoundReport& r);

struct GeneratorConfig {
  int n = 8;
  int m = 14;
  Weight max_weight = 8;
  int f_min = 0;
  int f_max = 3;
  std::uint64_t seed = 1;
  double p_loop = 0.05;
  double p_parallel = 0.1;
};

/// Deterministic for a fixed config on every platform.
MultiGraph generate_instance(const GeneratorConfig& cfg);

}  // namespace gfactor
