#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = GFACTOR_CLI;
const std::string kFixtures = GFACTOR_FIXTURES;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("gfactor_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("solve and verify the triangle fixture") {
  const fs::path d = scratch();
  const std::string tri = kFixtures + "/triangle.txt";
  for (const char* algo : {"small-weight", "scaling", "linear", "auto"}) {
    CHECK(run("solve --input " + tri + " --algo " + algo + " --verify --stats") == 0);
  }
  for (const char* p : {"min-weight-cover", "max-card-factor", "min-card-cover",
                        "min-weight-1-cover"})
    CHECK(run("solve --input " + tri + " --problem " + p + " --verify") == 0);

  const auto sol = d / "tri.sol";
  const auto cert = d / "tri.cert";
  REQUIRE(run("solve --input " + tri + " --eps 1/4 --output-solution " + sol.string() +
              " --output-cert " + cert.string()) == 0);
  CHECK(slurp(sol) == "s 1\ne 0\n");
  CHECK(run("verify --input " + tri + " --solution " + sol.string() + " --cert " +
            cert.string()) == 0);
  CHECK(run("solve --verify-only --input " + tri + " --solution " + sol.string() + " --cert " +
            cert.string()) == 0);
  fs::remove_all(d);
}

TEST_CASE("cover with too little degree is infeasible") {
  CHECK(run("solve --problem min-weight-cover --input " + kFixtures + "/infeasible_cover.txt") ==
        2);
  CHECK(run("solve --problem min-card-cover --input " + kFixtures + "/infeasible_cover.txt") ==
        2);
}

TEST_CASE("tampered certificate fails verify-only") {
  const fs::path d = scratch();
  const std::string tri = kFixtures + "/triangle.txt";
  const auto sol = d / "t.sol";
  const auto cert = d / "t.cert";
  REQUIRE(run("solve --input " + tri + " --output-solution " + sol.string() + " --output-cert " +
              cert.string()) == 0);
  // Edge 0 is matched; a huge y(1) breaks its tightness.
  std::string text = slurp(cert);
  const auto pos = text.find("y 1 ");
  REQUIRE(pos != std::string::npos);
  const auto eol = text.find('\n', pos);
  text.replace(pos, eol - pos, "y 1 1000");
  std::ofstream(cert) << text;
  CHECK(run("solve --verify-only --input " + tri + " --solution " + sol.string() + " --cert " +
            cert.string()) == 3);
  CHECK(run("verify --input " + tri + " --solution " + sol.string() + " --cert " +
            cert.string()) == 3);

  // A solution that breaks the degree bound fails too.
  std::ofstream(sol) << "s 2\ne 0\ne 2\n";
  CHECK(run("verify --input " + tri + " --solution " + sol.string()) == 3);
  fs::remove_all(d);
}

TEST_CASE("malformed input exits 1") {
  CHECK(run("solve --input " + kFixtures + "/malformed.txt") == 1);
  CHECK(run("solve --input /nonexistent/file") == 1);
  CHECK(run("solve --input " + kFixtures + "/triangle.txt --eps 2") == 1);
  CHECK(run("solve --input " + kFixtures + "/triangle.txt --problem bogus") == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("generate is deterministic") {
  const fs::path d = scratch();
  const auto a = d / "a.txt";
  const auto b = d / "b.txt";
  REQUIRE(run("generate -n 6 -m 9 --seed 11 -o " + a.string()) == 0);
  REQUIRE(run("generate -n 6 -m 9 --seed 11 -o " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("p gfactor 6 9\n", 0) == 0);
  CHECK(run("solve --input " + a.string() + " --verify") == 0);
  fs::remove_all(d);
}

TEST_CASE("debug mode from the environment") {
  const std::string cmd = "GFACTOR_DEBUG_ASSERT=1 " + kCli + " solve --input " + kFixtures +
                          "/triangle.txt --algo linear --verify >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  CHECK((WIFEXITED(st) && WEXITSTATUS(st) == 0));
}
