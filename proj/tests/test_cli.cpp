// End-to-end tests for the command-line driver.  Each case runs the built
// binary with popen and checks the exit code and output text.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(MUTLIN_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe))
    r.output += buf.data();
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("sat command: verdicts and exit codes") {
  auto sat = run_cli("sat -f \"#(p) > 2\"");
  CHECK(sat.exit_code == 0);
  CHECK(contains(sat.output, "SAT"));

  auto unsat = run_cli("sat -f \"p & ~p\"");
  CHECK(unsat.exit_code == 1);
  CHECK(contains(unsat.output, "UNSAT"));

  auto bad = run_cli("sat -f \"p & (\"");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.output, "parse error"));
  CHECK(contains(bad.output, "offset"));

  // no input at all, and two inputs at once, are both usage errors
  CHECK(run_cli("sat").exit_code == 2);
  CHECK(run_cli("sat -f p --gctl p").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("model command: witness JSON validates") {
  auto r = run_cli("model -f \"#(#(p1) > 1 & p2) > 4\" --json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["sat"] == true);
  CHECK(j["model"]["form"] == "binary");
  CHECK(j["model"]["nodes"].size() == 7);
  CHECK(j["stats"]["iterations"] == 3);

  auto none = run_cli("model -f \"~T\" --json");
  CHECK(none.exit_code == 1);
  auto jn = nlohmann::json::parse(none.output);
  CHECK(jn["sat"] == false);
  CHECK(!jn.contains("model"));
}

TEST_CASE("file arguments are read, literals are not") {
  std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                     "/cli_q1.cp";
  {
    std::ofstream out(path);
    out << "dn::p1[rt::p2 > 1]\n";
  }
  auto r = run_cli("contains --cpath " + path + " --cpath2 " + path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "contained"));

  // the same text passed literally parses identically
  auto lit = run_cli("contains --cpath \"dn::p1[rt::p2 > 1]\" --cpath2 " + path);
  CHECK(lit.exit_code == 0);
  std::remove(path.c_str());
}

TEST_CASE("emptiness and containment over types") {
  CHECK(run_cli("empty --ctype \"p[eps > 0]\"").exit_code == 0);

  auto ne = run_cli("empty --ctype \"let \\$x = p[eps <= 0] in \\$x\" --json");
  CHECK(ne.exit_code == 1);
  auto j = nlohmann::json::parse(ne.output);
  CHECK(j["holds"] == false);
  CHECK(j["counterexample"]["form"] == "nary");

  CHECK(run_cli("contains --ctype \"p1[p2[eps <= 0] <= 1]\" "
                "--ctype2 \"p1[p2[eps <= 0] <= 2]\"")
            .exit_code == 0);
  auto no = run_cli("contains --ctype \"p1[p2[eps <= 0] <= 2]\" "
                    "--ctype2 \"p1[p2[eps <= 0] <= 1]\"");
  CHECK(no.exit_code == 1);
  CHECK(contains(no.output, "not contained"));
  CHECK(contains(no.output, "counterexample"));

  CHECK(run_cli("equiv --ctype \"p[eps <= 0] + q[eps <= 0]\" "
                "--ctype2 \"q[eps <= 0] + p[eps <= 0]\"")
            .exit_code == 0);

  // emptiness needs a query or type input, not a plain formula
  CHECK(run_cli("empty -f \"p\"").exit_code == 2);
}

TEST_CASE("translate prints the logic formula") {
  auto r = run_cli("translate --gctl \"EX{>2} p\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "#("));
  CHECK(contains(r.output, "o1"));

  auto f = run_cli("translate -f \"mu \\$x . p | <dn>\\$x\"");
  CHECK(f.exit_code == 0);
  CHECK(contains(f.output, "mu $x"));
}

TEST_CASE("gctl satisfiability goes through the embedding") {
  CHECK(run_cli("sat --gctl \"EX{>1} p & ~EX{>2} p\"").exit_code == 0);
  CHECK(run_cli("sat --gctl \"EX{>0} p & AX{<=0} p\"").exit_code == 1);
}

TEST_CASE("oracle-check brute-forces small trees") {
  auto hit = run_cli("oracle-check -f \"#(p) > 1\" --bound 4 --json");
  CHECK(hit.exit_code == 0);
  auto j = nlohmann::json::parse(hit.output);
  CHECK(j["sat"] == true);

  auto miss = run_cli("oracle-check -f \"#(p) > 9\" --bound 3");
  CHECK(miss.exit_code == 1);
  CHECK(contains(miss.output, "UNSAT within 3 nodes"));
}

TEST_CASE("budget exhaustion reports exit code 3") {
  auto r = run_cli("sat -f \"#(#(p1) > 1 & p2) > 4\" --max-nodes 10");
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "budget"));
}
