#include "doctest.h"
#include "gatmonad/syntax.hpp"

#include <array>
#include <cstdio>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace gatmonad;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("star") {
  const Run r = run("star --psi 0,0,2,1,2,3 --phi \"0;0;0,1;0,1;0,0;0,1,1\"");
  CHECK(r.code == 0);
  CHECK(r.out == "0,0,2,1,0,2\n");
  CHECK(run("star --psi 0,0 --phi \"0;0,0\"").code == 2);
}

TEST_CASE("compose-inc and render") {
  CHECK(run("compose-inc --beta 1,3,4 --alpha 1,3").out == "1,4\n");
  const Run dot = run("render --heap 0,0,2,1,0,2 --format dot");
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph heap {", 0) == 0);
  CHECK(dot.out.find("6 -> 2;") != std::string::npos);
  CHECK(run("render --heap 0,1 --format svg").code == 2);
}

TEST_CASE("freegat") {
  const Run none = run("freegat " + fixture("abt.json") + " --rules none --max-degree 5");
  CHECK(none.code == 0);
  CHECK(lines(none.out) == std::vector<std::string>{"|- A type", "|- t : A", "x1 : A |- B(x1) type"});

  // Output re-parses to the same canonical set.
  const Run wps = run("freegat " + fixture("abt.json") + " --rules wps --max-degree 3");
  CHECK(wps.code == 0);
  std::set<std::string> once, twice;
  for (const auto& l : lines(wps.out)) {
    once.insert(l);
    twice.insert(to_string(alpha_canonical(parse_judgement(l))));
  }
  CHECK(once.size() > 10);
  CHECK(once == twice);

  CHECK(run("freegat " + fixture("abt.json") + " --rules wps --max-degree 3 --expr-depth 1").code == 2);
  CHECK(run("freegat " + fixture("abt.json") + " --rules q --max-degree 3").code == 2);
}

TEST_CASE("validate") {
  CHECK(run("validate " + fixture("abt.json")).code == 0);
  CHECK(run("validate " + fixture("bad_degree.json")).code == 1);
  CHECK(run("validate /nonexistent.json").code == 2);
}

TEST_CASE("delta and mult") {
  const Run d = run("delta " + fixture("abt.json") +
                    R"( --element '{"inc":[2],"heap":[0,1],"labels":["A","B"],"gaps":{"1":{"term":"t"}}}')");
  CHECK(d.code == 0);
  CHECK(lines(d.out).back() == "|- B(t) type");
  CHECK(run("delta " + fixture("abt.json") + " --element '{bad'").code == 2);

  const Run w = run("mult --monad w " + fixture("ab.json") +
                    R"( --element '{"heap":[0,0],"labels":[{"heap":[0],"labels":["A"]},{"heap":[0],"labels":["A"]}]}')");
  CHECK(w.code == 0);
  CHECK(Json::parse(w.out) == Json::parse(R"({"heap":[0,0],"labels":["A","A"],"term":null})"));

  const Run s = run("mult --monad s " + fixture("abt.json") +
                    R"( --element '{"inc":[1],"head":{"inc":[2],"head":"B","gaps":{"1":"t"}},"gaps":{}}')");
  CHECK(s.code == 0);
  CHECK(Json::parse(s.out).at("inc") == Json::array({2}));
  CHECK(run("mult --monad q " + fixture("a.json") + " --element '{}'").code == 2);
}

TEST_CASE("check and counterexample") {
  CHECK(run("check " + fixture("ab.json") + " --suite monad-laws --monad w --monad s").code == 0);
  CHECK(run("check " + fixture("a.json") + " --suite cartesian --monad t -N 1 --internal 2").code == 1);
  const Run pb = run("check " + fixture("abx.json") + " --suite pullbacks --other " + fixture("ac.json") +
                     " --over " + fixture("a.json") +
                     R"( --left-map '{"B":"A"}' --right-map '{"C":"A"}' --json)");
  CHECK(pb.code == 0);
  CHECK(Json::parse(pb.out).size() == 4);
  CHECK(run("check " + fixture("a.json") + " --suite nope").code == 2);

  const Run c = run("counterexample --json");
  CHECK(c.code == 0);
  CHECK(Json::parse(c.out).at("passed") == true);
  CHECK(run("counterexample").out.find("linearity") != std::string::npos);
}
