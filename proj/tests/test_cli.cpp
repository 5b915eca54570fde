#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "toricdist/cli.hpp"
#include "toricdist/error.hpp"
#include "toricdist/polytope.hpp"

using namespace toricdist;

namespace {

std::string data(const std::string& name) { return std::string(TORICDIST_DATA_DIR) + "/" + name; }

struct Run {
  int code = 0;
  std::string output;
};

Run run(std::vector<std::string> args) {
  const auto out = std::filesystem::temp_directory_path() / "toricdist_cli_test.out";
  std::filesystem::remove(out);
  args.insert(args.begin(), "toricdist");
  args.push_back("--out");
  args.push_back(out.string());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate") {
    const auto ok = run({"--polytope", data("seven_simplex.json"), "--cmd", "validate"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.output.find("\"delzant\": true") != std::string::npos);
    const auto bad = run({"--polytope", data("bad_triangle.json"), "--cmd", "validate"});
    CHECK(bad.code == kExitInvalid);
    CHECK(bad.output.find("\"det\": 2") != std::string::npos);
  }

  TEST_CASE("missing files and bad flags are invalid input") {
    CHECK(run({"--polytope", data("missing.json"), "--cmd", "validate"}).code == kExitInvalid);
    CHECK(run({"--polytope", data("simplex1.json"), "--cmd", "nope"}).code == kExitInvalid);
    CHECK(run({"--polytope", data("simplex1.json"), "--cmd", "norms", "--N", "2", "--alpha", "3"}).code ==
          kExitInvalid);
  }

  TEST_CASE("unreachable tolerance maps to the convergence exit code") {
    const auto r = run({"--polytope", data("simplex1.json"), "--cmd", "dist", "--N", "3", "--alpha", "0",
                        "--tgrid", "0.5", "--region-tol", "1e-14"});
    CHECK(r.code == kExitNoConvergence);
  }

  TEST_CASE("peak on 7 Sigma") {
    const auto r = run({"--polytope", data("seven_simplex.json"), "--weights", "binomial:7", "--cmd", "peak", "--x",
                        "2,3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.output.find("\"detA\": 1.714285714") != std::string::npos);
  }

  TEST_CASE("dist writes csv") {
    const auto r = run({"--polytope", data("simplex1.json"), "--cmd", "dist", "--N", "4", "--alpha", "1",
                        "--tgrid", "0.2,0.5"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.output.find("scaling,N,t,value,limit_value") != std::string::npos);
  }

  TEST_CASE("t-grid specs") {
    const auto g = parse_tgrid("geom:0.01:1:3");
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(0.1));
    const auto l = parse_tgrid("lin:0:1:5");
    CHECK(l[2] == doctest::Approx(0.5));
    CHECK(parse_tgrid("0.5,2") == std::vector<double>{0.5, 2});
    CHECK_THROWS_AS(parse_tgrid("cube:0:1:3"), ParseError);
    CHECK_THROWS_AS(parse_tgrid("geom:0:1"), ParseError);
  }

  TEST_CASE("weight specs") {
    const auto p = standard_simplex(1, 1);
    CHECK(parse_weights("unit", p).values() == std::vector<double>{1, 1});
    CHECK(parse_weights("binomial:1", p).values() == std::vector<double>{1, 1});
    CHECK(parse_weights("file:" + data("simplex1_weights.json"), p).values() == std::vector<double>{4, 1});
    CHECK_THROWS_AS(parse_weights("gauss", p), ParseError);
  }
}
