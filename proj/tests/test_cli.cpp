#include <filesystem>
#include <fstream>
#include <sstream>

#include "arsim/cli.hpp"
#include "arsim/corpus.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace arsim;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "arsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("arsim_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kTrace = ARSIM_DATA_DIR "/fig8.trace";
const std::string kConfig = ARSIM_DATA_DIR "/fig8.cfg";

}  // namespace

TEST_CASE("simulate json report") {
  auto r = run({"simulate", kTrace, "--config", kConfig, "--report", "json"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["summary"]["total_cycles"] == 4.0);
  CHECK(run({"simulate", kTrace, "--config", kConfig, "--report", "json"}).out == r.out);
}

TEST_CASE("simulate table report") {
  auto r = run({"simulate", kTrace, "--config", kConfig, "--per-instruction"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("total cycles:  4") != std::string::npos);
  CHECK(r.out.find("1000  mul") != std::string::npos);
}

TEST_CASE("sensitivity flags p1 alone") {
  auto csv = tmp("fig8.csv");
  auto r = run({"sensitivity", kTrace, "--config", kConfig, "--resources", "all", "--weights", "2", "--report", "json",
                "--heatmap", csv});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  int flagged = 0;
  for (const auto& v : doc["verdicts"]) {
    if (v["is_bottleneck"] == true) {
      ++flagged;
      CHECK(v["parameters"] == nlohmann::json::array({"p1"}));
    }
  }
  CHECK(flagged == 1);
  CHECK(slurp(csv).find("p1,2,3.5,0.14285714285714285") != std::string::npos);

  auto svg = tmp("fig8.svg");
  CHECK(run({"sensitivity", kTrace, "--config", kConfig, "--heatmap", svg}).code == 0);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(run({"sensitivity", kTrace, "--config", kConfig, "--heatmap", tmp("x.png")}).code == 1);
}

TEST_CASE("sensitivity subsets") {
  auto r = run({"sensitivity", kTrace, "--config", kConfig, "--weights", "2", "--subsets", "p6,p0+p2+p3+p5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p0+p2+p3+p5") != std::string::npos);
  auto k2 = run({"sensitivity", kTrace, "--config", kConfig, "--resources", "all", "--weights", "2", "--subsets", "k=2"});
  REQUIRE(k2.code == 0);
  CHECK(k2.out.find("p5+p6") != std::string::npos);
}

TEST_CASE("gen-kernel") {
  auto trace = tmp("gen.trace");
  auto cfg = tmp("gen.cfg");
  REQUIRE(run({"gen-kernel", "fig8", "--out", trace, "--config-out", cfg}).code == 0);
  CHECK(slurp(trace) == slurp(kTrace));
  auto stdout_run = run({"gen-kernel", "latency-chain", "--iters", "3"});
  REQUIRE(stdout_run.code == 0);
  CHECK(parse_trace(stdout_run.out).size() == 3);
}

TEST_CASE("input errors exit 1") {
  CHECK(run({"simulate", "missing.trace", "--config", kConfig}).code == 1);
  CHECK(run({"simulate", kTrace, "--config", "missing.cfg"}).code == 1);
  auto unknown = run({"simulate", kTrace, "--config", kConfig, "--bogus"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("simulate") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"sensitivity", kTrace, "--config", kConfig, "--weights", "0.5"}).code == 1);
  CHECK(run({"sensitivity", kTrace, "--config", kConfig, "--resources", "nosuch"}).code == 1);
  CHECK(run({"gen-kernel", "nosuch"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}
