#include "arsim/corpus.hpp"
#include "arsim/error.hpp"
#include "arsim/sensitivity.hpp"
#include "doctest.h"

using namespace arsim;

namespace {

const SensitivityPoint& point(const SensitivityReport& r, const std::string& label, double w) {
  for (const auto& p : r.points) {
    if (parameter_label(p.parameters) == label && p.weight == w) return p;
  }
  FAIL("missing point ", label);
  return r.points.front();
}

// Two unit-gap resources used alternately by independent events: each is
// saturated, neither alone limits the run.
Kernel balanced_pair(std::size_t n) {
  Kernel k;
  k.config = load_config(R"({"resources": [{"name": "a", "gap": 1}, {"name": "b", "gap": 1}], "window": 64})");
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    text += R"({"pc":)" + std::to_string(i % 2) + R"(,"resources":[")" + (i % 2 ? "b" : "a") + R"("],"latency":1})" + "\n";
  }
  k.trace = parse_trace(text);
  return k;
}

}  // namespace

TEST_CASE("speedup") {
  CHECK(speedup(4.0, 3.5) == doctest::Approx(1.0 / 7.0));
  CHECK(speedup(4.0, 3.5) == 0.14285714285714285);
  CHECK(speedup(4.0, 4.0) == 0.0);
  CHECK(speedup(100.0, 50.0) == 1.0);
  CHECK_THROWS_AS(speedup(0.0, 1.0), InputError);
}

TEST_CASE("fig8 sweep at weight 2") {
  auto k = gen_fig8();
  auto events = resolve_trace(k.trace, k.config);
  std::vector<double> weights{2.0};
  auto params = k.config.throughput_parameters();
  auto report = sweep_single(events, k.config, params, weights);
  CHECK(report.base_time == 4.0);
  REQUIRE(report.points.size() == 6);
  for (const auto& p : report.points) {
    if (p.parameters[0] == "p1") {
      CHECK(p.time == 3.5);
      CHECK(p.speedup > 0.0);
    } else {
      CHECK(p.time == 4.0);
      CHECK(p.speedup == 0.0);
    }
  }
  auto verdicts = classify(report, kDefaultThreshold);
  CHECK(verdicts.front().parameters == std::vector<std::string>{"p1"});
  CHECK(verdicts.front().is_bottleneck);
  CHECK(std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.is_bottleneck; }) == 1);

  std::vector<std::vector<std::string>> subsets{{"p6"}, {"p0", "p2", "p3", "p5"}};
  auto grouped = sweep_subsets(events, k.config, subsets, 2.0);
  CHECK(point(grouped, "p6", 2.0).time == 4.0);
  CHECK(point(grouped, "p0+p2+p3+p5", 2.0).time == 4.0);
}

TEST_CASE("co-saturated pair needs joint acceleration") {
  auto k = balanced_pair(2000);
  auto events = resolve_trace(k.trace, k.config);
  std::vector<std::vector<std::string>> subsets{{"a"}, {"b"}, {"a", "b"}};
  auto r = sweep_subsets(events, k.config, subsets, 1.15);
  CHECK(r.base_time == 1000.0);
  CHECK(point(r, "a", 1.15).speedup == 0.0);
  CHECK(point(r, "b", 1.15).speedup == 0.0);
  // Joint: the last use starts at 999 / 1.15 and ends one cycle later.
  CHECK(point(r, "a+b", 1.15).speedup == doctest::Approx(1000.0 / (999.0 / 1.15 + 1.0) - 1.0));
  CHECK(point(r, "a+b", 1.15).speedup == doctest::Approx(0.15).epsilon(0.002));
}

TEST_CASE("identity weight gives zero speedup everywhere") {
  for (const auto& name : kernel_names()) {
    auto k = generate(KernelSpec{name, name == "jacobi" ? 200u : 0u, 0, 3});
    auto events = resolve_trace(k.trace, k.config);
    std::vector<double> one{1.0};
    auto params = k.config.accelerable_parameters();
    auto r = sweep_single(events, k.config, params, one);
    for (const auto& p : r.points) CHECK_MESSAGE(p.speedup == 0.0, name, " ", p.parameters[0]);
  }
}

TEST_CASE("results do not depend on the thread count") {
  auto k = gen_random_mix(200, 6, 5);
  auto events = resolve_trace(k.trace, k.config);
  auto params = k.config.accelerable_parameters();
  auto serial = sweep_single(events, k.config, params, kHeadroomWeights, {1});
  auto parallel = sweep_single(events, k.config, params, kHeadroomWeights, {8});
  REQUIRE(serial.points.size() == parallel.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].parameters == parallel.points[i].parameters);
    CHECK(serial.points[i].weight == parallel.points[i].weight);
    CHECK(serial.points[i].time == parallel.points[i].time);
  }
}

TEST_CASE("points are ordered by label then weight") {
  auto k = gen_fig8();
  auto events = resolve_trace(k.trace, k.config);
  std::vector<std::string> params{"p6", "p0"};
  std::vector<double> weights{1.5, 1.1};
  auto r = sweep_single(events, k.config, params, weights);
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[0].parameters[0] == "p0");
  CHECK(r.points[0].weight == 1.1);
  CHECK(r.points[3].parameters[0] == "p6");
  CHECK(r.points[3].weight == 1.5);
  std::vector<double> dup{1.5, 1.5};
  CHECK_THROWS_AS(sweep_single(events, k.config, params, dup), InputError);
}

TEST_CASE("bounded power set") {
  std::vector<std::string> params{"a", "b", "c", "d"};
  auto two = bounded_power_set(params, 2);
  REQUIRE(two.size() == 10);
  CHECK(two[0] == std::vector<std::string>{"a"});
  CHECK(two[3] == std::vector<std::string>{"d"});
  CHECK(two[4] == std::vector<std::string>{"a", "b"});
  CHECK(two[9] == std::vector<std::string>{"c", "d"});
  CHECK(bounded_power_set(params, 10).size() == 15);

  std::vector<std::string> many;
  for (int i = 0; i < 20; ++i) many.push_back("r" + std::to_string(i));
  CHECK_THROWS_AS(bounded_power_set(many, 20), InputError);
  CHECK(bounded_power_set(many, 2).size() == 210);
}

TEST_CASE("parameter labels") {
  std::vector<std::string> p{"p0", "p2"};
  CHECK(parameter_label(p) == "p0+p2");
}
