// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <functional>
#include <iostream>
#include <list>
#include <random>
#include <sstream>
#include <thread>

#include "arsim/branch.hpp"
#include "arsim/cache.hpp"
#include "arsim/cli.hpp"
#include "arsim/core.hpp"
#include "arsim/corpus.hpp"
#include "arsim/report.hpp"
#include "arsim/sensitivity.hpp"
#include "reference_cache.hpp"

using namespace arsim;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const SensitivityPoint* find_point(const SensitivityReport& r, const std::string& label, double w) {
  for (const auto& p : r.points) {
    if (parameter_label(p.parameters) == label && p.weight == w) return &p;
  }
  return nullptr;
}

Outcome fig8_timing() {
  Outcome o;
  auto k = gen_fig8();
  auto r = simulate(resolve_trace(k.trace, k.config), k.config, {true});
  o.require(r.t_end == std::vector<double>{1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 4, 4}, "t_end sequence differs");
  o.require(r.total_cycles == 4.0, "total is " + format_number(r.total_cycles));
  return o;
}

Outcome fig8_sensitivity() {
  Outcome o;
  auto k = gen_fig8();
  auto events = resolve_trace(k.trace, k.config);
  std::vector<double> w{2.0};
  auto params = k.config.throughput_parameters();
  o.require(params.size() == 6, "expected six ports");
  auto single = sweep_single(events, k.config, params, w);
  for (const auto& p : single.points) {
    if (p.parameters[0] == "p1") {
      o.require(p.speedup > 0.0 && p.time == 3.5, "p1 accelerated total " + format_number(p.time));
    } else {
      o.require(p.speedup == 0.0, p.parameters[0] + " speedup " + format_number(p.speedup));
    }
  }
  std::vector<std::vector<std::string>> groups{{"p6"}, {"p0", "p2", "p3", "p5"}};
  auto grouped = sweep_subsets(events, k.config, groups, 2.0);
  auto* p6 = find_point(grouped, "p6", 2.0);
  auto* rest = find_point(grouped, "p0+p2+p3+p5", 2.0);
  o.require(p6 && p6->time == 4.0, "p6 accelerated total differs from 4");
  o.require(rest && rest->time == 4.0, "{p0,p2,p3,p5} accelerated total differs from 4");
  return o;
}

Outcome jacobi() {
  Outcome o;
  auto k = gen_jacobi_like(10000);
  auto events = resolve_trace(k.trace, k.config);
  auto params = k.config.accelerable_parameters();
  auto report = sweep_single(events, k.config, params, kDefaultWeights);
  const auto& top = report.verdicts.front();
  o.require(top.parameters == std::vector<std::string>{"p23"}, "top bottleneck is " + parameter_label(top.parameters));
  auto* p = find_point(report, "p23", 1.01);
  o.require(p && p->speedup >= 0.008 && p->speedup <= 0.012,
            "p23 speedup at 1.01 is " + (p ? format_number(p->speedup) : std::string("missing")));

  auto table = render_instruction_table(simulate(events, k.config));
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end()) return std::nullopt;
    return static_cast<std::size_t>(it - table.columns.begin());
  };
  auto p23 = column("p23"), p4 = column("p4"), fe = column("FRONTEND");
  o.require(p23 && p4 && fe, "missing p23/p4/FRONTEND column");
  if (!o.ok) return o;
  auto near = [](double share, double target) { return std::abs(share - target) <= 0.02; };
  int loads = 0, stores = 0;
  for (const auto& row : table.rows) {
    o.require(near(row.shares[*fe], 0.05), "F-E share " + format_percent(row.shares[*fe]));
    if (row.shares[*p23] > 0) {
      ++loads;
      o.require(near(row.shares[*p23], 0.10), "p23 share " + format_percent(row.shares[*p23]));
    }
    if (row.shares[*p4] > 0) {
      ++stores;
      o.require(near(row.shares[*p4], 0.20), "p4 share " + format_percent(row.shares[*p4]));
    }
  }
  o.require(loads == 10 && stores == 2, "unexpected p23/p4 row counts");
  return o;
}

Outcome latency_chain() {
  Outcome o;
  auto k = gen_latency_chain(1000);
  auto events = resolve_trace(k.trace, k.config);
  o.require(simulate(events, k.config).total_cycles == 4000.0, "total differs from 4000");
  auto params = k.config.accelerable_parameters();
  auto report = sweep_single(events, k.config, params, kDefaultWeights);
  for (const auto& v : report.verdicts) {
    const bool lat = v.parameters[0] == "INST_LAT";
    o.require(v.is_bottleneck == lat, parameter_label(v.parameters) + " misclassified");
    if (!lat) o.require(v.speedup == 0.0, parameter_label(v.parameters) + " speedup " + format_number(v.speedup));
  }
  return o;
}

Outcome identity() {
  Outcome o;
  for (const auto& name : kernel_names()) {
    auto k = generate(KernelSpec{name});
    auto events = resolve_trace(k.trace, k.config);
    std::vector<double> one{1.0};
    auto params = k.config.accelerable_parameters();
    for (const auto& p : sweep_single(events, k.config, params, one).points) {
      o.require(p.speedup == 0.0, name + ": " + p.parameters[0] + " speedup " + format_number(p.speedup));
    }
  }
  return o;
}

Outcome monotonicity() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> weight(1.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    auto k = gen_random_mix(1 + rng() % 200, 1 + static_cast<std::uint32_t>(rng() % 6), rng());
    auto events = resolve_trace(k.trace, k.config);
    auto params = k.config.accelerable_parameters();
    const auto& p = params[rng() % params.size()];
    const double w = weight(rng);
    double base = simulate(events, k.config).total_cycles;
    double fast = simulate(events, apply_weights(k.config, {{p, w}})).total_cycles;
    o.require(fast <= base, "trace " + std::to_string(i) + ": " + p + " x" + format_number(w) + " slowed the run");
  }
  return o;
}

Outcome cache_oracle() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int g = 0; g < 50; ++g) {
    std::vector<CacheLevelConfig> levels;
    std::uint64_t line = 16u << (rng() % 3);
    std::uint64_t sets = 1u << (rng() % 4);
    std::uint64_t ways = 1u << (rng() % 3);
    for (std::size_t n = 1 + rng() % 3, l = 0; l < n; ++l) {
      levels.push_back({"L" + std::to_string(l + 1), sets * ways * line, ways, line, 1.0});
      sets <<= rng() % 3;
      ways <<= rng() % 2;
    }
    CacheHierarchy h(levels, MemoryConfig{});
    testing::ReferenceHierarchy ref(levels);
    const std::uint64_t span = 4 * sets * ways;
    for (int i = 0; i < 1000; ++i) {
      std::uint64_t addr = (rng() % span) * line;
      o.require(h.lookup_and_fill(addr) == ref.access(addr), "geometry " + std::to_string(g) + " access " + std::to_string(i));
    }
  }

  // 2-way sets against a true LRU list.
  PlruSet set(2);
  std::list<std::uint64_t> lru;  // most recent first
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t tag = rng() % 5;
    if (auto way = set.find(tag)) {
      set.touch(*way);
      lru.remove(tag);
    } else {
      std::optional<std::uint64_t> evicted_ref;
      if (lru.size() == 2) {
        evicted_ref = lru.back();
        lru.pop_back();
      }
      std::optional<std::uint64_t> evicted;
      if (set.tag_at(0) && set.tag_at(1)) evicted = set.tag_at(set.victim());
      set.insert(tag);
      o.require(evicted == evicted_ref, "2-way eviction differs from LRU at access " + std::to_string(i));
    }
    lru.push_front(tag);
  }
  return o;
}

Outcome branch_warmup() {
  Outcome o;
  BranchConfig cfg;
  cfg.enabled = true;
  BranchPredictor bp(cfg);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < 100000; ++i) {
    BranchInfo actual{BranchKind::conditional, i % 2 == 0, 0x2000};
    auto p = bp.predict(0x1234, actual.kind);
    if (i >= 90000 && is_mispredicted(p, actual)) ++wrong;
    bp.update(0x1234, actual);
  }
  o.require(wrong < 100, std::to_string(wrong) + " mispredictions in the last 10^4");

  // Disabled predictor: reports equal those of the same trace with no branch info at all.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto k = gen_random_mix(200, 6, seed);
    k.config.branch.enabled = false;
    auto stripped = k.trace;
    for (auto& e : stripped) e.branch = BranchInfo{};
    auto with = run_report_json(simulate(resolve_trace(k.trace, k.config), k.config, {true}), true);
    auto without = run_report_json(simulate(resolve_trace(stripped, k.config), k.config, {true}), true);
    o.require(with == without, "disabled predictor changed the report for seed " + std::to_string(seed));
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::string trace = ARSIM_DATA_DIR "/fig8.trace";
  const std::string config = ARSIM_DATA_DIR "/fig8.cfg";
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "arsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
  };
  const std::vector<std::string> simulate_args{"simulate", trace, "--config", config, "--report", "json", "--per-instruction"};
  const auto reference = run(simulate_args);
  o.require(!reference.empty(), "simulate produced no report");

  std::vector<std::string> outputs(8);
  std::vector<std::string> sweeps(2);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < outputs.size(); ++i) pool.emplace_back([&, i] { outputs[i] = run(simulate_args); });
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
      pool.emplace_back([&, i] {
        sweeps[i] = run({"sensitivity", trace, "--config", config, "--report", "json", "--threads", i ? "8" : "1",
                         "--weights", "1.01,1.5,2", "--subsets", "k=3"});
      });
    }
  }
  for (const auto& out : outputs) o.require(out == reference, "simulate report changed between runs");
  o.require(sweeps[0] == sweeps[1], "sensitivity report depends on thread count");

  auto k = gen_random_mix(200, 6, 99);
  auto events = resolve_trace(k.trace, k.config);
  auto first = run_report_json(simulate(events, k.config, {true}), true);
  for (int i = 0; i < 5; ++i) {
    o.require(run_report_json(simulate(events, k.config, {true}), true) == first, "random-mix report changed");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "fig8 golden timing", 1.0, fig8_timing},
      {2, "fig8 sensitivity isolates p1", 1.0, fig8_sensitivity},
      {3, "jacobi-like p23 bottleneck and instruction shares", 10.0, jacobi},
      {4, "latency chain bound by INST_LAT", 1.0, latency_chain},
      {5, "identity weight gives zero speedup", 0.0, identity},
      {6, "acceleration monotonicity", 0.0, monotonicity},
      {7, "cache and PLRU oracles", 0.0, cache_oracle},
      {8, "branch warmup and disabled-predictor transparency", 0.0, branch_warmup},
      {9, "deterministic reports", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      o.ok = false;
      o.detail = "took " + format_number(seconds) + " s, limit " + format_number(c.limit_seconds) + " s";
    }
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << seconds;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << time.str() << " s)";
    if (!o.ok) std::cout << " -- " << o.detail;
    std::cout << '\n';
    if (!o.ok) ++failures;
  }
  std::cout << "N/A   criterion 10: hardware accuracy campaign, declared not reproducible\n";
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
