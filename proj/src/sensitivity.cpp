#include "arsim/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "arsim/core.hpp"
#include "arsim/error.hpp"

namespace arsim {
namespace {

struct Job {
  std::vector<std::string> parameters;
  double weight;
  MachineConfig config;
};

// Runs every job, possibly on several threads. Results land by job index.
std::vector<double> run_jobs(std::span<const ResolvedEvent> events, const std::vector<Job>& jobs,
                             const SweepOptions& options) {
  std::vector<double> times(jobs.size(), 0.0);
  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        times[i] = simulate(events, jobs[i].config).total_cycles;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return times;
}

SensitivityReport finish(double base_time, const std::vector<Job>& jobs, const std::vector<double>& times) {
  SensitivityReport report;
  report.base_time = base_time;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    report.points.push_back(
        SensitivityPoint{jobs[i].parameters, jobs[i].weight, times[i], speedup(base_time, times[i])});
  }
  std::stable_sort(report.points.begin(), report.points.end(), [](const auto& a, const auto& b) {
    auto la = parameter_label(a.parameters);
    auto lb = parameter_label(b.parameters);
    if (la != lb) return la < lb;
    return a.weight < b.weight;
  });
  for (std::size_t i = 1; i < report.points.size(); ++i) {
    const auto& a = report.points[i - 1];
    const auto& b = report.points[i];
    if (a.parameters == b.parameters && a.weight == b.weight) {
      throw InputError("parameter set '" + parameter_label(a.parameters) + "' swept twice at the same weight");
    }
  }
  report.verdicts = classify(report, kDefaultThreshold);
  return report;
}

double base_run(std::span<const ResolvedEvent> events, const MachineConfig& config) {
  return simulate(events, config).total_cycles;
}

}  // namespace

double speedup(double base, double accelerated) {
  if (!(base > 0.0) || !(accelerated > 0.0)) throw InputError("speedup needs positive execution times");
  return (base - accelerated) / accelerated;
}

std::string parameter_label(std::span<const std::string> parameters) {
  std::string out;
  for (const auto& p : parameters) {
    if (!out.empty()) out += '+';
    out += p;
  }
  return out;
}

SensitivityReport sweep_single(std::span<const ResolvedEvent> events, const MachineConfig& config,
                               std::span<const std::string> parameters, std::span<const double> weights,
                               const SweepOptions& options) {
  std::vector<Job> jobs;
  for (const auto& p : parameters) {
    for (double w : weights) {
      auto accelerated = apply_weights(config, WeightVector{{p, w}});
      jobs.push_back(Job{{p}, w, std::move(accelerated)});
    }
  }
  const double base = base_run(events, config);
  return finish(base, jobs, run_jobs(events, jobs, options));
}

SensitivityReport sweep_subsets(std::span<const ResolvedEvent> events, const MachineConfig& config,
                                std::span<const std::vector<std::string>> subsets, double weight,
                                const SweepOptions& options) {
  std::vector<Job> jobs;
  for (const auto& subset : subsets) {
    if (subset.empty()) throw InputError("parameter subsets must not be empty");
    WeightVector w;
    for (const auto& p : subset) w[p] = weight;
    if (w.size() != subset.size()) throw InputError("parameter subset '" + parameter_label(subset) + "' repeats a member");
    auto accelerated = apply_weights(config, w);
    jobs.push_back(Job{subset, weight, std::move(accelerated)});
  }
  const double base = base_run(events, config);
  return finish(base, jobs, run_jobs(events, jobs, options));
}

std::vector<std::vector<std::string>> bounded_power_set(std::span<const std::string> parameters,
                                                        std::size_t max_size, std::size_t cap) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> idx;
  const std::size_t n = parameters.size();
  for (std::size_t k = 1; k <= std::min(max_size, n); ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (out.size() == cap) {
        throw InputError("subset enumeration exceeds the cap of " + std::to_string(cap) + " runs");
      }
      std::vector<std::string> subset;
      for (auto i : idx) subset.push_back(parameters[i]);
      out.push_back(std::move(subset));
      // next k-combination in lexicographic order
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

std::vector<BottleneckVerdict> classify(const SensitivityReport& report, double threshold) {
  if (!(threshold >= 0.0)) throw InputError("bottleneck threshold must be >= 0");
  std::map<std::string, BottleneckVerdict> by_label;
  for (const auto& p : report.points) {
    auto [it, inserted] = by_label.try_emplace(parameter_label(p.parameters));
    if (inserted) {
      it->second.parameters = p.parameters;
      it->second.speedup = p.speedup;
    } else {
      it->second.speedup = std::max(it->second.speedup, p.speedup);
    }
  }
  std::vector<BottleneckVerdict> out;
  for (auto& [label, v] : by_label) {
    v.is_bottleneck = v.speedup > threshold;
    out.push_back(std::move(v));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.speedup > b.speedup; });
  return out;
}

}  // namespace arsim
