#pragma once

// Sensitivity analysis: rerun the model with parameters accelerated by a
// weight and report the speedup over the nominal run.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/resolve.hpp"

namespace arsim {

inline constexpr double kDefaultThreshold = 0.01;
inline const std::vector<double> kDefaultWeights{1.01, 1.05, 1.10, 1.15};
inline const std::vector<double> kHeadroomWeights{1.25, 1.5, 2.0};

struct SensitivityPoint {
  std::vector<std::string> parameters;  // accelerated together
  double weight = 1.0;
  double time = 0.0;
  double speedup = 0.0;
};

struct BottleneckVerdict {
  std::vector<std::string> parameters;
  double speedup = 0.0;  // maximum over the swept weights
  bool is_bottleneck = false;
};

struct SensitivityReport {
  double base_time = 0.0;
  std::vector<SensitivityPoint> points;     // ordered by (parameter label, weight)
  std::vector<BottleneckVerdict> verdicts;  // classify(report, kDefaultThreshold)
};

struct SweepOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
};

// base / accelerated - 1, computed as (base - accelerated) / accelerated. Both times must be positive.
double speedup(double base, double accelerated);

// "p0+p2" style label of a parameter set.
std::string parameter_label(std::span<const std::string> parameters);

SensitivityReport sweep_single(std::span<const ResolvedEvent> events, const MachineConfig& config,
                               std::span<const std::string> parameters, std::span<const double> weights,
                               const SweepOptions& options = {});

SensitivityReport sweep_subsets(std::span<const ResolvedEvent> events, const MachineConfig& config,
                                std::span<const std::vector<std::string>> subsets, double weight,
                                const SweepOptions& options = {});

// All non-empty subsets of `parameters` with at most `max_size` members,
// smallest first. Throws InputError when more than `cap` subsets would result.
std::vector<std::vector<std::string>> bounded_power_set(std::span<const std::string> parameters,
                                                        std::size_t max_size, std::size_t cap = 4096);

// One verdict per parameter set, sorted by descending speedup.
std::vector<BottleneckVerdict> classify(const SensitivityReport& report, double threshold);

}  // namespace arsim
