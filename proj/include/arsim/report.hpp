#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arsim/core.hpp"
#include "arsim/sensitivity.hpp"

namespace arsim {

inline constexpr int kReportFormatVersion = 1;

struct InstructionRow {
  std::uint64_t pc = 0;
  std::string label;
  std::vector<double> shares;  // fraction of total time, one per table column
  double latency = 0.0;
  std::vector<std::string> resources;
};

struct InstructionTable {
  std::vector<std::string> columns;  // cache levels, resources, frontend last
  std::vector<InstructionRow> rows;  // ascending pc
};

// Per-pc share of every resource: uses * gap / total time. Columns with no
// usage at all are dropped. Throws ZeroTimeTrace on an empty run.
InstructionTable render_instruction_table(const SimResult& result);

// Shortest decimal form that round-trips.
std::string format_number(double value);
// Percentage with one decimal, ties to even: 0.1 -> "10.0%".
std::string format_percent(double fraction);

std::string format_instruction_table(const InstructionTable& table);
std::string format_run_summary(const SimResult& result);
std::string run_report_json(const SimResult& result, bool per_instruction);

std::string format_sensitivity(const SensitivityReport& report, const std::vector<BottleneckVerdict>& verdicts);
std::string sensitivity_report_json(const SensitivityReport& report, const std::vector<BottleneckVerdict>& verdicts);

// Columns parameter,weight,time,speedup sorted by (parameter, weight).
std::string heatmap_csv(const SensitivityReport& report);
// One bar group per parameter set, one cell per weight step.
std::string heatmap_svg(const SensitivityReport& report);

}  // namespace arsim
