#include "arsim/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arsim/core.hpp"
#include "arsim/corpus.hpp"
#include "arsim/error.hpp"
#include "arsim/report.hpp"
#include "arsim/sensitivity.hpp"

namespace arsim {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> weights;
  for (const auto& item : split(text, ',')) {
    double w = 0.0;
    auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), w);
    if (ec != std::errc{} || end != item.data() + item.size()) throw InputError("bad weight '" + item + "'");
    weights.push_back(w);
  }
  if (weights.empty()) throw InputError("no weights given");
  return weights;
}

std::vector<std::string> select_parameters(const std::string& spec, const MachineConfig& config) {
  if (spec == "full") return config.accelerable_parameters();
  if (spec == "all") return config.throughput_parameters();
  auto names = split(spec, ',');
  if (names.empty()) throw InputError("no parameters selected");
  return names;
}

std::vector<std::vector<std::string>> parse_subsets(const std::string& spec, const std::vector<std::string>& pool) {
  if (spec.rfind("k=", 0) == 0) {
    std::size_t k = 0;
    auto text = spec.substr(2);
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc{} || end != text.data() + text.size() || k == 0) {
      throw InputError("bad subset size in '" + spec + "'");
    }
    return bounded_power_set(pool, k);
  }
  std::vector<std::vector<std::string>> subsets;
  for (const auto& group : split(spec, ',')) subsets.push_back(split(group, '+'));
  return subsets;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
}

struct SimulateArgs {
  std::string trace;
  std::string config;
  std::string report = "table";
  bool per_instruction = false;
  bool timeline = false;
};

struct SensitivityArgs {
  std::string trace;
  std::string config;
  std::string weights;
  std::string resources = "full";
  std::string subsets;
  double threshold = kDefaultThreshold;
  std::string heatmap;
  std::string report = "table";
  std::size_t threads = 0;
};

struct GenArgs {
  std::string name;
  std::uint64_t iters = 0;
  std::uint64_t footprint = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string config_out;
};

void run_simulate(const SimulateArgs& a, std::ostream& out) {
  auto config = load_config_file(a.config);
  auto events = resolve_trace(read_trace_file(a.trace), config);
  auto result = simulate(events, config, SimOptions{a.timeline});
  if (a.report == "json") {
    out << run_report_json(result, a.per_instruction);
    return;
  }
  out << format_run_summary(result);
  if (a.per_instruction && result.total_cycles > 0.0) {
    out << '\n' << format_instruction_table(render_instruction_table(result));
  }
}

void run_sensitivity(const SensitivityArgs& a, std::ostream& out) {
  auto config = load_config_file(a.config);
  auto events = resolve_trace(read_trace_file(a.trace), config);
  auto weights = a.weights.empty() ? kDefaultWeights : parse_weights(a.weights);
  auto parameters = select_parameters(a.resources, config);
  SweepOptions options{a.threads};

  SensitivityReport report;
  if (a.subsets.empty()) {
    report = sweep_single(events, config, parameters, weights, options);
  } else {
    auto subsets = parse_subsets(a.subsets, parameters);
    for (double w : weights) {
      auto part = sweep_subsets(events, config, subsets, w, options);
      report.base_time = part.base_time;
      report.points.insert(report.points.end(), part.points.begin(), part.points.end());
    }
    std::stable_sort(report.points.begin(), report.points.end(), [](const auto& x, const auto& y) {
      auto lx = parameter_label(x.parameters);
      auto ly = parameter_label(y.parameters);
      return lx != ly ? lx < ly : x.weight < y.weight;
    });
  }
  auto verdicts = classify(report, a.threshold);
  report.verdicts = verdicts;

  if (!a.heatmap.empty()) {
    const auto dot = a.heatmap.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : a.heatmap.substr(dot);
    if (ext == ".csv") {
      write_file(a.heatmap, heatmap_csv(report));
    } else if (ext == ".svg") {
      write_file(a.heatmap, heatmap_svg(report));
    } else {
      throw InputError("heatmap file must end in .csv or .svg");
    }
  }
  out << (a.report == "json" ? sensitivity_report_json(report, verdicts) : format_sensitivity(report, verdicts));
}

void run_gen(const GenArgs& a, std::ostream& out) {
  auto kernel = generate(KernelSpec{a.name, a.iters, a.footprint, a.seed});
  if (a.out.empty()) {
    write_trace(out, kernel.trace);
  } else {
    write_file(a.out, write_trace(kernel.trace));
  }
  if (!a.config_out.empty()) write_file(a.config_out, dump_config(kernel.config));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven abstract out-of-order CPU model with sensitivity analysis", "arsim"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Estimate cycles, IPC and resource occupancy of a trace");
  simulate_cmd->add_option("trace", sim.trace, "Trace file")->required();
  simulate_cmd->add_option("--config", sim.config, "Machine config file")->required();
  simulate_cmd->add_option("--report", sim.report, "Output format")->check(CLI::IsMember({"json", "table"}));
  simulate_cmd->add_flag("--per-instruction", sim.per_instruction, "Per-instruction resource usage");
  simulate_cmd->add_flag("--timeline", sim.timeline, "Include per-event start/end times (json)");

  SensitivityArgs sens;
  auto* sens_cmd = app.add_subcommand("sensitivity", "Accelerate parameters and report speedups");
  sens_cmd->add_option("trace", sens.trace, "Trace file")->required();
  sens_cmd->add_option("--config", sens.config, "Machine config file")->required();
  sens_cmd->add_option("--weights", sens.weights, "Comma-separated weights >= 1 (default 1.01,1.05,1.1,1.15)");
  sens_cmd->add_option("--resources", sens.resources,
                       "'all' (throughput resources), 'full' (also INST_LAT, INST_WINDOW) or name,...");
  sens_cmd->add_option("--subsets", sens.subsets, "'k=N' for all subsets up to size N, or a+b,c+d");
  sens_cmd->add_option("--threshold", sens.threshold, "Bottleneck speedup threshold");
  sens_cmd->add_option("--heatmap", sens.heatmap, "Write heatmap to a .csv or .svg file");
  sens_cmd->add_option("--report", sens.report, "Output format")->check(CLI::IsMember({"json", "table"}));
  sens_cmd->add_option("--threads", sens.threads, "Worker threads (0 = all cores)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-kernel", "Write a built-in synthetic kernel trace");
  gen_cmd->add_option("name", gen.name, "Kernel name")->required()->check(CLI::IsMember(kernel_names()));
  gen_cmd->add_option("--iters", gen.iters, "Iterations or events");
  gen_cmd->add_option("--footprint", gen.footprint, "Footprint in bytes (stream)");
  gen_cmd->add_option("--seed", gen.seed, "Seed (random-mix)");
  gen_cmd->add_option("--out", gen.out, "Trace output file (default stdout)");
  gen_cmd->add_option("--config-out", gen.config_out, "Also write the kernel's machine config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*simulate_cmd) run_simulate(sim, out);
    if (*sens_cmd) run_sensitivity(sens, out);
    if (*gen_cmd) run_gen(gen, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace arsim
