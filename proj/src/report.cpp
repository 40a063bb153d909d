#include "arsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>

#include "arsim/error.hpp"
#include "json.hpp"

namespace arsim {
namespace {

using json = nlohmann::json;

struct Column {
  std::string name;
  bool is_cache = false;
  std::size_t index = 0;  // hierarchy level or resource id
  double gap = 0.0;
};

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 16 steps, white -> red -> black.
std::string ramp_color(std::size_t step) {
  const double t = static_cast<double>(std::min<std::size_t>(step, 15)) / 15.0;
  int r, gb;
  if (t <= 0.5) {
    r = 255;
    gb = static_cast<int>(std::lround(255.0 * (1.0 - 2.0 * t)));
  } else {
    r = static_cast<int>(std::lround(255.0 * (2.0 - 2.0 * t)));
    gb = 0;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, gb, gb);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

std::string render_grid(const std::vector<std::vector<std::string>>& cells, std::size_t left_aligned) {
  std::vector<std::size_t> widths;
  for (const auto& row : cells) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += pad(row[c], widths[c], c >= left_aligned && c + 1 != row.size());
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

json resources_json(const SimResult& result) {
  auto out = json::array();
  for (const auto& r : result.resources) {
    out.push_back(json{{"name", r.name},
                       {"gap", r.gap},
                       {"uses", r.uses},
                       {"busy", r.busy()},
                       {"occupancy", result.total_cycles > 0.0 ? r.busy() / result.total_cycles : 0.0}});
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string format_percent(double fraction) {
  const double tenths = std::nearbyint(fraction * 1000.0);  // default rounding mode: ties to even
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", tenths / 10.0);
  return buf;
}

InstructionTable render_instruction_table(const SimResult& result) {
  if (!(result.total_cycles > 0.0)) throw ZeroTimeTrace();
  const double total = result.total_cycles;

  std::vector<Column> columns;
  for (std::size_t level = 1; level < result.caches.size(); ++level) {
    columns.push_back(Column{result.caches[level].name, true, level, result.caches[level].gap});
  }
  for (std::size_t id = 0; id < result.resources.size(); ++id) {
    if (result.frontend && *result.frontend == id) continue;
    columns.push_back(Column{result.resources[id].name, false, id, result.resources[id].gap});
  }
  if (result.frontend) {
    columns.push_back(Column{result.resources[*result.frontend].name, false, *result.frontend,
                             result.resources[*result.frontend].gap});
  }

  auto share = [&](const InstructionStats& s, const Column& c) {
    const std::uint64_t count = c.is_cache ? s.cache_transfers[c.index] : s.resource_uses[c.index];
    return static_cast<double>(count) * c.gap / total;
  };

  std::vector<bool> keep(columns.size(), false);
  for (const auto& [pc, s] : result.instructions) {
    for (std::size_t c = 0; c < columns.size(); ++c) keep[c] = keep[c] || share(s, columns[c]) > 0.0;
  }

  InstructionTable table;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (keep[c]) table.columns.push_back(columns[c].name);
  }
  for (const auto& [pc, s] : result.instructions) {
    InstructionRow row;
    row.pc = pc;
    row.label = s.label;
    row.latency = s.latency;
    for (auto id : s.resources) row.resources.push_back(result.resources[id].name);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (keep[c]) row.shares.push_back(share(s, columns[c]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_instruction_table(const InstructionTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"PC", "KIND"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  header.emplace_back("LAT/RESOURCES");
  cells.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{hex(row.pc), row.label};
    for (double s : row.shares) line.push_back(format_percent(s));
    line.push_back(format_number(row.latency) + "/" + join(row.resources, " "));
    cells.push_back(std::move(line));
  }
  return render_grid(cells, 2);
}

std::string format_run_summary(const SimResult& result) {
  std::ostringstream out;
  out << "total cycles:  " << format_number(result.total_cycles) << '\n'
      << "instructions:  " << result.instruction_count << '\n'
      << "IPC:           " << format_number(result.ipc()) << '\n'
      << "window:        " << result.window_capacity << '\n'
      << '\n';
  std::vector<std::vector<std::string>> cells{{"RESOURCE", "GAP", "USES", "BUSY", "OCCUPANCY"}};
  for (const auto& r : result.resources) {
    cells.push_back({r.name, format_number(r.gap), std::to_string(r.uses), format_number(r.busy()),
                     result.total_cycles > 0.0 ? format_percent(r.busy() / result.total_cycles) : "-"});
  }
  out << render_grid(cells, 1);
  if (!result.caches.empty()) {
    out << '\n';
    std::vector<std::vector<std::string>> cache_cells{{"LEVEL", "HITS", "MISSES", "TRANSFERS"}};
    for (const auto& c : result.caches) {
      cache_cells.push_back({c.name, std::to_string(c.hits), std::to_string(c.misses), std::to_string(c.transfers)});
    }
    out << render_grid(cache_cells, 1);
  }
  if (result.branch_enabled) {
    out << "\nbranches predicted:    " << result.branch.predicted << '\n'
        << "branches mispredicted: " << result.branch.mispredicted << '\n';
  }
  return out.str();
}

std::string run_report_json(const SimResult& result, bool per_instruction) {
  json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["summary"] = json{{"total_cycles", result.total_cycles},
                        {"instruction_count", result.instruction_count},
                        {"ipc", result.ipc()},
                        {"window_capacity", result.window_capacity},
                        {"latency_scale", result.latency_scale}};
  doc["resources"] = resources_json(result);
  auto caches = json::object();
  for (const auto& c : result.caches) {
    caches[c.name] = json{{"hits", c.hits}, {"misses", c.misses}, {"transfers", c.transfers}};
  }
  doc["caches"] = caches;
  doc["branch"] = json{{"enabled", result.branch_enabled},
                       {"predicted", result.branch.predicted},
                       {"mispredicted", result.branch.mispredicted}};
  if (per_instruction) {
    auto rows = json::array();
    if (result.total_cycles > 0.0) {
      auto table = render_instruction_table(result);
      for (const auto& row : table.rows) {
        auto shares = json::object();
        for (std::size_t c = 0; c < table.columns.size(); ++c) shares[table.columns[c]] = row.shares[c];
        const auto& s = result.instructions.at(row.pc);
        rows.push_back(json{{"pc", row.pc},
                            {"label", row.label},
                            {"count", s.count},
                            {"latency", row.latency},
                            {"resources", row.resources},
                            {"shares", shares}});
      }
    }
    doc["instructions"] = rows;
  }
  if (!result.t_end.empty()) doc["timeline"] = json{{"t_start", result.t_start}, {"t_end", result.t_end}};
  return doc.dump(2) + "\n";
}

std::string format_sensitivity(const SensitivityReport& report, const std::vector<BottleneckVerdict>& verdicts) {
  std::ostringstream out;
  out << "base time: " << format_number(report.base_time) << "\n\n";
  std::vector<std::vector<std::string>> cells{{"PARAMETERS", "WEIGHT", "TIME", "SPEEDUP"}};
  for (const auto& p : report.points) {
    cells.push_back({parameter_label(p.parameters), format_number(p.weight), format_number(p.time),
                     format_percent(p.speedup)});
  }
  out << render_grid(cells, 1) << '\n';
  std::vector<std::vector<std::string>> vcells{{"PARAMETERS", "MAX SPEEDUP", "BOTTLENECK"}};
  for (const auto& v : verdicts) {
    vcells.push_back({parameter_label(v.parameters), format_percent(v.speedup), v.is_bottleneck ? "yes" : "no"});
  }
  out << render_grid(vcells, 1);
  return out.str();
}

std::string sensitivity_report_json(const SensitivityReport& report, const std::vector<BottleneckVerdict>& verdicts) {
  json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["base_time"] = report.base_time;
  auto points = json::array();
  for (const auto& p : report.points) {
    points.push_back(json{{"parameters", p.parameters}, {"weight", p.weight}, {"time", p.time}, {"speedup", p.speedup}});
  }
  doc["points"] = points;
  auto v = json::array();
  for (const auto& b : verdicts) {
    v.push_back(json{{"parameters", b.parameters}, {"speedup", b.speedup}, {"is_bottleneck", b.is_bottleneck}});
  }
  doc["verdicts"] = v;
  return doc.dump(2) + "\n";
}

std::string heatmap_csv(const SensitivityReport& report) {
  auto points = report.points;
  std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    auto la = parameter_label(a.parameters);
    auto lb = parameter_label(b.parameters);
    return la != lb ? la < lb : a.weight < b.weight;
  });
  std::string out = "parameter,weight,time,speedup\n";
  for (const auto& p : points) {
    out += parameter_label(p.parameters) + ',' + format_number(p.weight) + ',' + format_number(p.time) + ',' +
           format_number(p.speedup) + '\n';
  }
  return out;
}

std::string heatmap_svg(const SensitivityReport& report) {
  std::map<std::string, std::vector<const SensitivityPoint*>> bars;
  double max_speedup = 0.0;
  for (const auto& p : report.points) {
    bars[parameter_label(p.parameters)].push_back(&p);
    max_speedup = std::max(max_speedup, p.speedup);
  }
  std::size_t steps = 1;
  for (auto& [label, pts] : bars) {
    std::stable_sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->weight < b->weight; });
    steps = std::max(steps, pts.size());
  }

  constexpr int kBarWidth = 48;
  constexpr int kCell = 24;
  constexpr int kMargin = 40;
  const int plot_height = static_cast<int>(steps) * kCell;
  const int width = kMargin * 2 + static_cast<int>(bars.size()) * kBarWidth;
  const int height = kMargin * 2 + plot_height + 40;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
      << "  <title>sensitivity heatmap, base time " << format_number(report.base_time) << "</title>\n";
  int x = kMargin;
  for (const auto& [label, pts] : bars) {
    out << "  <g class=\"bar\" data-parameter=\"" << xml_escape(label) << "\">\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double intensity = max_speedup > 0.0 ? std::clamp(pts[i]->speedup / max_speedup, 0.0, 1.0) : 0.0;
      const auto step = static_cast<std::size_t>(std::lround(intensity * 15.0));
      const int y = kMargin + plot_height - static_cast<int>(i + 1) * kCell;
      out << "    <rect x=\"" << x + 4 << "\" y=\"" << y << "\" width=\"" << kBarWidth - 8 << "\" height=\"" << kCell
          << "\" fill=\"" << ramp_color(step) << "\" stroke=\"#999999\" data-weight=\""
          << format_number(pts[i]->weight) << "\" data-speedup=\"" << format_number(pts[i]->speedup) << "\"/>\n";
    }
    out << "    <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << kMargin + plot_height + 20
        << "\" font-size=\"10\" text-anchor=\"middle\">" << xml_escape(label) << "</text>\n"
        << "  </g>\n";
    x += kBarWidth;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace arsim
