#include "arsim/machine.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "arsim/error.hpp"
#include "json.hpp"

namespace arsim {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError("config: " + msg); }

double get_real(const json& v, const std::string& what) {
  if (!v.is_number()) config_error(what + " must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& what) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    config_error(what + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint32_t get_u32(const json& v, const std::string& what) {
  auto n = get_count(v, what);
  if (n > 0xffffffffu) config_error(what + " is too large");
  return static_cast<std::uint32_t>(n);
}

std::string get_string(const json& v, const std::string& what) {
  if (!v.is_string()) config_error(what + " must be a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_error("unknown key '" + key + "' in " + where);
  }
}

bool is_pow2(std::uint64_t v) { return v != 0 && std::has_single_bit(v); }

BranchConfig parse_branch(const json& j) {
  check_keys(j,
             {"enabled", "btb_sets", "btb_ways", "base_entries_log2", "tage_entries_log2",
              "history_lengths", "tag_bits", "misprediction_penalty"},
             "branch");
  BranchConfig b;
  if (j.contains("enabled")) {
    if (!j["enabled"].is_boolean()) config_error("branch.enabled must be a boolean");
    b.enabled = j["enabled"].get<bool>();
  }
  if (j.contains("btb_sets")) b.btb_sets = get_u32(j["btb_sets"], "branch.btb_sets");
  if (j.contains("btb_ways")) b.btb_ways = get_u32(j["btb_ways"], "branch.btb_ways");
  if (j.contains("base_entries_log2")) b.base_entries_log2 = get_u32(j["base_entries_log2"], "branch.base_entries_log2");
  if (j.contains("tag_bits")) b.tag_bits = get_u32(j["tag_bits"], "branch.tag_bits");
  if (j.contains("misprediction_penalty")) {
    b.misprediction_penalty = get_real(j["misprediction_penalty"], "branch.misprediction_penalty");
  }
  if (j.contains("history_lengths")) {
    const auto& h = j["history_lengths"];
    if (!h.is_array()) config_error("branch.history_lengths must be an array");
    b.history_lengths.clear();
    for (const auto& v : h) b.history_lengths.push_back(get_u32(v, "branch.history_lengths"));
  }
  if (j.contains("tage_entries_log2")) {
    const auto& e = j["tage_entries_log2"];
    b.tage_entries_log2.clear();
    if (e.is_array()) {
      for (const auto& v : e) b.tage_entries_log2.push_back(get_u32(v, "branch.tage_entries_log2"));
    } else {
      b.tage_entries_log2.assign(b.history_lengths.size(), get_u32(e, "branch.tage_entries_log2"));
    }
  } else {
    b.tage_entries_log2.assign(b.history_lengths.size(), 10);
  }
  return b;
}

void validate_branch(const BranchConfig& b, bool have_frontend) {
  if (b.btb_sets == 0 || b.btb_ways == 0) config_error("branch BTB geometry must be positive");
  if (b.base_entries_log2 == 0 || b.base_entries_log2 > 24) config_error("branch.base_entries_log2 out of range");
  if (b.tag_bits == 0 || b.tag_bits > 32) config_error("branch.tag_bits out of range");
  if (b.tage_entries_log2.size() != b.history_lengths.size()) {
    config_error("branch.tage_entries_log2 must have one entry per tagged table");
  }
  for (auto e : b.tage_entries_log2) {
    if (e == 0 || e > 24) config_error("branch.tage_entries_log2 out of range");
  }
  for (std::size_t i = 0; i < b.history_lengths.size(); ++i) {
    auto h = b.history_lengths[i];
    if (h == 0 || h > 64) config_error("branch history lengths must be in [1, 64]");
    if (i > 0 && h <= b.history_lengths[i - 1]) config_error("branch history lengths must strictly increase");
  }
  if (!(b.misprediction_penalty >= 0.0)) config_error("branch.misprediction_penalty must be >= 0");
  if (b.enabled && !have_frontend) config_error("an enabled branch predictor needs a frontend resource");
}

bool is_reserved(std::string_view name) { return name == kInstLat || name == kInstWindow; }

}  // namespace

std::optional<ResourceId> MachineConfig::find_resource(std::string_view name) const {
  for (const auto& r : resources) {
    if (r.name == name) return r.id;
  }
  return std::nullopt;
}

std::string MachineConfig::bandwidth_parameter(std::size_t level) const {
  if (level == 0 || level > cache_levels.size()) return {};
  const std::string& base = level == cache_levels.size() ? memory->name : cache_levels[level].name;
  return base + std::string(kBandwidthSuffix);
}

std::vector<std::string> MachineConfig::throughput_parameters() const {
  std::vector<std::string> names;
  for (const auto& r : resources) names.push_back(r.name);
  if (!cache_levels.empty()) {
    for (std::size_t level = 1; level <= cache_levels.size(); ++level) names.push_back(bandwidth_parameter(level));
  }
  return names;
}

std::vector<std::string> MachineConfig::accelerable_parameters() const {
  auto names = throughput_parameters();
  names.emplace_back(kInstLat);
  names.emplace_back(kInstWindow);
  return names;
}

void validate_config(const MachineConfig& config) {
  std::set<std::string, std::less<>> names;
  for (std::size_t i = 0; i < config.resources.size(); ++i) {
    const auto& r = config.resources[i];
    if (r.id != i) config_error("resource ids must be dense");
    if (r.name.empty()) config_error("resource names must be non-empty");
    if (is_reserved(r.name)) config_error("resource name '" + r.name + "' is reserved");
    if (!names.insert(r.name).second) config_error("duplicate resource '" + r.name + "'");
    if (!(r.gap > 0.0) || !std::isfinite(r.gap)) config_error("resource '" + r.name + "' needs a positive gap");
  }
  if (config.window_capacity < 1) config_error("window capacity must be >= 1");
  if (config.frontend && *config.frontend >= config.resources.size()) config_error("frontend resource does not exist");
  if (!(config.latency_scale > 0.0) || !std::isfinite(config.latency_scale)) {
    config_error("latency_scale must be positive");
  }
  for (const auto& [name, kind] : config.kinds) {
    if (!(kind.latency >= 0.0)) config_error("kind '" + name + "' has a negative latency");
    for (auto id : kind.resources) {
      if (id >= config.resources.size()) config_error("kind '" + name + "' uses an unknown resource");
    }
  }
  if (config.cache_levels.empty() != !config.memory.has_value()) {
    config_error("a cache hierarchy needs a memory backstop as its last entry");
  }
  std::uint64_t prev_size = 0;
  for (const auto& level : config.cache_levels) {
    if (level.total_size == 0 || level.associativity == 0 || level.line_size == 0) {
      config_error("cache '" + level.name + "' geometry must be positive");
    }
    if (!is_pow2(level.line_size)) config_error("cache '" + level.name + "' line size must be a power of two");
    if (!is_pow2(level.associativity)) config_error("cache '" + level.name + "' associativity must be a power of two");
    if (level.total_size % (level.associativity * level.line_size) != 0) {
      config_error("cache '" + level.name + "' size must be divisible by associativity * line size");
    }
    if (level.line_size != config.cache_levels.front().line_size) {
      config_error("all cache levels must share one line size");
    }
    if (level.total_size <= prev_size) config_error("cache levels must be ordered by increasing capacity");
    prev_size = level.total_size;
    if (!(level.gap > 0.0) || !std::isfinite(level.gap)) config_error("cache '" + level.name + "' needs a positive gap");
  }
  if (config.memory && (!(config.memory->gap > 0.0) || !std::isfinite(config.memory->gap))) {
    config_error("memory backstop needs a positive gap");
  }
  // Bandwidth parameter names share one namespace with resources.
  if (!config.cache_levels.empty()) {
    std::set<std::string, std::less<>> levels;
    for (const auto& level : config.cache_levels) {
      if (!levels.insert(level.name).second) config_error("duplicate cache level '" + level.name + "'");
    }
    if (levels.contains(config.memory->name)) config_error("memory backstop name collides with a cache level");
    for (std::size_t level = 1; level <= config.cache_levels.size(); ++level) {
      auto param = config.bandwidth_parameter(level);
      if (names.contains(param)) config_error("resource name '" + param + "' collides with a cache bandwidth parameter");
    }
  }
  validate_branch(config.branch, config.frontend.has_value());
}

MachineConfig load_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed text: ") + e.what());
  }
  check_keys(j, {"resources", "frontend", "window", "latency_scale", "kinds", "caches", "shadow", "branch"},
             "top level");

  MachineConfig config;
  if (!j.contains("resources") || !j["resources"].is_array()) config_error("'resources' array is required");
  for (const auto& r : j["resources"]) {
    check_keys(r, {"name", "gap"}, "resource");
    if (!r.contains("name") || !r.contains("gap")) config_error("resources need 'name' and 'gap'");
    Resource res;
    res.id = static_cast<ResourceId>(config.resources.size());
    res.name = get_string(r["name"], "resource name");
    res.gap = get_real(r["gap"], "resource gap");
    config.resources.push_back(std::move(res));
  }

  if (!j.contains("window")) config_error("'window' is required");
  config.window_capacity = get_count(j["window"], "window");
  if (j.contains("latency_scale")) config.latency_scale = get_real(j["latency_scale"], "latency_scale");

  if (j.contains("frontend") && !j["frontend"].is_null()) {
    auto name = get_string(j["frontend"], "frontend");
    config.frontend = config.find_resource(name);
    if (!config.frontend) config_error("frontend resource '" + name + "' does not exist");
  }

  if (j.contains("kinds")) {
    const auto& kinds = j["kinds"];
    if (!kinds.is_object()) config_error("'kinds' must be an object");
    for (const auto& [name, k] : kinds.items()) {
      check_keys(k, {"resources", "latency"}, "kind '" + name + "'");
      if (!k.contains("resources") || !k.contains("latency")) {
        config_error("kind '" + name + "' needs 'resources' and 'latency'");
      }
      InstructionKind kind;
      kind.name = name;
      kind.latency = get_real(k["latency"], "kind latency");
      if (!k["resources"].is_array()) config_error("kind '" + name + "' resources must be an array");
      for (const auto& rn : k["resources"]) {
        auto rname = get_string(rn, "kind resource");
        auto id = config.find_resource(rname);
        if (!id) config_error("kind '" + name + "' references unknown resource '" + rname + "'");
        kind.resources.push_back(*id);
      }
      config.kinds.emplace(name, std::move(kind));
    }
  }

  if (j.contains("caches")) {
    const auto& caches = j["caches"];
    if (!caches.is_array()) config_error("'caches' must be an array");
    for (std::size_t i = 0; i < caches.size(); ++i) {
      const auto& c = caches[i];
      bool last = i + 1 == caches.size();
      if (c.is_object() && !c.contains("size")) {
        check_keys(c, {"name", "gap"}, "memory backstop");
        if (!last) config_error("the memory backstop must be the last cache entry");
        MemoryConfig mem;
        if (c.contains("name")) mem.name = get_string(c["name"], "memory name");
        if (!c.contains("gap")) config_error("memory backstop needs 'gap'");
        mem.gap = get_real(c["gap"], "memory gap");
        config.memory = mem;
        continue;
      }
      check_keys(c, {"name", "size", "assoc", "line", "gap"}, "cache level");
      for (const char* key : {"name", "size", "assoc", "line", "gap"}) {
        if (!c.contains(key)) config_error(std::string("cache levels need '") + key + "'");
      }
      CacheLevelConfig level;
      level.name = get_string(c["name"], "cache name");
      level.total_size = get_count(c["size"], "cache size");
      level.associativity = get_count(c["assoc"], "cache assoc");
      level.line_size = get_count(c["line"], "cache line");
      level.gap = get_real(c["gap"], "cache gap");
      config.cache_levels.push_back(std::move(level));
    }
  }

  if (j.contains("shadow")) {
    auto s = get_string(j["shadow"], "shadow");
    if (s == "byte") {
      config.shadow = ShadowGranularity::byte;
    } else if (s == "line") {
      config.shadow = ShadowGranularity::line;
    } else {
      config_error("shadow must be 'byte' or 'line'");
    }
  }

  if (j.contains("branch")) config.branch = parse_branch(j["branch"]);

  validate_config(config);
  return config;
}

MachineConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return load_config(text.str());
}

std::string dump_config(const MachineConfig& config) {
  ordered_json j;
  auto resources = ordered_json::array();
  for (const auto& r : config.resources) resources.push_back(ordered_json{{"name", r.name}, {"gap", r.gap}});
  j["resources"] = resources;
  if (config.frontend) j["frontend"] = config.resources[*config.frontend].name;
  j["window"] = config.window_capacity;
  if (config.latency_scale != 1.0) j["latency_scale"] = config.latency_scale;
  auto kinds = ordered_json::object();
  for (const auto& [name, kind] : config.kinds) {
    auto names = ordered_json::array();
    for (auto id : kind.resources) names.push_back(config.resources[id].name);
    kinds[name] = ordered_json{{"resources", names}, {"latency", kind.latency}};
  }
  j["kinds"] = kinds;
  if (!config.cache_levels.empty()) {
    auto caches = ordered_json::array();
    for (const auto& c : config.cache_levels) {
      caches.push_back(ordered_json{
          {"name", c.name}, {"size", c.total_size}, {"assoc", c.associativity}, {"line", c.line_size}, {"gap", c.gap}});
    }
    caches.push_back(ordered_json{{"name", config.memory->name}, {"gap", config.memory->gap}});
    j["caches"] = caches;
  }
  if (config.shadow == ShadowGranularity::line) j["shadow"] = "line";
  const auto& b = config.branch;
  j["branch"] = ordered_json{{"enabled", b.enabled},
                             {"btb_sets", b.btb_sets},
                             {"btb_ways", b.btb_ways},
                             {"base_entries_log2", b.base_entries_log2},
                             {"tage_entries_log2", b.tage_entries_log2},
                             {"history_lengths", b.history_lengths},
                             {"tag_bits", b.tag_bits},
                             {"misprediction_penalty", b.misprediction_penalty}};
  return j.dump(2) + "\n";
}

MachineConfig apply_weights(const MachineConfig& config, const WeightVector& weights) {
  MachineConfig out = config;
  for (const auto& [name, w] : weights) {
    if (!(w >= 1.0) || !std::isfinite(w)) {
      throw ConfigError("weight for '" + name + "' must be a finite value >= 1");
    }
    if (name == kInstLat) {
      out.latency_scale /= w;
    } else if (name == kInstWindow) {
      auto scaled = std::floor(static_cast<double>(out.window_capacity) * w + 0.5);
      out.window_capacity = std::max<std::size_t>(1, static_cast<std::size_t>(scaled));
    } else if (auto id = out.find_resource(name)) {
      out.resources[*id].gap /= w;
    } else {
      bool found = false;
      for (std::size_t level = 1; level <= out.cache_levels.size() && !found; ++level) {
        if (out.bandwidth_parameter(level) != name) continue;
        if (level == out.cache_levels.size()) {
          out.memory->gap /= w;
        } else {
          out.cache_levels[level].gap /= w;
        }
        found = true;
      }
      if (!found) throw ConfigError("unknown accelerable parameter '" + name + "'");
    }
  }
  return out;
}

}  // namespace arsim
