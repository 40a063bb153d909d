#include "arsim/corpus.hpp"

#include <random>

#include "arsim/error.hpp"

namespace arsim {
namespace {

constexpr std::string_view kSkylakeLike = R"({
  // Port groups follow the two-level resource mapping: a group of k ports
  // accepts k uops per cycle, so its gap is 1/k.
  "resources": [
    {"name": "p0156", "gap": 0.25},
    {"name": "p016", "gap": 0.3333333333333333},
    {"name": "p015", "gap": 0.3333333333333333},
    {"name": "p01", "gap": 0.5},
    {"name": "p06", "gap": 0.5},
    {"name": "p056", "gap": 0.3333333333333333},
    {"name": "p23", "gap": 0.5},
    {"name": "p4", "gap": 1},
    {"name": "p1", "gap": 1},
    {"name": "FRONTEND", "gap": 0.25}
  ],
  "frontend": "FRONTEND",
  "window": 224,
  "kinds": {
    "mov-load": {"resources": ["p23"], "latency": 2},
    "vmovsd-load": {"resources": ["p23"], "latency": 4},
    "vaddsd-load": {"resources": ["p016", "p01", "p015", "p0156", "p23"], "latency": 4},
    "vmulsd": {"resources": ["p016", "p01", "p015", "p0156"], "latency": 4},
    "vmovsd-store": {"resources": ["p4"], "latency": 4},
    "add": {"resources": [], "latency": 1},
    "cmp": {"resources": ["p0156"], "latency": 1},
    "jne": {"resources": ["p056", "p016", "p06", "p0156"], "latency": 1},
    "imul": {"resources": ["p1"], "latency": 3},
    "alu": {"resources": ["p0156"], "latency": 1}
  },
  "caches": [
    {"name": "L1", "size": 32768, "assoc": 8, "line": 64, "gap": 1},
    {"name": "L2", "size": 1048576, "assoc": 16, "line": 64, "gap": 2},
    {"name": "L3", "size": 8388608, "assoc": 16, "line": 64, "gap": 4},
    {"name": "MEM", "gap": 8}
  ],
  "branch": {
    "enabled": false,
    "btb_sets": 64,
    "btb_ways": 4,
    "tage_entries_log2": 10,
    "history_lengths": [4, 8, 16, 32],
    "misprediction_penalty": 15
  }
}
)";

MachineConfig make_config(std::vector<std::pair<std::string, double>> resources, std::size_t window,
                          std::optional<std::string> frontend = std::nullopt) {
  MachineConfig c;
  for (auto& [name, gap] : resources) {
    c.resources.push_back(Resource{static_cast<ResourceId>(c.resources.size()), name, gap});
  }
  c.window_capacity = window;
  if (frontend) c.frontend = c.find_resource(*frontend);
  return c;
}

InstructionEvent inline_event(std::uint64_t pc, std::string label, std::vector<std::string> resources,
                              double latency) {
  InstructionEvent e;
  e.pc = pc;
  e.kind = std::move(label);
  e.resources = std::move(resources);
  e.latency = latency;
  return e;
}

void number(std::vector<InstructionEvent>& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) trace[i].seq = i;
}

}  // namespace

std::string_view skylake_like_config_text() { return kSkylakeLike; }

MachineConfig skylake_like_config() { return load_config(kSkylakeLike); }

Kernel gen_fig8() {
  struct Uop {
    const char* mnemonic;
    const char* port;
  };
  static constexpr Uop kBlock[] = {{"mul", "p1"},  {"sbb", "p0"},   {"rol", "p6"},  {"bsf", "p1"},
                                   {"rol", "p0"},  {"pop", "p2"},   {"mov", "p3"},  {"sahf", "p6"},
                                   {"movsx", "p2"}, {"sahf", "p0"}, {"sbb", "p6"},  {"xor", "p5"}};
  Kernel k;
  k.config = make_config({{"p0", 1}, {"p1", 1}, {"p2", 1}, {"p3", 1}, {"p5", 1}, {"p6", 1}}, 4);
  std::uint64_t pc = 0x1000;
  for (const auto& uop : kBlock) {
    k.trace.push_back(inline_event(pc, uop.mnemonic, {uop.port}, 1));
    pc += 4;
  }
  number(k.trace);
  validate_config(k.config);
  return k;
}

Kernel gen_jacobi_like(std::uint64_t iters) {
  if (iters == 0) throw InputError("jacobi kernel needs at least one iteration");
  enum : RegisterId { rdx = 1, rax = 2, rcx = 3, rsp = 4, flags = 5, xmm0 = 16, xmm1 = 17 };
  constexpr std::uint64_t kStack = 0x7ff000;
  constexpr std::uint64_t kArrayA = 0x100000;
  constexpr std::uint64_t kArrayB = 0x104000;
  // 320 iterations of 24 bytes keep both arrays (8 KiB each) L1-resident.
  constexpr std::uint64_t kWrap = 320;

  Kernel k;
  k.config = skylake_like_config();
  auto& t = k.trace;
  for (std::uint64_t it = 0; it < iters; ++it) {
    const std::uint64_t off = 8 + 24 * (it % kWrap);
    auto ev = [&](std::uint64_t pc, const char* kind, std::vector<RegisterId> reads, std::vector<RegisterId> writes) {
      InstructionEvent e;
      e.pc = pc;
      e.kind = kind;
      e.reg_reads = std::move(reads);
      e.reg_writes = std::move(writes);
      t.push_back(std::move(e));
      return &t.back();
    };
    auto load = [](InstructionEvent* e, std::uint64_t addr) { e->mem_reads.push_back(MemAccess{addr, 8}); };
    auto store = [](InstructionEvent* e, std::uint64_t addr) { e->mem_writes.push_back(MemAccess{addr, 8}); };

    load(ev(0x12bb, "mov-load", {rsp}, {rdx}), kStack - 0x10);
    load(ev(0x12c0, "vmovsd-load", {rdx, rax}, {xmm0}), kArrayA + off);
    load(ev(0x12c5, "vaddsd-load", {xmm0, rdx, rax}, {xmm0}), kArrayA + off + 8);
    load(ev(0x12cb, "vaddsd-load", {xmm0, rdx, rax}, {xmm0}), kArrayA + off + 16);
    ev(0x12d1, "vmulsd", {xmm0, xmm1}, {xmm0});
    load(ev(0x12d5, "mov-load", {rsp}, {rdx}), kStack - 0x18);
    store(ev(0x12da, "vmovsd-store", {rdx, rax, xmm0}, {}), kArrayB + off + 8);
    load(ev(0x12e0, "mov-load", {rsp}, {rdx}), kStack - 0x18);
    load(ev(0x12e5, "vmovsd-load", {rdx, rax}, {xmm0}), kArrayB + off - 8);
    load(ev(0x12eb, "vaddsd-load", {xmm0, rdx, rax}, {xmm0}), kArrayB + off);
    load(ev(0x12f0, "vaddsd-load", {xmm0, rdx, rax}, {xmm0}), kArrayB + off + 8);
    ev(0x12f6, "vmulsd", {xmm0, xmm1}, {xmm0});
    load(ev(0x12fa, "mov-load", {rsp}, {rdx}), kStack - 0x10);
    store(ev(0x12ff, "vmovsd-store", {rdx, rax, xmm0}, {}), kArrayA + off);
    ev(0x1304, "add", {rax}, {rax, flags});
    ev(0x1308, "cmp", {rax, rcx}, {flags});
    auto* jne = ev(0x130b, "jne", {flags}, {});
    const bool taken = it + 1 != iters;
    jne->branch = BranchInfo{BranchKind::conditional, taken, taken ? 0x12bbu : 0u};
  }
  number(t);
  return k;
}

Kernel gen_latency_chain(std::uint64_t n) {
  if (n == 0) throw InputError("latency chain needs at least one instruction");
  Kernel k;
  k.config = make_config({{"p0156", 0.25}, {"FRONTEND", 0.25}}, 224, "FRONTEND");
  for (std::uint64_t i = 0; i < n; ++i) {
    auto e = inline_event(0x2000, "imul", {"p0156"}, 4);
    e.reg_reads = {1};
    e.reg_writes = {1};
    k.trace.push_back(std::move(e));
  }
  number(k.trace);
  validate_config(k.config);
  return k;
}

Kernel gen_stream(std::uint64_t n, std::uint64_t footprint) {
  constexpr std::uint64_t kLine = 64;
  constexpr std::uint64_t kBase = 0x10000000;
  if (n == 0) throw InputError("stream kernel needs at least one load");
  if (footprint < kLine) throw InputError("stream footprint must cover at least one cache line");
  const std::uint64_t lines = footprint / kLine;

  Kernel k;
  k.config = make_config({{"p23", 0.5}, {"FRONTEND", 0.25}}, 224, "FRONTEND");
  k.config.cache_levels = {
      CacheLevelConfig{"L1", 4096, 4, kLine, 1},
      CacheLevelConfig{"L2", 32768, 8, kLine, 2},
      CacheLevelConfig{"L3", 131072, 16, kLine, 4},
  };
  k.config.memory = MemoryConfig{"MEM", 8};
  for (std::uint64_t i = 0; i < n; ++i) {
    auto e = inline_event(0x3000, "load", {"p23"}, 4);
    e.mem_reads.push_back(MemAccess{kBase + (i % lines) * kLine, 8});
    e.reg_writes = {static_cast<RegisterId>(16 + i % 16)};
    k.trace.push_back(std::move(e));
  }
  number(k.trace);
  validate_config(k.config);
  return k;
}

Kernel gen_random_mix(std::uint64_t events, std::uint32_t resources, std::uint64_t seed) {
  if (resources == 0) throw InputError("random mix needs at least one resource");
  std::mt19937_64 rng(seed);
  // Raw modulo keeps the stream identical across standard libraries.
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  static constexpr double kGaps[] = {0.25, 0.5, 1, 2, 3};
  static constexpr double kLatencies[] = {0, 1, 2, 3, 4, 5, 8};
  static constexpr std::uint64_t kSizes[] = {1, 2, 4, 8, 16};
  static constexpr std::size_t kWindows[] = {1, 2, 4, 8, 16, 32};

  Kernel k;
  const auto count = static_cast<std::uint32_t>(1 + pick(resources));
  std::vector<std::pair<std::string, double>> res;
  for (std::uint32_t r = 0; r < count; ++r) res.emplace_back("r" + std::to_string(r), kGaps[pick(5)]);
  res.emplace_back("FRONTEND", 0.25);
  k.config = make_config(res, kWindows[pick(6)], "FRONTEND");
  k.config.cache_levels = {CacheLevelConfig{"L1", 512, 2, 64, 1},
                           CacheLevelConfig{"L2", 2048, 4, 64, static_cast<double>(1 + pick(2))}};
  k.config.memory = MemoryConfig{"MEM", static_cast<double>(2 + 2 * pick(2))};
  k.config.branch.enabled = pick(2) == 0;
  k.config.branch.misprediction_penalty = 5;

  for (std::uint64_t i = 0; i < events; ++i) {
    InstructionEvent e;
    e.seq = i;
    e.pc = 0x4000 + 4 * pick(16);
    std::vector<std::string> uses;
    for (auto n = pick(4); n > 0; --n) uses.push_back("r" + std::to_string(pick(count)));
    e.resources = std::move(uses);
    e.latency = kLatencies[pick(7)];
    for (auto n = pick(3); n > 0; --n) e.reg_reads.push_back(static_cast<RegisterId>(pick(8)));
    if (pick(3) != 0) e.reg_writes.push_back(static_cast<RegisterId>(pick(8)));
    if (pick(3) == 0) e.mem_reads.push_back(MemAccess{pick(4096), kSizes[pick(5)]});
    if (pick(5) == 0) e.mem_writes.push_back(MemAccess{pick(4096), kSizes[pick(5)]});
    if (pick(6) == 0) {
      bool taken = pick(2) == 0;
      e.branch = BranchInfo{BranchKind::conditional, taken, taken ? 0x4000 + 4 * pick(16) : 0};
    }
    k.trace.push_back(std::move(e));
  }
  validate_config(k.config);
  return k;
}

std::vector<std::string> kernel_names() { return {"fig8", "jacobi", "latency-chain", "stream", "random-mix"}; }

Kernel generate(const KernelSpec& spec) {
  if (spec.name == "fig8") return gen_fig8();
  if (spec.name == "jacobi") return gen_jacobi_like(spec.iters ? spec.iters : 10000);
  if (spec.name == "latency-chain") return gen_latency_chain(spec.iters ? spec.iters : 1000);
  if (spec.name == "stream") {
    return gen_stream(spec.iters ? spec.iters : 32768, spec.footprint ? spec.footprint : 1u << 20);
  }
  if (spec.name == "random-mix") return gen_random_mix(spec.iters ? spec.iters : 200, 6, spec.seed);
  throw InputError("unknown kernel '" + spec.name + "'");
}

}  // namespace arsim
