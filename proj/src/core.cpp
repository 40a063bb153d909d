#include "arsim/core.hpp"

#include <algorithm>

#include "arsim/branch.hpp"
#include "arsim/cache.hpp"
#include "arsim/error.hpp"

namespace arsim {

InstructionWindow::InstructionWindow(std::size_t capacity) : ring_(capacity, 0.0) {
  ARSIM_CHECK(capacity >= 1, "window capacity must be >= 1");
}

void InstructionWindow::push(double t_end) {
  const std::size_t cap = ring_.size();
  if (size_ == cap) {
    // The oldest entry retires to make room; t_min already accounts for it.
    head_ = (head_ + 1) % cap;
    --size_;
  }
  ring_[(head_ + size_) % cap] = t_end;
  ++size_;
  if (size_ == cap) t_min_ = std::max(t_min_, ring_[head_]);
}

const ShadowMemory::Page* ShadowMemory::find_page(std::uint64_t key) const {
  const std::uint64_t index = key >> kPageBits;
  if (index == cached_index_) return cached_;
  auto it = pages_.find(index);
  if (it == pages_.end()) return nullptr;
  cached_index_ = index;
  cached_ = it->second.get();
  return cached_;
}

ShadowMemory::Page* ShadowMemory::page(std::uint64_t key) {
  const std::uint64_t index = key >> kPageBits;
  if (index == cached_index_) return cached_;
  auto& slot = pages_[index];
  if (!slot) {
    slot = std::make_unique<Page>();
    slot->fill(0.0);
  }
  cached_index_ = index;
  cached_ = slot.get();
  return cached_;
}

double ShadowMemory::get(std::uint64_t key) const {
  const Page* p = find_page(key);
  return p ? (*p)[key & ((1u << kPageBits) - 1)] : 0.0;
}

void ShadowMemory::max_merge(std::uint64_t key, double t) {
  double& cell = (*page(key))[key & ((1u << kPageBits) - 1)];
  cell = std::max(cell, t);
}

double ShadowRegisters::get(RegisterId reg) const {
  if (reg < kDense) return reg < dense_.size() ? dense_[reg] : 0.0;
  auto it = sparse_.find(reg);
  return it == sparse_.end() ? 0.0 : it->second;
}

void ShadowRegisters::set(RegisterId reg, double t) {
  if (reg < kDense) {
    if (reg >= dense_.size()) dense_.resize(reg + 1, 0.0);
    dense_[reg] = t;
  } else {
    sparse_[reg] = t;
  }
}

namespace {

class Engine {
 public:
  Engine(const MachineConfig& config, const SimOptions& options) : config_(config), options_(options) {
    for (const auto& r : config.resources) {
      result_.resources.push_back(ResourceUsage{r.name, r.gap, 0});
      gaps_.push_back(r.gap);
    }
    t_avail_.assign(config.resources.size(), 0.0);
    result_.frontend = config.frontend;
    result_.window_capacity = config.window_capacity;
    result_.latency_scale = config.latency_scale;
    result_.branch_enabled = config.branch.enabled;
    if (!config.cache_levels.empty()) {
      caches_.emplace(config.cache_levels, *config.memory);
      line_size_ = caches_->line_size();
    }
    if (config.branch.enabled) predictor_.emplace(config.branch);
  }

  void step(const ResolvedEvent& e) {
    InstructionStats& stats = stats_for(e);
    ++stats.count;
    const double t_min = window_.t_min();

    // Loads reach the hierarchy first; stores may use bandwidth later.
    if (caches_) {
      for (const auto& a : e.mem_reads) update_caches(a, AccessType::load, stats);
    }

    double t_start = t_min;
    for (auto reg : e.reg_reads) t_start = std::max(t_start, registers_.get(reg));
    for (const auto& a : e.mem_reads) {
      for_each_key(a, [&](std::uint64_t key) { t_start = std::max(t_start, memory_.get(key)); });
    }
    for (auto res : e.resources) t_start = std::max(t_start, t_avail_[res]);

    const double t_end = t_start + e.latency * config_.latency_scale;

    for (auto res : e.resources) {
      t_avail_[res] = std::max(t_min, t_avail_[res]) + gaps_[res];
      ++result_.resources[res].uses;
      ++stats.resource_uses[res];
    }

    if (caches_) {
      for (const auto& a : e.mem_writes) update_caches(a, AccessType::store, stats);
    }

    // Register renaming is assumed perfect: a write replaces the old value.
    for (auto reg : e.reg_writes) registers_.set(reg, t_end);
    for (const auto& a : e.mem_writes) {
      for_each_key(a, [&](std::uint64_t key) { memory_.max_merge(key, t_end); });
    }

    if (predictor_ && e.branch.kind != BranchKind::none) {
      auto prediction = predictor_->predict(e.pc, e.branch.kind);
      ++result_.branch.predicted;
      if (is_mispredicted(prediction, e.branch)) ++result_.branch.mispredicted;
      t_avail_[*config_.frontend] += misprediction_delay(prediction, e.branch, config_.branch);
      predictor_->update(e.pc, e.branch);
    }

    window_.push(t_end);
    ARSIM_CHECK(window_.occupancy() <= window_.capacity(), "window overflow");
    ARSIM_CHECK(window_.t_min() >= t_min, "t_min went backwards");

    result_.total_cycles = std::max(result_.total_cycles, t_end);
    ++result_.instruction_count;
    if (options_.record_timeline) {
      result_.t_start.push_back(t_start);
      result_.t_end.push_back(t_end);
    }
  }

  SimResult finish() {
    if (caches_) {
      for (std::size_t level = 0; level < caches_->level_count(); ++level) {
        const auto& s = caches_->stats(level);
        result_.caches.push_back(CacheLevelReport{caches_->name(level), config_.bandwidth_parameter(level),
                                                  caches_->gap(level), s.hits, s.misses, s.transfers});
      }
    }
    return std::move(result_);
  }

 private:
  InstructionStats& stats_for(const ResolvedEvent& e) {
    auto [it, inserted] = result_.instructions.try_emplace(e.pc);
    InstructionStats& s = it->second;
    if (inserted) {
      s.pc = e.pc;
      s.label = e.label;
      s.latency = e.latency * config_.latency_scale;
      s.resources.assign(e.resources.begin(), e.resources.begin() + static_cast<std::ptrdiff_t>(e.explicit_resources));
      s.resource_uses.assign(config_.resources.size(), 0);
      s.cache_transfers.assign(caches_ ? caches_->level_count() : 0, 0);
    }
    return s;
  }

  template <typename F>
  void for_each_key(const MemAccess& a, F&& f) {
    if (config_.shadow == ShadowGranularity::line) {
      for (auto line : line_accesses(a, line_size_)) f(line / line_size_);
    } else {
      for (std::uint64_t b = 0; b < a.size; ++b) f(a.addr + b);
    }
  }

  void update_caches(const MemAccess& a, AccessType type, InstructionStats& stats) {
    for (auto line : line_accesses(a, line_size_)) {
      const std::size_t hit = caches_->lookup_and_fill(line);
      const double avail = caches_->consume_bandwidth(hit, type);
      for (std::size_t l = 1; l <= hit; ++l) ++stats.cache_transfers[l];
      if (avail <= 0.0) continue;
      if (config_.shadow == ShadowGranularity::line) {
        memory_.max_merge(line / line_size_, avail);
      } else {
        const std::uint64_t lo = std::max(a.addr, line);
        const std::uint64_t hi = std::min(a.addr + a.size, line + line_size_);
        for (std::uint64_t b = lo; b < hi; ++b) memory_.max_merge(b, avail);
      }
    }
  }

  const MachineConfig& config_;
  const SimOptions& options_;
  SimResult result_;
  std::vector<double> gaps_;
  std::vector<double> t_avail_;
  InstructionWindow window_{config_.window_capacity};
  ShadowRegisters registers_;
  ShadowMemory memory_;
  std::optional<CacheHierarchy> caches_;
  std::optional<BranchPredictor> predictor_;
  std::uint64_t line_size_ = 64;
};

}  // namespace

SimResult simulate(std::span<const ResolvedEvent> events, const MachineConfig& config, const SimOptions& options) {
  Engine engine(config, options);
  for (const auto& e : events) engine.step(e);
  return engine.finish();
}

std::vector<double> occupancy_report(const SimResult& result) {
  if (!(result.total_cycles > 0.0)) throw ZeroTimeTrace();
  std::vector<double> out;
  out.reserve(result.resources.size());
  for (const auto& r : result.resources) out.push_back(r.busy() / result.total_cycles);
  return out;
}

}  // namespace arsim
