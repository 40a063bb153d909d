#include "arsim/branch.hpp"

#include <algorithm>

#include "arsim/error.hpp"

namespace arsim {
namespace {

std::uint64_t mask_bits(unsigned bits) { return bits >= 64 ? ~0ull : (1ull << bits) - 1; }

// XOR-folds the low `length` bits of `history` down to `bits` bits.
std::uint64_t fold(std::uint64_t history, unsigned length, unsigned bits) {
  std::uint64_t h = history & mask_bits(length);
  std::uint64_t out = 0;
  while (h != 0) {
    out ^= h & mask_bits(bits);
    h >>= bits;
  }
  return out;
}

std::uint64_t mix_pc(std::uint64_t pc) {
  // cheap avalanche so nearby pcs spread over the tables
  pc ^= pc >> 17;
  pc *= 0x9e3779b97f4a7c15ull;
  return pc ^ (pc >> 29);
}

}  // namespace

BranchTargetBuffer::BranchTargetBuffer(std::uint32_t sets, std::uint32_t ways)
    : sets_(sets), ways_(ways), lru_(sets) {
  ARSIM_CHECK(sets > 0 && ways > 0, "BTB geometry must be positive");
}

std::optional<std::uint64_t> BranchTargetBuffer::lookup(std::uint64_t pc) const {
  const auto& set = lru_[pc % sets_];
  const std::uint64_t tag = pc / sets_;
  for (const auto& e : set) {
    if (e.tag == tag) return e.target;
  }
  return std::nullopt;
}

void BranchTargetBuffer::insert(std::uint64_t pc, std::uint64_t target) {
  auto& set = lru_[pc % sets_];
  const std::uint64_t tag = pc / sets_;
  auto it = std::find_if(set.begin(), set.end(), [&](const Entry& e) { return e.tag == tag; });
  if (it != set.end()) {
    set.erase(it);
  } else if (set.size() == ways_) {
    set.pop_back();
  }
  set.insert(set.begin(), Entry{tag, target});
}

BranchPredictor::BranchPredictor(const BranchConfig& config)
    : config_(config),
      btb_(config.btb_sets, config.btb_ways),
      base_(std::size_t{1} << config.base_entries_log2, 1) {
  for (auto log2 : config.tage_entries_log2) tables_.emplace_back(std::size_t{1} << log2);
}

std::size_t BranchPredictor::base_index(std::uint64_t pc) const {
  return mix_pc(pc) & mask_bits(config_.base_entries_log2);
}

BranchPredictor::Lookup BranchPredictor::lookup(std::uint64_t pc) const {
  Lookup l;
  const std::uint64_t hashed = mix_pc(pc);
  const unsigned tag_bits = config_.tag_bits;
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    const unsigned length = config_.history_lengths[t];
    const unsigned bits = config_.tage_entries_log2[t];
    std::uint64_t index = (hashed ^ (hashed >> bits) ^ fold(history_, length, bits)) & mask_bits(bits);
    std::uint64_t tag = ((hashed >> 7) ^ fold(history_, length, tag_bits) ^
                         (fold(history_, length, tag_bits > 1 ? tag_bits - 1 : 1) << 1)) &
                        mask_bits(tag_bits);
    l.index.push_back(index);
    l.tag.push_back(static_cast<std::uint32_t>(tag));
  }
  for (int t = static_cast<int>(tables_.size()) - 1; t >= 0; --t) {
    const auto& e = tables_[t][l.index[t]];
    if (e.valid && e.tag == l.tag[t]) {
      if (l.provider < 0) {
        l.provider = t;
      } else {
        l.alternate = t;
        break;
      }
    }
  }
  return l;
}

bool BranchPredictor::direction(const Lookup& l, std::uint64_t pc) const {
  if (l.provider >= 0) return tables_[l.provider][l.index[l.provider]].counter >= 4;
  return base_[base_index(pc)] >= 2;
}

BranchPrediction BranchPredictor::predict(std::uint64_t pc, BranchKind kind) const {
  BranchPrediction p;
  if (kind == BranchKind::none) return p;
  p.taken = kind == BranchKind::conditional ? direction(lookup(pc), pc) : true;
  if (p.taken) p.target = btb_.lookup(pc);
  return p;
}

void BranchPredictor::update(std::uint64_t pc, const BranchInfo& actual) {
  if (actual.kind == BranchKind::none) return;
  if (actual.taken) btb_.insert(pc, actual.target);
  if (actual.kind != BranchKind::conditional) return;

  const bool taken = actual.taken;
  const Lookup l = lookup(pc);
  const bool predicted = direction(l, pc);

  if (l.provider >= 0) {
    auto& entry = tables_[l.provider][l.index[l.provider]];
    bool alt_prediction = l.alternate >= 0 ? tables_[l.alternate][l.index[l.alternate]].counter >= 4
                                           : base_[base_index(pc)] >= 2;
    if (predicted != alt_prediction) entry.useful = predicted == taken;
    if (taken && entry.counter < 7) ++entry.counter;
    if (!taken && entry.counter > 0) --entry.counter;
  } else {
    auto& counter = base_[base_index(pc)];
    if (taken && counter < 3) ++counter;
    if (!taken && counter > 0) --counter;
  }

  // Allocate one entry in a longer-history table on a misprediction.
  if (predicted != taken) {
    const std::size_t start = static_cast<std::size_t>(l.provider + 1);
    bool allocated = false;
    for (std::size_t t = start; t < tables_.size(); ++t) {
      auto& e = tables_[t][l.index[t]];
      if (!e.valid || !e.useful) {
        e.valid = true;
        e.tag = l.tag[t];
        e.counter = taken ? 4 : 3;
        e.useful = false;
        allocated = true;
        break;
      }
    }
    if (!allocated) {
      for (std::size_t t = start; t < tables_.size(); ++t) tables_[t][l.index[t]].useful = false;
    }
  }

  history_ = (history_ << 1) | (taken ? 1u : 0u);
}

std::uint8_t BranchPredictor::base_counter(std::uint64_t pc) const { return base_[base_index(pc)]; }

std::size_t BranchPredictor::allocated_entries() const {
  std::size_t n = 0;
  for (const auto& table : tables_) {
    n += static_cast<std::size_t>(std::count_if(table.begin(), table.end(), [](const TaggedEntry& e) { return e.valid; }));
  }
  return n;
}

bool is_mispredicted(const BranchPrediction& predicted, const BranchInfo& actual) {
  if (actual.kind == BranchKind::none) return false;
  if (predicted.taken != actual.taken) return true;
  return actual.taken && predicted.target != actual.target;
}

double misprediction_delay(const BranchPrediction& predicted, const BranchInfo& actual, const BranchConfig& config) {
  if (!config.enabled) return 0.0;
  return is_mispredicted(predicted, actual) ? config.misprediction_penalty : 0.0;
}

}  // namespace arsim
