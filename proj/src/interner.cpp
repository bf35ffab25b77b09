#include "wlkit/interner.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

namespace wlkit {

namespace {

constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kInitialSlots = 64;

std::atomic<std::uint64_t> next_provenance{1};

}  // namespace

CodeInterner::CodeInterner() : offsets_{0}, slots_(kInitialSlots, kEmpty) {}

std::uint64_t CodeInterner::hash(CodeView code) {
  // 64-bit FNV-1a over words, finished with a murmur-style mix.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ code.size();
  for (std::uint32_t w : code) {
    h ^= w;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

CodeView CodeInterner::lookup(std::uint32_t id) const {
  if (id >= size()) throw std::out_of_range("code id not issued by this interner");
  return {arena_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
}

std::uint32_t CodeInterner::find(CodeView code) const {
  const auto h = hash(code);
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = h & mask;; i = (i + 1) & mask) {
    const auto id = slots_[i];
    if (id == kEmpty) return static_cast<std::uint32_t>(size());
    if (hashes_[id] == h) {
      const auto stored = lookup(id);
      if (std::ranges::equal(stored, code)) return id;
    }
  }
}

std::uint32_t CodeInterner::intern(CodeView code) {
  const auto h = hash(code);
  std::size_t mask = slots_.size() - 1;
  std::size_t i = h & mask;
  for (;; i = (i + 1) & mask) {
    const auto id = slots_[i];
    if (id == kEmpty) break;
    if (hashes_[id] == h && std::ranges::equal(lookup(id), code)) return id;
  }
  if (size() >= kEmpty - 1) throw std::length_error("code interner exhausted");
  const auto id = static_cast<std::uint32_t>(size());
  arena_.insert(arena_.end(), code.begin(), code.end());
  offsets_.push_back(arena_.size());
  hashes_.push_back(h);
  slots_[i] = id;
  if (2 * size() > slots_.size()) grow();
  return id;
}

void CodeInterner::grow() {
  std::vector<std::uint32_t> slots(slots_.size() * 2, kEmpty);
  const std::size_t mask = slots.size() - 1;
  for (std::uint32_t id = 0; id < size(); ++id) {
    std::size_t i = hashes_[id] & mask;
    while (slots[i] != kEmpty) i = (i + 1) & mask;
    slots[i] = id;
  }
  slots_ = std::move(slots);
}

void CodeInterner::clear() {
  arena_.clear();
  offsets_.assign(1, 0);
  hashes_.clear();
  slots_.assign(kInitialSlots, kEmpty);
}

ColorInterner::ColorInterner() : provenance_(next_provenance.fetch_add(1)) {}

}  // namespace wlkit
