#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wlkit {

/// A canonical code: a self-delimiting sequence of 32-bit words. Two codes are
/// the same code iff they are word-for-word identical.
using Code = std::vector<std::uint32_t>;
using CodeView = std::span<const std::uint32_t>;

/// Exact (collision-free) mapping from codes to dense ids, assigned in
/// insertion order. Keys live in one contiguous arena.
class CodeInterner {
 public:
  CodeInterner();

  std::uint32_t intern(CodeView code);
  /// Returns size() when the code has never been interned.
  std::uint32_t find(CodeView code) const;
  CodeView lookup(std::uint32_t id) const;
  std::size_t size() const { return offsets_.size() - 1; }
  void clear();

 private:
  static std::uint64_t hash(CodeView code);
  void grow();

  std::vector<std::uint32_t> arena_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;  // kEmpty or id
};

struct ColorId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(ColorId, ColorId) = default;
};

/// The injective HASH: ColorIds are issued by exact interning, so two tuples
/// share an id iff their canonical codes are identical. Each interner carries a
/// process-unique provenance tag so results from different interners are never
/// compared by accident.
class ColorInterner {
 public:
  ColorInterner();

  ColorId intern(CodeView code) { return ColorId{codes_.intern(code)}; }
  CodeView lookup(ColorId id) const { return codes_.lookup(id.value); }
  std::size_t size() const { return codes_.size(); }
  std::uint64_t provenance() const { return provenance_; }

 private:
  CodeInterner codes_;
  std::uint64_t provenance_;
};

}  // namespace wlkit

template <>
struct std::hash<wlkit::ColorId> {
  std::size_t operator()(wlkit::ColorId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
