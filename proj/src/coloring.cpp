#include "wlkit/coloring.hpp"

#include <algorithm>
#include <limits>

namespace wlkit {

namespace {
// Keeps a single TupleColoring under 2^32 entries.
constexpr std::size_t kMaxTuples = std::size_t{1} << 32;
}  // namespace

std::size_t tuple_count(std::size_t n, std::size_t arity) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (n != 0 && count > kMaxTuples / n) throw std::length_error("too many tuples for a dense coloring");
    count *= n;
  }
  return count;
}

std::size_t TupleColoring::distinct_count() const {
  std::vector<std::uint32_t> ids;
  ids.reserve(colors.size());
  for (ColorId c : colors) ids.push_back(c.value);
  std::ranges::sort(ids);
  return static_cast<std::size_t>(std::ranges::distance(ids.begin(), std::unique(ids.begin(), ids.end())));
}

}  // namespace wlkit
