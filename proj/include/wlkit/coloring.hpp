#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "wlkit/graph.hpp"
#include "wlkit/interner.hpp"

namespace wlkit {

/// Number of k-tuples over n nodes; throws if it does not fit comfortably in memory.
std::size_t tuple_count(std::size_t n, std::size_t arity);

/// Row-major index of a tuple over V^k: v_1 is the most significant digit.
inline std::size_t tuple_index(std::span<const Node> tuple, std::size_t n) {
  std::size_t index = 0;
  for (Node v : tuple) index = index * n + v;
  return index;
}

inline void tuple_at(std::size_t index, std::size_t n, std::span<Node> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Node>(index % n);
    index /= n;
  }
}

/// A color for every k-tuple of one graph, indexed row-major over V^k.
struct TupleColoring {
  std::size_t arity = 0;
  std::size_t node_count = 0;
  std::vector<ColorId> colors;

  ColorId at(std::span<const Node> tuple) const { return colors[tuple_index(tuple, node_count)]; }
  std::size_t distinct_count() const;
};

}  // namespace wlkit
