#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wlkit {

using Node = std::uint32_t;
using NodeColor = std::uint32_t;
using Edge = std::pair<Node, Node>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hop radius that may be unbounded. Used for N_h balls and the N² filter.
class HopLimit {
 public:
  static constexpr HopLimit finite(std::uint32_t hops) { return HopLimit(hops, false); }
  static constexpr HopLimit infinite() { return HopLimit(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint32_t hops() const { return hops_; }
  constexpr bool admits(std::uint32_t distance) const { return infinite_ || distance <= hops_; }

  friend constexpr bool operator==(HopLimit, HopLimit) = default;

 private:
  constexpr HopLimit(std::uint32_t hops, bool infinite) : hops_(hops), infinite_(infinite) {}
  std::uint32_t hops_;
  bool infinite_;
};

/// All-pairs hop distances. Unreachable pairs hold infinity(), which equals n.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t n, std::vector<std::uint32_t> entries);

  std::size_t size() const { return n_; }
  std::uint32_t infinity() const { return static_cast<std::uint32_t>(n_); }
  std::uint32_t at(Node u, Node v) const { return entries_[static_cast<std::size_t>(u) * n_ + v]; }
  bool finite(Node u, Node v) const { return at(u, v) != infinity(); }
  std::span<const std::uint32_t> row(Node u) const {
    return {entries_.data() + static_cast<std::size_t>(u) * n_, n_};
  }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> entries_;
};

class Permutation {
 public:
  explicit Permutation(std::vector<Node> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return image_.size(); }
  Node operator()(Node v) const { return image_[v]; }
  std::span<const Node> image() const { return image_; }
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Node> image_;
};

/// Immutable simple undirected node-colored graph. Distances are computed once
/// at construction, so a Graph can be shared read-only across workers.
class Graph {
 public:
  Graph() = default;
  /// Throws GraphError on out-of-range endpoints, self-loops, or a color
  /// vector whose length is not n. Duplicate edges collapse.
  Graph(std::size_t n, std::span<const Edge> edges, std::vector<NodeColor> colors = {});

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }
  bool adjacent(Node u, Node v) const { return adjacency_[static_cast<std::size_t>(u) * n_ + v] != 0; }
  std::span<const Node> neighbors(Node v) const { return neighbors_[v]; }
  std::size_t degree(Node v) const { return neighbors_[v].size(); }
  NodeColor color(Node v) const { return colors_[v]; }
  std::span<const NodeColor> colors() const { return colors_; }
  const DistanceTable& distances() const { return distances_; }

  /// Edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adjacency_ == b.adjacency_ && a.colors_ == b.colors_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<Node>> neighbors_;
  std::vector<NodeColor> colors_;
  DistanceTable distances_;
};

DistanceTable all_pairs_spd(const Graph& g);

/// N_k(v): nodes at distance <= k from v, v included. Sorted.
std::vector<Node> neighbors_within(const Graph& g, Node v, std::uint32_t k);
std::vector<Node> neighbors_within(const Graph& g, Node v, HopLimit k);
/// Q_k(v): nodes at distance exactly k from v. Sorted.
std::vector<Node> kth_hop(const Graph& g, Node v, std::uint32_t k);

Graph apply_permutation(const Graph& g, const Permutation& perm);

}  // namespace wlkit
