#include "wlkit/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

namespace wlkit {

namespace {

DistanceTable bfs_all_pairs(std::size_t n, const std::vector<std::vector<Node>>& neighbors) {
  const auto inf = static_cast<std::uint32_t>(n);
  std::vector<std::uint32_t> entries(n * n, inf);
  std::deque<Node> queue;
  for (Node s = 0; s < n; ++s) {
    auto* row = entries.data() + static_cast<std::size_t>(s) * n;
    row[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const Node u = queue.front();
      queue.pop_front();
      for (Node w : neighbors[u]) {
        if (row[w] == inf) {
          row[w] = row[u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return DistanceTable(n, std::move(entries));
}

void check_node(const Graph& g, Node v) {
  if (v >= g.node_count()) {
    throw GraphError("node " + std::to_string(v) + " out of range for graph with " +
                     std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

DistanceTable::DistanceTable(std::size_t n, std::vector<std::uint32_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw GraphError("distance table must have n*n entries");
  }
}

Permutation::Permutation(std::vector<Node> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Node v : image_) {
    if (v >= image_.size() || seen[v]) {
      throw GraphError("permutation image is not a bijection on [n]");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Node> image(n);
  std::iota(image.begin(), image.end(), Node{0});
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<Node> inv(image_.size());
  for (Node v = 0; v < image_.size(); ++v) inv[image_[v]] = v;
  return Permutation(std::move(inv));
}

Graph::Graph(std::size_t n, std::span<const Edge> edges, std::vector<NodeColor> colors)
    : n_(n), adjacency_(n * n, 0), neighbors_(n), colors_(std::move(colors)) {
  if (colors_.empty()) colors_.assign(n, 0);
  if (colors_.size() != n) {
    throw GraphError("color vector has " + std::to_string(colors_.size()) + " entries, expected " +
                     std::to_string(n));
  }
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
    auto& cell = adjacency_[static_cast<std::size_t>(u) * n + v];
    if (cell) continue;
    cell = 1;
    adjacency_[static_cast<std::size_t>(v) * n + u] = 1;
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
    ++edge_count_;
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  distances_ = bfs_all_pairs(n_, neighbors_);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Node u = 0; u < n_; ++u) {
    for (Node v : neighbors_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

DistanceTable all_pairs_spd(const Graph& g) {
  std::vector<std::vector<Node>> neighbors(g.node_count());
  for (Node v = 0; v < g.node_count(); ++v) {
    auto nb = g.neighbors(v);
    neighbors[v].assign(nb.begin(), nb.end());
  }
  return bfs_all_pairs(g.node_count(), neighbors);
}

std::vector<Node> neighbors_within(const Graph& g, Node v, HopLimit k) {
  check_node(g, v);
  std::vector<Node> out;
  const auto row = g.distances().row(v);
  const auto inf = g.distances().infinity();
  for (Node u = 0; u < row.size(); ++u) {
    if (row[u] != inf && k.admits(row[u])) out.push_back(u);
  }
  return out;
}

std::vector<Node> neighbors_within(const Graph& g, Node v, std::uint32_t k) {
  return neighbors_within(g, v, HopLimit::finite(k));
}

std::vector<Node> kth_hop(const Graph& g, Node v, std::uint32_t k) {
  check_node(g, v);
  std::vector<Node> out;
  const auto row = g.distances().row(v);
  const auto inf = g.distances().infinity();
  for (Node u = 0; u < row.size(); ++u) {
    if (row[u] != inf && row[u] == k) out.push_back(u);
  }
  return out;
}

Graph apply_permutation(const Graph& g, const Permutation& perm) {
  if (perm.size() != g.node_count()) {
    throw GraphError("permutation size " + std::to_string(perm.size()) + " does not match graph size " +
                     std::to_string(g.node_count()));
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) edges.emplace_back(perm(u), perm(v));
  std::vector<NodeColor> colors(g.node_count());
  for (Node v = 0; v < g.node_count(); ++v) colors[perm(v)] = g.color(v);
  return Graph(g.node_count(), edges, std::move(colors));
}

}  // namespace wlkit
