#include "wlkit/generators.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wlkit {

std::size_t cfi_node_count(std::uint32_t k) {
  const std::size_t vertices = k + 1;
  return vertices * (std::size_t{1} << (k - 1)) + vertices * k;
}

namespace {

std::vector<CfiNode> cfi_nodes(std::uint32_t k, bool twisted) {
  std::vector<CfiNode> nodes;
  for (std::uint32_t v = 0; v <= k; ++v) {
    const unsigned parity = (twisted && v == 0) ? 1 : 0;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if (static_cast<unsigned>(std::popcount(mask) & 1) == parity) nodes.push_back({CfiNode::Kind::Meta, v, mask});
    }
  }
  const std::uint32_t edges = (k + 1) * k / 2;
  for (std::uint32_t e = 0; e < edges; ++e) {
    nodes.push_back({CfiNode::Kind::Edge, e, 0});
    nodes.push_back({CfiNode::Kind::Edge, e, 1});
  }
  return nodes;
}

Graph cfi_side(std::uint32_t k, const std::vector<CfiNode>& nodes, const std::vector<Edge>& base) {
  // incident[v]: base edge indices touching v, in global order; bit b of a
  // subset mask refers to incident[v][b].
  std::vector<std::vector<std::uint32_t>> incident(k + 1);
  for (std::uint32_t e = 0; e < base.size(); ++e) {
    incident[base[e].first].push_back(e);
    incident[base[e].second].push_back(e);
  }
  std::vector<Node> edge_node(base.size() * 2);
  for (Node x = 0; x < nodes.size(); ++x) {
    if (nodes[x].kind == CfiNode::Kind::Edge) edge_node[nodes[x].index * 2 + nodes[x].label] = x;
  }
  std::vector<Edge> edges;
  for (std::uint32_t e = 0; e < base.size(); ++e) edges.emplace_back(edge_node[2 * e], edge_node[2 * e + 1]);
  for (Node x = 0; x < nodes.size(); ++x) {
    if (nodes[x].kind != CfiNode::Kind::Meta) continue;
    const auto& inc = incident[nodes[x].index];
    for (std::uint32_t b = 0; b < inc.size(); ++b) {
      const bool in_subset = (nodes[x].label >> b) & 1u;
      edges.emplace_back(x, edge_node[2 * inc[b] + (in_subset ? 1 : 0)]);
    }
  }
  return Graph(nodes.size(), edges);
}

}  // namespace

CfiPair cfi_pair(std::uint32_t k) {
  if (k < 2 || k > 8) throw std::invalid_argument("cfi_pair: k must be in [2, 8]");
  CfiPair pair;
  pair.k = k;
  for (Node i = 0; i <= k; ++i) {
    for (Node j = i + 1; j <= k; ++j) pair.base_edges.emplace_back(i, j);
  }
  pair.g_nodes = cfi_nodes(k, false);
  pair.h_nodes = cfi_nodes(k, true);
  pair.g_side = cfi_side(k, pair.g_nodes, pair.base_edges);
  pair.h_side = cfi_side(k, pair.h_nodes, pair.base_edges);
  return pair;
}

Graph csl_graph(std::size_t n, std::size_t skip) {
  if (n < 5 || skip < 2 || skip > n - 2 || 2 * skip == n) {
    throw std::invalid_argument("csl_graph: skip " + std::to_string(skip) + " invalid for n = " + std::to_string(n));
  }
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    edges.emplace_back(i, static_cast<Node>((i + 1) % n));
    edges.emplace_back(i, static_cast<Node>((i + skip) % n));
  }
  Graph g(n, edges);
  for (Node v = 0; v < n; ++v) {
    if (g.degree(v) != 4) throw std::invalid_argument("csl_graph: result is not 4-regular");
  }
  return g;
}

bool is_strongly_regular(const Graph& g, std::size_t n, std::size_t degree, std::size_t lambda, std::size_t mu) {
  if (g.node_count() != n) return false;
  for (Node v = 0; v < n; ++v) {
    if (g.degree(v) != degree) return false;
  }
  for (Node u = 0; u < n; ++u) {
    for (Node v = u + 1; v < n; ++v) {
      std::size_t common = 0;
      for (Node w : g.neighbors(u)) common += g.adjacent(w, v) ? 1 : 0;
      if (common != (g.adjacent(u, v) ? lambda : mu)) return false;
    }
  }
  return true;
}

Graph shrikhande_graph() {
  const int steps[][2] = {{1, 0}, {3, 0}, {0, 1}, {0, 3}, {1, 1}, {3, 3}};
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (const auto& s : steps) {
        edges.emplace_back(static_cast<Node>(4 * i + j), static_cast<Node>(4 * ((i + s[0]) % 4) + (j + s[1]) % 4));
      }
    }
  }
  return Graph(16, edges);
}

Graph rook_graph(std::size_t side) {
  std::vector<Edge> edges;
  for (Node a = 0; a < side * side; ++a) {
    for (Node b = a + 1; b < side * side; ++b) {
      if ((a / side == b / side) != (a % side == b % side)) edges.emplace_back(a, b);
    }
  }
  return Graph(side * side, edges);
}

SrgPair srg_pair() {
  SrgPair pair{shrikhande_graph(), rook_graph(4)};
  if (!is_strongly_regular(pair.shrikhande, 16, 6, 2, 2) || !is_strongly_regular(pair.rook, 16, 6, 2, 2)) {
    throw std::logic_error("srg_pair: construction is not SRG(16,6,2,2)");
  }
  return pair;
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random_graph: p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      const double draw = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (draw < p) edges.emplace_back(i, j);
    }
  }
  return Graph(n, edges);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Node> image(n);
  std::iota(image.begin(), image.end(), Node{0});
  for (std::size_t i = n; i > 1; --i) std::swap(image[i - 1], image[uniform_below(rng, i)]);
  return Permutation(std::move(image));
}

Graph edge_swapped(const Graph& g, std::size_t swaps, std::mt19937_64& rng) {
  auto edges = g.edges();
  if (edges.size() < 2) return g;
  std::set<Edge> present(edges.begin(), edges.end());
  const auto key = [](Node a, Node b) { return a < b ? Edge{a, b} : Edge{b, a}; };
  for (std::size_t done = 0, attempts = 0; done < swaps && attempts < 100 * swaps; ++attempts) {
    const auto i = uniform_below(rng, edges.size());
    const auto j = uniform_below(rng, edges.size());
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (uniform_below(rng, 2) == 1) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) continue;
    // (a,b),(c,d) -> (a,d),(c,b)
    if (present.contains(key(a, d)) || present.contains(key(c, b))) continue;
    present.erase(key(a, b));
    present.erase(key(c, d));
    edges[i] = key(a, d);
    edges[j] = key(c, b);
    present.insert(edges[i]);
    present.insert(edges[j]);
    ++done;
  }
  return Graph(g.node_count(), edges, std::vector<NodeColor>(g.colors().begin(), g.colors().end()));
}

Graph empty_graph(std::size_t n) { return Graph(n, {}); }

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Node i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) edges.emplace_back(i, static_cast<Node>((i + 1) % n));
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  const auto shift = static_cast<Node>(a.node_count());
  auto edges = a.edges();
  for (auto [u, v] : b.edges()) edges.emplace_back(u + shift, v + shift);
  std::vector<NodeColor> colors(a.colors().begin(), a.colors().end());
  colors.insert(colors.end(), b.colors().begin(), b.colors().end());
  return Graph(a.node_count() + b.node_count(), edges, std::move(colors));
}

std::vector<Graph> all_nonisomorphic_graphs(std::size_t n) {
  if (n > 6) throw std::invalid_argument("all_nonisomorphic_graphs: n must be <= 6");
  std::vector<Edge> pairs;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const auto pair_index = [&](Node a, Node b) {
    if (a > b) std::swap(a, b);
    // Position of (a, b) in the lexicographic pair list.
    return static_cast<std::size_t>(a * (2 * n - a - 1) / 2 + (b - a - 1));
  };
  // Each node permutation acts on edge masks as a permutation of pair bits.
  std::vector<std::vector<std::uint8_t>> actions;
  std::vector<Node> perm(n);
  std::iota(perm.begin(), perm.end(), Node{0});
  do {
    std::vector<std::uint8_t> action(pairs.size());
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      action[e] = static_cast<std::uint8_t>(pair_index(perm[pairs[e].first], perm[pairs[e].second]));
    }
    actions.push_back(std::move(action));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Graph> out;
  const std::uint32_t masks = 1u << pairs.size();
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    // Keep a mask only if it is the smallest in its orbit.
    bool smallest = true;
    for (const auto& action : actions) {
      std::uint32_t image = 0;
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if ((mask >> e) & 1u) image |= 1u << action[e];
      }
      if (image < mask) {
        smallest = false;
        break;
      }
    }
    if (!smallest) continue;
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if ((mask >> e) & 1u) edges.push_back(pairs[e]);
    }
    out.emplace_back(n, edges);
  }
  return out;
}

}  // namespace wlkit
