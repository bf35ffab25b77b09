#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wlkit/graph.hpp"

namespace wlkit {

/// What a CFI node stands for. Meta nodes are (vertex, subset of its incident
/// base edges as a bitmask in global edge order); edge nodes are (edge, bit).
struct CfiNode {
  enum class Kind { Meta, Edge };
  Kind kind = Kind::Meta;
  std::uint32_t index = 0;  // base vertex or base edge
  std::uint32_t label = 0;  // subset bitmask or 0/1

  friend bool operator==(const CfiNode&, const CfiNode&) = default;
};

/// CFI graphs over the complete graph K_{k+1}. The g side uses even subsets
/// everywhere; the h side uses odd subsets at base vertex 0.
///
/// Numbering: meta nodes first, by base vertex and then by subset bitmask;
/// edge nodes after, by base edge with e0 before e1. Base edges are the pairs
/// (i, j), i < j, in lexicographic order.
struct CfiPair {
  std::uint32_t k = 0;
  Graph g_side;
  Graph h_side;
  std::vector<CfiNode> g_nodes;
  std::vector<CfiNode> h_nodes;
  std::vector<Edge> base_edges;
};

/// (k+1) * 2^(k-1) + (k+1)k/2 * 2
std::size_t cfi_node_count(std::uint32_t k);
/// Throws std::invalid_argument for k < 2 or k > 8.
CfiPair cfi_pair(std::uint32_t k);

/// Circulant skip-link graph: i ~ i±1 and i ~ i±skip (mod n). Throws unless
/// the result is 4-regular.
Graph csl_graph(std::size_t n, std::size_t skip);

struct SrgPair {
  Graph shrikhande;
  Graph rook;
};

/// Both graphs are checked to be SRG(16, 6, 2, 2); a violation throws std::logic_error.
SrgPair srg_pair();
Graph shrikhande_graph();
Graph rook_graph(std::size_t side);
bool is_strongly_regular(const Graph& g, std::size_t n, std::size_t degree, std::size_t lambda, std::size_t mu);

/// Erdős–Rényi G(n, p). Pairs (i, j), i < j, are drawn in lexicographic order
/// from mt19937_64, so a seed gives the same graph on every platform.
Graph random_graph(std::size_t n, double p, std::uint64_t seed);

/// Uniform integer in [0, bound) from the generator, platform independent.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
Permutation random_permutation(std::size_t n, std::mt19937_64& rng);

/// Degree-preserving rewiring by random double-edge swaps.
Graph edge_swapped(const Graph& g, std::size_t swaps, std::mt19937_64& rng);

Graph empty_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph disjoint_union(const Graph& a, const Graph& b);

/// One representative per isomorphism class on n nodes (n <= 6), found by
/// exhaustive canonical forms. 156 graphs for n = 6.
std::vector<Graph> all_nonisomorphic_graphs(std::size_t n);

}  // namespace wlkit
