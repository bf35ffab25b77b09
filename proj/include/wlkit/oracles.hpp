#pragma once

// Brute-force ground truth, written independently of the refinement engine.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wlkit/graph.hpp"

namespace wlkit {

/// Exhaustive search for an edge- and color-preserving bijection. Candidates
/// are pruned by a private color refinement, which never removes a valid
/// mapping, so the answer is exact at any size (runtime is the only limit).
bool are_isomorphic(const Graph& g, const Graph& h);

enum class SubstructureKind {
  Cycle3,
  Cycle4,
  Cycle5,
  Cycle6,
  TailedTriangle,     // triangle plus a pendant edge
  ChordalCycle,       // 4-cycle plus one chord
  Clique4,
  Path4,              // simple path with 4 edges (5 nodes)
  TriangleRectangle,  // triangle and 4-cycle sharing one edge
};

std::string to_string(SubstructureKind kind);
/// Throws std::invalid_argument on an unknown name.
SubstructureKind parse_substructure_kind(std::string_view name);
const std::vector<SubstructureKind>& all_substructure_kinds();
/// The pattern as a small graph.
Graph pattern_graph(SubstructureKind kind);

struct SubstructureCount {
  std::uint64_t total = 0;            // subgraph occurrences (not necessarily induced)
  std::vector<std::uint64_t> per_node;  // occurrences containing the node
};

/// Largest graph count_substructure accepts.
inline constexpr std::size_t kCountBudget = 60;

/// Counts injective edge-preserving maps of the pattern and divides by the
/// pattern's automorphism count. Throws std::length_error above kCountBudget nodes.
SubstructureCount count_substructure(const Graph& g, SubstructureKind kind);

/// A node set of the given size whose members are pairwise at distance
/// exactly two, if one exists. Throws std::invalid_argument for size < 2.
std::optional<std::vector<Node>> find_distance_two_clique(const Graph& g, std::size_t size);
bool has_distance_two_clique(const Graph& g, std::size_t size);
/// Same, but the clique takes exactly one node from each group. With CFI
/// graphs and one group of meta nodes per base vertex this is the form in
/// which the twisted side has no clique; unrestricted cliques exist on both.
std::optional<std::vector<Node>> find_distance_two_transversal(const Graph& g,
                                                               std::span<const std::vector<Node>> groups);

}  // namespace wlkit
