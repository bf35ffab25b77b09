#include <doctest.h>

#include <algorithm>
#include <random>

#include "wlkit/generators.hpp"
#include "wlkit/oracles.hpp"
#include "wlkit/refinement.hpp"

using namespace wlkit;

namespace {

// Counts edge subsets that form a copy of the pattern, using the isomorphism
// oracle on each candidate. Unrelated to the embedding search.
std::uint64_t count_by_edge_subsets(const Graph& g, const Graph& pattern) {
  const auto edges = g.edges();
  const std::size_t want = pattern.edge_count();
  std::uint64_t total = 0;
  std::vector<bool> pick(edges.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(want, edges.size())), true);
  if (want > edges.size()) return 0;
  do {
    std::vector<Node> touched;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (pick[i]) {
        touched.push_back(edges[i].first);
        touched.push_back(edges[i].second);
      }
    }
    std::ranges::sort(touched);
    touched.erase(std::ranges::unique(touched).begin(), touched.end());
    if (touched.size() != pattern.node_count()) continue;
    std::vector<Edge> local;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!pick[i]) continue;
      auto at = [&](Node x) { return static_cast<Node>(std::ranges::lower_bound(touched, x) - touched.begin()); };
      local.emplace_back(at(edges[i].first), at(edges[i].second));
    }
    if (are_isomorphic(Graph(touched.size(), local), pattern)) ++total;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return total;
}

std::uint64_t total(const Graph& g, SubstructureKind kind) { return count_substructure(g, kind).total; }

}  // namespace

TEST_CASE("isomorphism basics") {
  const Graph c6 = cycle_graph(6);
  const Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  CHECK_FALSE(are_isomorphic(c6, two_c3));
  CHECK_FALSE(are_isomorphic(c6, cycle_graph(7)));
  CHECK(are_isomorphic(c6, apply_permutation(c6, Permutation({3, 1, 4, 0, 5, 2}))));
  const Edge e[] = {{0, 1}};
  CHECK_FALSE(are_isomorphic(Graph(3, e, {0, 0, 1}), Graph(3, e, {0, 1, 0})));
  CHECK(are_isomorphic(Graph(3, e, {0, 0, 1}), Graph(3, std::vector<Edge>{{1, 2}}, {1, 0, 0})));
}

TEST_CASE("isomorphism is an equivalence relation") {
  std::mt19937_64 rng(12);
  std::vector<Graph> battery;
  for (int i = 0; i < 8; ++i) {
    const Graph g = random_graph(6, 0.5, rng());
    battery.push_back(g);
    battery.push_back(apply_permutation(g, random_permutation(6, rng)));
    battery.push_back(edge_swapped(g, 1, rng));
  }
  const std::size_t n = battery.size();
  std::vector<std::vector<bool>> iso(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) iso[i][j] = are_isomorphic(battery[i], battery[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(iso[i][i]);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(iso[i][j] == iso[j][i]);
      for (std::size_t l = 0; l < n; ++l) {
        if (iso[i][j] && iso[j][l]) CHECK(iso[i][l]);
      }
    }
  }
}

TEST_CASE("isomorphic graphs get equal verdicts from every refinement") {
  std::mt19937_64 rng(13);
  const std::vector<AlgorithmSpec> specs{AlgorithmSpec::one_wl(), AlgorithmSpec::kwl(2), AlgorithmSpec::kfwl(2),
                                         AlgorithmSpec::ktfwl(2, 2), AlgorithmSpec::n2fwl(HopLimit::finite(1)),
                                         parse_algorithm("ktfwl+(2,1,geodesic)")};
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = random_graph(7, 0.4, rng());
    const Graph h = apply_permutation(g, random_permutation(7, rng));
    REQUIRE(are_isomorphic(g, h));
    for (const auto& spec : specs) CHECK(joint_distinguish(spec, g, h).kind == Verdict::Kind::Equivalent);
  }
}

TEST_CASE("substructure counts on small graphs") {
  const Graph k4 = complete_graph(4);
  CHECK(total(k4, SubstructureKind::Cycle3) == 4);
  CHECK(total(k4, SubstructureKind::Clique4) == 1);
  CHECK(total(k4, SubstructureKind::Cycle4) == 3);
  CHECK(total(k4, SubstructureKind::ChordalCycle) == 6);
  CHECK(total(k4, SubstructureKind::TailedTriangle) == 12);
  CHECK(total(k4, SubstructureKind::Path4) == 0);

  const Graph c6 = cycle_graph(6);
  CHECK(total(c6, SubstructureKind::Cycle6) == 1);
  CHECK(total(c6, SubstructureKind::Cycle3) == 0);
  CHECK(total(c6, SubstructureKind::Path4) == 6);
  CHECK(count_substructure(c6, SubstructureKind::Path4).per_node == std::vector<std::uint64_t>(6, 5));

  const auto srg = srg_pair();
  CHECK(total(srg.rook, SubstructureKind::Clique4) == 8);
  CHECK(total(srg.shrikhande, SubstructureKind::Clique4) == 0);

  CHECK_THROWS_AS(count_substructure(empty_graph(kCountBudget + 1), SubstructureKind::Cycle3), std::length_error);
}

TEST_CASE("per-node counts add up to pattern size times total") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(9, 0.45, seed);
    for (auto kind : all_substructure_kinds()) {
      const auto c = count_substructure(g, kind);
      std::uint64_t sum = 0;
      for (auto x : c.per_node) sum += x;
      CHECK(sum == c.total * pattern_graph(kind).node_count());
    }
  }
}

TEST_CASE("embedding counts agree with edge-subset enumeration") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = random_graph(7, 0.45, seed);
    for (auto kind : all_substructure_kinds()) {
      CAPTURE(to_string(kind));
      CHECK(total(g, kind) == count_by_edge_subsets(g, pattern_graph(kind)));
    }
  }
}

TEST_CASE("substructure names round-trip") {
  for (auto kind : all_substructure_kinds()) CHECK(parse_substructure_kind(to_string(kind)) == kind);
  CHECK(all_substructure_kinds().size() == 9);
  CHECK_THROWS_AS(parse_substructure_kind("cycle7"), std::invalid_argument);
}

TEST_CASE("distance-two cliques") {
  CHECK(find_distance_two_clique(cycle_graph(4), 2) == std::vector<Node>{0, 2});
  CHECK_FALSE(has_distance_two_clique(cycle_graph(4), 3));
  CHECK_FALSE(has_distance_two_clique(empty_graph(5), 2));
  CHECK_FALSE(has_distance_two_clique(empty_graph(2), 2));
  CHECK(has_distance_two_clique(cycle_graph(6), 3));
  CHECK_THROWS_AS(has_distance_two_clique(cycle_graph(4), 1), std::invalid_argument);
  const std::vector<std::vector<Node>> groups{{0, 1}, {2, 3}, {4, 5}};
  CHECK(find_distance_two_transversal(cycle_graph(6), groups) == std::vector<Node>{0, 2, 4});
  CHECK_FALSE(find_distance_two_transversal(cycle_graph(6), std::vector<std::vector<Node>>{{0}, {1}}).has_value());
  // The twisted CFI side still has an unrestricted clique: two meta nodes and an edge node.
  const auto small = cfi_pair(2);
  CHECK(has_distance_two_clique(small.g_side, 3));
  CHECK(has_distance_two_clique(small.h_side, 3));
}
