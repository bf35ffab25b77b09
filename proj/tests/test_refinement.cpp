#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "wlkit/generators.hpp"
#include "wlkit/oracles.hpp"
#include "wlkit/refinement.hpp"

using namespace wlkit;

namespace {

using Partition = std::vector<std::size_t>;

// Canonical block labels: first occurrence order.
Partition blocks(std::span<const ColorId> colors) {
  std::map<ColorId, std::size_t> seen;
  Partition out;
  for (auto c : colors) out.push_back(seen.emplace(c, seen.size()).first->second);
  return out;
}

// Textbook 2-FWL over the disjoint pair (g, h) with ordered maps, run to a
// fixed point. Returns whether the final color multisets differ.
bool reference_2fwl_distinguishes(const Graph& g, const Graph& h) {
  if (g.node_count() != h.node_count()) return true;
  const std::size_t n = g.node_count();
  const Graph* graphs[2] = {&g, &h};
  std::vector<std::uint32_t> color[2];
  std::map<std::vector<std::uint32_t>, std::uint32_t> names;
  auto name = [&](std::vector<std::uint32_t> sig) {
    return names.emplace(std::move(sig), static_cast<std::uint32_t>(names.size())).first->second;
  };
  for (int s = 0; s < 2; ++s) {
    for (Node a = 0; a < n; ++a) {
      for (Node b = 0; b < n; ++b) {
        color[s].push_back(name({graphs[s]->color(a), graphs[s]->color(b), a == b ? 1u : 0u,
                                 graphs[s]->adjacent(a, b) ? 1u : 0u}));
      }
    }
  }
  auto count = [&] {
    std::vector<std::uint32_t> all(color[0]);
    all.insert(all.end(), color[1].begin(), color[1].end());
    std::ranges::sort(all);
    return static_cast<std::size_t>(std::ranges::unique(all).begin() - all.begin());
  };
  std::size_t classes = count();
  while (true) {
    names.clear();
    std::vector<std::uint32_t> next[2];
    for (int s = 0; s < 2; ++s) {
      for (Node a = 0; a < n; ++a) {
        for (Node b = 0; b < n; ++b) {
          std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
          for (Node w = 0; w < n; ++w) pairs.emplace_back(color[s][w * n + b], color[s][a * n + w]);
          std::ranges::sort(pairs);
          std::vector<std::uint32_t> sig{color[s][a * n + b]};
          for (auto [x, y] : pairs) {
            sig.push_back(x);
            sig.push_back(y);
          }
          next[s].push_back(name(std::move(sig)));
        }
      }
    }
    color[0] = std::move(next[0]);
    color[1] = std::move(next[1]);
    const std::size_t now = count();
    if (now == classes) break;
    classes = now;
  }
  std::ranges::sort(color[0]);
  std::ranges::sort(color[1]);
  return color[0] != color[1];
}

bool refines(const Partition& finer, const Partition& coarser) {
  std::map<std::size_t, std::size_t> image;
  for (std::size_t i = 0; i < finer.size(); ++i) {
    auto [it, fresh] = image.emplace(finer[i], coarser[i]);
    if (it->second != coarser[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("atomic type records colors, equalities and adjacency") {
  const Graph path = path_graph(3);  // 0-1-2
  const Node a[] = {0, 1, 0};
  CHECK(atomic_type(path, a) == Code{3, 0, 0, 0, 0, 1, 0, 1, 0, 1});
  const Node b[] = {2, 2};
  CHECK(atomic_type(path, b) == Code{2, 0, 0, 0, 0, 0});
  const Node c[] = {0, 2};
  CHECK(atomic_type(path, c) == Code{2, 0, 0, 0, 1, 0});
}

TEST_CASE("C6 and two triangles share their atomic multiset on pairs") {
  // 6 diagonal pairs, 12 ordered edges, 18 ordered non-edges in both graphs.
  const Graph c6 = cycle_graph(6);
  const Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  auto census = [](const Graph& g) {
    std::map<Code, std::size_t> out;
    for (Node u = 0; u < 6; ++u) {
      for (Node v = 0; v < 6; ++v) {
        const Node pair[] = {u, v};
        ++out[atomic_type(g, pair)];
      }
    }
    return out;
  };
  const auto census_c6 = census(c6);
  CHECK(census_c6 == census(two_c3));
  std::vector<std::size_t> sizes;
  for (auto& [code, count] : census_c6) sizes.push_back(count);
  std::ranges::sort(sizes);
  CHECK(sizes == std::vector<std::size_t>{6, 12, 18});
}

TEST_CASE("1-WL cannot separate C6 from two triangles, 2-FWL can") {
  const Graph c6 = cycle_graph(6);
  const Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  CHECK(joint_distinguish(AlgorithmSpec::one_wl(), c6, two_c3) == Verdict::equivalent(1));
  CHECK(joint_distinguish(AlgorithmSpec::kfwl(2), c6, two_c3) == Verdict::distinguished(1));
  CHECK(joint_distinguish(AlgorithmSpec::kwl(2), c6, two_c3).kind == Verdict::Kind::Equivalent);
  CHECK(joint_distinguish(AlgorithmSpec::kwl(3), c6, two_c3).kind == Verdict::Kind::Distinguished);
}

TEST_CASE("refine reaches the coarsest stable coloring on a path") {
  // P5 under 1-WL: ends, next-to-ends, middle.
  const auto result = refine(AlgorithmSpec::one_wl(), path_graph(5));
  CHECK(result.converged);
  CHECK(result.coloring.distinct_count() == 3);
  CHECK(blocks(result.coloring.colors) == Partition{0, 1, 2, 1, 0});
  // Round 1 splits ends from the rest, round 2 splits the middle, round 3 confirms.
  CHECK(result.iterations == 3);
}

TEST_CASE("refinement never merges classes and always converges") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(8, 0.35, seed);
    for (const auto& spec : {AlgorithmSpec::one_wl(), AlgorithmSpec::kwl(2), AlgorithmSpec::kfwl(2),
                             AlgorithmSpec::ktfwl(2, 2), AlgorithmSpec::n2fwl(HopLimit::finite(1))}) {
      JointRefinement run(spec, {&g});
      Partition before = blocks(run.coloring(0).colors);
      while (!run.all_converged()) {
        run.step();
        const Partition after = blocks(run.coloring(0).colors);
        CHECK(refines(after, before));
        before = after;
        REQUIRE(run.iteration() <= run.cap());
      }
      CHECK(run.converged_at(0) == run.iteration());
    }
  }
}

TEST_CASE("2-FWL verdicts agree with a reference implementation") {
  std::mt19937_64 rng(77);
  std::size_t distinguished = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + trial % 4;
    const Graph g = random_graph(n, 0.4, rng());
    const Graph h = trial % 3 == 0 ? apply_permutation(g, random_permutation(n, rng)) : random_graph(n, 0.4, rng());
    const Verdict v = joint_distinguish(AlgorithmSpec::kfwl(2), g, h);
    REQUIRE(v.kind != Verdict::Kind::Inconclusive);
    const bool ours = v.kind == Verdict::Kind::Distinguished;
    CHECK(ours == reference_2fwl_distinguishes(g, h));
    distinguished += ours ? 1 : 0;
  }
  CHECK(distinguished > 0);
}

TEST_CASE("kfwl(2) and ktfwl(2,1) are the same refinement") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = random_graph(7, 0.3, seed);
    const auto a = refine(AlgorithmSpec::kfwl(2), g);
    const auto b = refine(AlgorithmSpec::ktfwl(2, 1), g);
    CHECK(blocks(a.coloring.colors) == blocks(b.coloring.colors));
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("distinguished pairs are never isomorphic") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_graph(7, 0.5, rng());
    const Graph h = edge_swapped(g, 2, rng);
    for (const auto& spec : {AlgorithmSpec::one_wl(), AlgorithmSpec::kfwl(2), AlgorithmSpec::ktfwl(2, 2)}) {
      if (joint_distinguish(spec, g, h).kind == Verdict::Kind::Distinguished) CHECK_FALSE(are_isomorphic(g, h));
    }
    CHECK(joint_distinguish(AlgorithmSpec::kfwl(2), g, apply_permutation(g, random_permutation(7, rng))).kind ==
          Verdict::Kind::Equivalent);
  }
}

TEST_CASE("graphs of different sizes are distinguished immediately") {
  CHECK(joint_distinguish(AlgorithmSpec::one_wl(), cycle_graph(5), cycle_graph(6)) == Verdict::distinguished(0));
}

TEST_CASE("node colors are part of the initial coloring") {
  const Edge e[] = {{0, 1}};
  const Graph plain(2, e, {0, 0});
  const Graph painted(2, e, {0, 1});
  CHECK(joint_distinguish(AlgorithmSpec::one_wl(), plain, painted) == Verdict::distinguished(0));
}

TEST_CASE("cap yields an inconclusive verdict") {
  const Graph c9 = cycle_graph(9);
  const Graph c3x3 = disjoint_union(disjoint_union(cycle_graph(3), cycle_graph(3)), cycle_graph(3));
  auto spec = AlgorithmSpec::one_wl();
  spec.cap = 0;
  CHECK(joint_distinguish(spec, c9, c3x3) == Verdict::inconclusive(0));

  auto fwl = AlgorithmSpec::kfwl(2);
  fwl.cap = 1;
  const auto r = refine(fwl, path_graph(9));
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("histogram comparison requires a shared interner") {
  const Graph g = cycle_graph(5);
  const auto a = refine(AlgorithmSpec::one_wl(), g);
  const auto b = refine(AlgorithmSpec::one_wl(), g);
  CHECK(a.provenance != b.provenance);
  CHECK_THROWS_AS(histogram_equal(a, b), std::invalid_argument);

  const std::vector<Graph> pair{g, apply_permutation(g, Permutation({4, 3, 2, 1, 0}))};
  const auto joint = refine_jointly(AlgorithmSpec::one_wl(), pair);
  CHECK(histogram_equal(joint[0], joint[1]));
  const std::vector<Graph> mixed{cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))};
  const auto fwl = refine_jointly(AlgorithmSpec::kfwl(2), mixed);
  CHECK_FALSE(histogram_equal(fwl[0], fwl[1]));
}

TEST_CASE("the N2 neighborhood sees distances 1-WL cannot") {
  // Rook 4x4 vs Shrikhande: same 1-WL and 2-FWL colors, separated by n2fwl(h=1).
  const auto srg = srg_pair();
  CHECK(joint_distinguish(AlgorithmSpec::one_wl(), srg.rook, srg.shrikhande).kind == Verdict::Kind::Equivalent);
  CHECK(joint_distinguish(AlgorithmSpec::kfwl(2), srg.rook, srg.shrikhande) == Verdict::equivalent(1));
  CHECK(joint_distinguish(AlgorithmSpec::n2fwl(HopLimit::finite(1)), srg.rook, srg.shrikhande) ==
        Verdict::distinguished(1));
}

TEST_CASE("results do not depend on the worker count") {
  const Graph g = random_graph(14, 0.3, 9);
  std::mt19937_64 rng(4);
  const Graph h = edge_swapped(g, 3, rng);
  for (const auto& spec : {AlgorithmSpec::kfwl(2), AlgorithmSpec::ktfwl(2, 2), AlgorithmSpec::n2fwl(HopLimit::finite(2))}) {
    const auto one = refine(spec, g, {.jobs = 1});
    const auto four = refine(spec, g, {.jobs = 4});
    CHECK(one.coloring.colors == four.coloring.colors);
    CHECK(one.iterations == four.iterations);
    CHECK(joint_distinguish(spec, g, h, {.jobs = 1}) == joint_distinguish(spec, g, h, {.jobs = 3}));
  }
}

TEST_CASE("pairwise verdicts match individual joint runs") {
  std::vector<Graph> graphs{cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3)), path_graph(6),
                            random_graph(6, 0.5, 1), random_graph(6, 0.5, 2), complete_graph(5)};
  graphs.push_back(apply_permutation(graphs[3], Permutation({5, 4, 3, 2, 1, 0})));
  for (const auto& spec : {AlgorithmSpec::one_wl(), AlgorithmSpec::kfwl(2)}) {
    const auto table = pairwise_verdicts(spec, graphs);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      for (std::size_t j = 0; j < graphs.size(); ++j) {
        CHECK(table[i][j] == joint_distinguish(spec, graphs[i], graphs[j]));
      }
    }
  }
}

TEST_CASE("json shapes") {
  const auto r = refine(AlgorithmSpec::kfwl(2), cycle_graph(4));
  const auto j = to_json(r);
  CHECK(j.at("algorithm") == "kfwl(2)");
  CHECK(j.at("converged") == true);
  CHECK(j.at("iterations") == r.iterations);
  std::size_t total = 0;
  for (const auto& entry : j.at("histogram")) total += entry.at(1).get<std::size_t>();
  CHECK(total == 16);
  CHECK(to_json(Verdict::distinguished(2)) == nlohmann::json{{"verdict", "Distinguished"}, {"iteration", 2}});
}

TEST_CASE("faults break the refinement") {
  const Graph c6 = cycle_graph(6);
  const Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  CHECK(joint_distinguish(AlgorithmSpec::kfwl(2), c6, two_c3, {.fault = Fault::DropAggregation}).kind ==
        Verdict::Kind::Equivalent);
  const auto cfi = cfi_pair(3);
  CHECK(joint_distinguish(AlgorithmSpec::ktfwl(2, 2), cfi.g_side, cfi.h_side, {.fault = Fault::BreakGrouping}).kind ==
        Verdict::Kind::Equivalent);
}
