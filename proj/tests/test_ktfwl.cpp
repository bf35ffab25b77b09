#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "wlkit/algorithm.hpp"
#include "wlkit/generators.hpp"
#include "wlkit/ktfwl.hpp"
#include "wlkit/refinement.hpp"

using namespace wlkit;

namespace {

using Tuples = std::vector<std::vector<Node>>;

std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  std::size_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

std::vector<std::size_t> blocks(std::span<const ColorId> colors) {
  std::map<ColorId, std::size_t> seen;
  std::vector<std::size_t> out;
  for (auto c : colors) out.push_back(seen.emplace(c, seen.size()).first->second);
  return out;
}

// Partition sequence from the literal nested-code update, one interner per run.
std::vector<std::vector<std::size_t>> exact_rounds(const Graph& g, std::size_t k, std::size_t t,
                                                   const EquivariantSetSpec& es, std::size_t rounds) {
  const std::size_t n = g.node_count();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= n;
  std::map<Code, std::uint32_t> names;
  TupleColoring prev{k, n, std::vector<ColorId>(total)};
  std::vector<Node> v(k);
  for (std::size_t i = 0; i < total; ++i) {
    tuple_at(i, n, v);
    prev.colors[i] = ColorId{names.emplace(atomic_type(g, v), names.size()).first->second};
  }
  std::vector<std::vector<std::size_t>> out{blocks(prev.colors)};
  for (std::size_t r = 0; r < rounds; ++r) {
    names.clear();
    TupleColoring next = prev;
    for (std::size_t i = 0; i < total; ++i) {
      tuple_at(i, n, v);
      next.colors[i] = ColorId{names.emplace(update_rule_ktfwl_plus(g, k, t, es, prev, v), names.size()).first->second};
    }
    prev = std::move(next);
    out.push_back(blocks(prev.colors));
  }
  return out;
}

Tuples relabel(const Tuples& tuples, const Permutation& perm) {
  Tuples out;
  for (auto w : tuples) {
    for (auto& x : w) x = perm(x);
    out.push_back(std::move(w));
  }
  std::ranges::sort(out);
  return out;
}

}  // namespace

TEST_CASE("neighborhood tuple for k = t = 2") {
  const Node v[] = {10, 20};
  const Node w[] = {1, 2};
  CHECK(neighborhood_tuple(v, w) == Tuples{{10, 20}, {10, 1}, {10, 2}, {1, 20}, {2, 20}, {1, 2}});
}

TEST_CASE("neighborhood tuple for t = 1 is the k-FWL neighbor list") {
  const Node v[] = {10, 20, 30};
  const Node w[] = {7};
  CHECK(neighborhood_tuple(v, w) == Tuples{{10, 20, 30}, {7, 20, 30}, {10, 7, 30}, {10, 20, 7}});
  CHECK(neighborhood_tuple(std::span<const Node>(v, 2), std::span<const Node>(w, 1)).size() == 3);
  CHECK_THROWS_AS(neighborhood_tuple(std::span<const Node>(), w), std::invalid_argument);
  CHECK_THROWS_AS(neighborhood_tuple(v, std::span<const Node>()), std::invalid_argument);
}

TEST_CASE("neighborhood tuple length law") {
  CHECK(neighborhood_tuple_length(2, 3) == 10);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t t = 1; t <= 4; ++t) {
      std::size_t expected = 0;
      for (std::size_t m = 0; m <= std::min(k, t); ++m) expected += binomial(k, m) * binomial(t, m);
      CHECK(neighborhood_tuple_length(k, t) == expected);
      std::vector<Node> v(k), w(t);
      for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<Node>(i);
      for (std::size_t i = 0; i < t; ++i) w[i] = static_cast<Node>(100 + i);
      const auto tuples = neighborhood_tuple(v, w);
      CHECK(tuples.size() == expected);
      // Symbolic labels are all distinct, so the entries are too.
      CHECK(std::set<std::vector<Node>>(tuples.begin(), tuples.end()).size() == expected);
      CHECK(NeighborhoodPattern(k, t).length() == expected);
    }
  }
}

TEST_CASE("one index mapping serves every tuple pair") {
  std::mt19937_64 rng(8);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t t = 1; t <= 4; ++t) {
      const NeighborhoodPattern pattern(k, t);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Node> v(k), w(t), both;
        for (auto& x : v) x = static_cast<Node>(uniform_below(rng, 5));
        for (auto& x : w) x = static_cast<Node>(uniform_below(rng, 5));
        both = v;
        both.insert(both.end(), w.begin(), w.end());
        const auto tuples = neighborhood_tuple(v, w);
        for (std::size_t e = 0; e < pattern.length(); ++e) {
          const auto src = pattern.sources(e);
          for (std::size_t j = 0; j < k; ++j) CHECK(tuples[e][j] == both[src[j]]);
        }
      }
    }
  }
}

TEST_CASE("equivariant set examples") {
  const Graph path = path_graph(3);  // nodes 0-1-2 stand for 1-2-3
  const Node ends[] = {0, 2};
  CHECK(equivariant_set(EquivariantSetSpec::n2(HopLimit::finite(1)), path, ends) == Tuples{{1, 1}});
  CHECK(n2_neighborhood(path, 0, 2, HopLimit::finite(1)) == std::vector<std::array<Node, 2>>{{1, 1}});

  const Graph c6 = cycle_graph(6);
  const Node opposite[] = {0, 3};
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::GeodesicSet), c6, opposite) == std::vector<Node>{0, 1, 2, 3, 4, 5});
  const Node same[] = {4, 4};
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::GeodesicSet), c6, same) == std::vector<Node>{4});

  const Node near[] = {0, 2};
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::CommonNbr), c6, near) == std::vector<Node>{1});
  // Q_2(0) = {2, 4} misses Q_1(2) = {1, 3}; in a triangle the shell is the third node.
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::SpdShell), c6, near).empty());
  const Node edge[] = {0, 1};
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::SpdShell), complete_graph(3), edge) == std::vector<Node>{2});
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::UnionOpenNbrs), c6, near) == std::vector<Node>{1, 3, 5});
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::UnionClosedNbrs), c6, near) == std::vector<Node>{0, 1, 2, 3, 5});
  CHECK(evaluate_base_set(BaseSet::open_nbr(2), c6, near) == std::vector<Node>{1, 3});
  CHECK(evaluate_base_set(BaseSet::hop_ball(1, HopLimit::finite(2)), c6, near) == std::vector<Node>{0, 1, 2, 4, 5});

  const auto global = equivariant_set(EquivariantSetSpec::global(2), path, ends);
  CHECK(global.size() == 9);
  CHECK(std::ranges::is_sorted(global));
}

TEST_CASE("disconnected pairs have empty distance-based sets") {
  const Graph split = disjoint_union(cycle_graph(3), cycle_graph(3));
  const Node apart[] = {0, 4};
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::SpdShell), split, apart).empty());
  CHECK(evaluate_base_set(BaseSet::of(BaseSetKind::GeodesicSet), split, apart).empty());
  CHECK(equivariant_set(EquivariantSetSpec::n2(HopLimit::finite(2)), split, apart).empty());
  CHECK(equivariant_set(EquivariantSetSpec::n2(HopLimit::infinite()), split, apart).size() == 9);
}

TEST_CASE("isolated node pair keeps only itself") {
  const Graph lonely = empty_graph(3);
  CHECK(n2_neighborhood(lonely, 1, 1, HopLimit::finite(1)) == std::vector<std::array<Node, 2>>{{1, 1}});
  CHECK(n2_neighborhood(lonely, 1, 1, HopLimit::infinite()) == std::vector<std::array<Node, 2>>{{1, 1}});
}

TEST_CASE("descriptors must fit the tuple arity") {
  auto single = [](BaseSet base) {
    EquivariantSetSpec es;
    es.coordinates = {base};
    return es;
  };
  CHECK_THROWS_AS(single(BaseSet::closed_nbr(3)).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(single(BaseSet::closed_nbr(0)).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(single(BaseSet::of(BaseSetKind::CommonNbr)).validate(1), std::invalid_argument);
  CHECK_NOTHROW(single(BaseSet::closed_nbr(3)).validate(3));
}

TEST_CASE("N2 neighborhoods grow with the radius") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(10, 0.25, seed);
    for (Node a = 0; a < 10; ++a) {
      for (Node b = 0; b < 10; ++b) {
        auto previous = n2_neighborhood(g, a, b, HopLimit::finite(1));
        for (std::uint32_t h = 2; h <= 4; ++h) {
          const auto current = n2_neighborhood(g, a, b, HopLimit::finite(h));
          CHECK(std::ranges::includes(current, previous));
          previous = current;
        }
        const auto unbounded = n2_neighborhood(g, a, b, HopLimit::infinite());
        CHECK(std::ranges::includes(unbounded, previous));
        // With no filter the set is N_1(b) x N_1(a).
        CHECK(unbounded.size() == (g.degree(b) + 1) * (g.degree(a) + 1));
      }
    }
  }
}

TEST_CASE("equivariant sets commute with relabelling") {
  std::mt19937_64 rng(21);
  const std::vector<std::string> specs{"global*2",     "n2(h=1)",      "n2(h=inf)",   "union_open",
                                       "prod(open_nbr(2),geodesic)", "common_nbr*2", "spd_shell",
                                       "hop_ball(1,2)&ball(3)"};
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(8, 0.3, rng());
    const Permutation perm = random_permutation(8, rng);
    const Graph moved = apply_permutation(g, perm);
    for (const auto& text : specs) {
      const auto es = parse_equivariant_set(text);
      for (Node a = 0; a < 8; ++a) {
        for (Node b = 0; b < 8; ++b) {
          const Node v[] = {a, b};
          const Node pv[] = {perm(a), perm(b)};
          CHECK(relabel(equivariant_set(es, g, v), perm) == equivariant_set(es, moved, pv));
        }
      }
    }
  }
}

TEST_CASE("hierarchical codes") {
  const std::uint32_t x = 5, y = 6;
  const Node a = 0, b = 1, c = 2, d = 3;
  auto member = [](std::vector<Node> key, std::uint32_t word) { return KeyedCode{std::move(key), Code{word}}; };

  SUBCASE("t = 1 is the sorted multiset") {
    const std::vector<KeyedCode> m{member({c}, 9), member({a}, 4), member({b}, 9)};
    CHECK(hierarchical_encode(m, 1) == multiset_encode({Code{9}, Code{4}, Code{9}}));
    CHECK(multiset_encode({Code{9}, Code{4}}) == Code{2, 1, 4, 1, 9});
  }
  SUBCASE("order inside a group does not matter") {
    const std::vector<KeyedCode> one{member({a, b}, x), member({c, b}, y), member({a, d}, x)};
    const std::vector<KeyedCode> two{member({a, d}, x), member({c, b}, y), member({a, b}, x)};
    CHECK(hierarchical_encode(one, 2) == hierarchical_encode(two, 2));
  }
  SUBCASE("swapping codes inside one group gives the same code") {
    // Both members share the last coordinate b, so they form a single
    // innermost multiset {x, y} either way.
    const std::vector<KeyedCode> one{member({a, b}, x), member({c, b}, y)};
    const std::vector<KeyedCode> two{member({a, b}, y), member({c, b}, x)};
    CHECK(hierarchical_encode(one, 2) == hierarchical_encode(two, 2));
  }
  SUBCASE("splitting a group changes the code") {
    const std::vector<KeyedCode> one{member({a, b}, x), member({c, b}, y)};
    const std::vector<KeyedCode> two{member({a, b}, x), member({c, d}, y)};
    CHECK(hierarchical_encode(one, 2) != hierarchical_encode(two, 2));
  }
  SUBCASE("the grouping is not the flat multiset") {
    // {{x,x},{y,y}} versus {{x,y},{x,y}}: same flat multiset.
    const std::vector<KeyedCode> one{member({a, b}, x), member({c, b}, x), member({a, d}, y), member({c, d}, y)};
    const std::vector<KeyedCode> two{member({a, b}, x), member({c, b}, y), member({a, d}, x), member({c, d}, y)};
    CHECK(hierarchical_encode(one, 2) != hierarchical_encode(two, 2));
  }
  SUBCASE("key arity is checked") {
    const std::vector<KeyedCode> m{member({a}, x)};
    CHECK_THROWS_AS(hierarchical_encode(m, 2), std::invalid_argument);
  }
}

TEST_CASE("an empty equivariant set leaves only the previous color") {
  const Graph g = empty_graph(3);
  TupleColoring prev{2, 3, std::vector<ColorId>(9, ColorId{4})};
  const Node v[] = {0, 1};
  const auto es = parse_equivariant_set("common_nbr");
  const Code code = update_rule_ktfwl_plus(g, 2, 1, es, prev, v);
  CHECK(code == Code{4, 0});
}

TEST_CASE("the engine matches the literal nested update") {
  struct Case {
    std::size_t k, t;
    std::string es;
  };
  const std::vector<Case> cases{{2, 1, "global*1"},     {2, 2, "global*2"},      {2, 2, "n2(h=1)"},
                                {2, 2, "n2(h=inf)"},    {2, 1, "geodesic"},      {2, 2, "common_nbr*2"},
                                {3, 1, "union_closed"}, {2, 3, "closed_nbr(1)*3"}, {3, 2, "prod(open_nbr(3),global)"}};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = random_graph(6, 0.4, seed);
    for (const auto& c : cases) {
      CAPTURE(c.es);
      const auto es = parse_equivariant_set(c.es);
      const auto spec = AlgorithmSpec::ktfwl_plus(static_cast<std::uint32_t>(c.k), static_cast<std::uint32_t>(c.t), es);
      JointRefinement run(spec, {&g});
      const auto expected = exact_rounds(g, c.k, c.t, es, 4);
      CHECK(blocks(run.coloring(0).colors) == expected[0]);
      for (std::size_t r = 1; r < expected.size(); ++r) {
        run.step();
        CHECK(blocks(run.coloring(0).colors) == expected[r]);
      }
    }
  }
}

TEST_CASE("t = 1 with the global set is k-FWL") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Graph g = random_graph(7, 0.35, seed);
    const auto fwl = refine(AlgorithmSpec::kfwl(2), g);
    const auto plus = refine(AlgorithmSpec::ktfwl_plus(2, 1, EquivariantSetSpec::global(1)), g);
    CHECK(blocks(fwl.coloring.colors) == blocks(plus.coloring.colors));
    const auto exact = exact_rounds(g, 2, 1, EquivariantSetSpec::global(1), fwl.iterations);
    CHECK(exact.back() == blocks(fwl.coloring.colors));
  }
}

TEST_CASE("equivariant set grammar") {
  for (const std::string text : {"global*2", "n2(h=3)", "n2(h=inf)", "prod(open_nbr(2),geodesic)", "union_open",
                                 "spd_shell", "common_nbr*2", "hop_ball(1,2)*2&ball(inf)", "closed_nbr(1)"}) {
    CAPTURE(text);
    const auto es = parse_equivariant_set(text);
    CHECK(parse_equivariant_set(to_string(es)) == es);
  }
  CHECK(to_string(parse_equivariant_set("n2(2)")) == "n2(h=2)");
  CHECK(parse_equivariant_set("prod(closed_nbr(2),closed_nbr(1))&ball(2)") ==
        EquivariantSetSpec::n2(HopLimit::finite(2)));
  CHECK(parse_equivariant_set("global*3").arity() == 3);
  for (const std::string bad : {"", "glob", "global*0", "n2(h=0)", "prod()", "open_nbr(x)", "global*2&ball(",
                                "union_open extra"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_equivariant_set(bad), std::invalid_argument);
  }
}

TEST_CASE("algorithm grammar") {
  for (const std::string text : {"1wl", "kwl(3)", "kfwl(2)", "ktfwl(2,3)", "ktfwl+(2,2,n2(h=1))", "n2fwl(h=2)",
                                 "n2fwl(h=inf)", "kfwl(2);cap=7"}) {
    CAPTURE(text);
    const auto spec = parse_algorithm(text);
    CHECK(to_string(spec) == text);
    CHECK(parse_algorithm(to_string(spec)) == spec);
  }
  CHECK(parse_algorithm("n2fwl(1)") == AlgorithmSpec::n2fwl(HopLimit::finite(1)));
  CHECK(parse_algorithm("kfwl(2);cap=7").effective_cap(10) == 7);
  CHECK(parse_algorithm("kfwl(2)").effective_cap(10) == 202);
  for (const std::string bad : {"kfwl(1)", "kwl(0)", "ktfwl(2,0)", "n2fwl(h=0)", "ktfwl+(2,2,closed_nbr(3))",
                                "2wl", "kfwl(2);cap=", "kfwl(2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_algorithm(bad), std::invalid_argument);
  }
}
