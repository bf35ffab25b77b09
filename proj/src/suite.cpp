#include "wlkit/suite.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "wlkit/generators.hpp"
#include "wlkit/graph_io.hpp"
#include "wlkit/ktfwl.hpp"
#include "wlkit/oracles.hpp"

namespace wlkit {

namespace {

using Kind = Verdict::Kind;

std::string describe(const Verdict& v) { return to_string(v.kind) + "@" + std::to_string(v.iteration); }

Check verdict_check(std::string name, Kind expected, const Verdict& got) {
  return {std::move(name), to_string(expected), describe(got), got.kind == expected};
}

Check count_check(std::string name, std::size_t good, std::size_t total) {
  const std::string expected = std::to_string(total) + "/" + std::to_string(total);
  return {std::move(name), expected, std::to_string(good) + "/" + std::to_string(total), good == total && total > 0};
}

// Partition as first-occurrence class labels, comparable across interners.
std::vector<std::uint32_t> partition_of(const TupleColoring& c) {
  std::unordered_map<ColorId, std::uint32_t> label;
  std::vector<std::uint32_t> out;
  out.reserve(c.colors.size());
  for (ColorId id : c.colors) out.push_back(label.emplace(id, static_cast<std::uint32_t>(label.size())).first->second);
  return out;
}

std::mt19937_64 seeded(const SuiteOptions& o, std::uint64_t stream) { return std::mt19937_64(o.seed * 1000003ULL + stream); }

RefineOptions refine_options(const SuiteOptions& o) { return {o.jobs, o.fault}; }

// ---------------------------------------------------------------------------

void baseline(BatteryReport& r, const SuiteOptions& o) {
  const Graph c6 = cycle_graph(6);
  const Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  r.checks.push_back(verdict_check("1wl C6 vs 2C3", Kind::Equivalent,
                                   joint_distinguish(AlgorithmSpec::one_wl(), c6, two_c3, refine_options(o))));
  r.checks.push_back(verdict_check("kfwl(2) C6 vs 2C3", Kind::Distinguished,
                                   joint_distinguish(AlgorithmSpec::kfwl(2), c6, two_c3, refine_options(o))));
}

void srg(BatteryReport& r, const SuiteOptions& o) {
  const auto pair = srg_pair();
  r.checks.push_back(verdict_check("kfwl(2) Shrikhande vs Rook", Kind::Equivalent,
                                   joint_distinguish(AlgorithmSpec::kfwl(2), pair.shrikhande, pair.rook,
                                                     refine_options(o))));
  r.checks.push_back(verdict_check("n2fwl(h=1) Shrikhande vs Rook", Kind::Distinguished,
                                   joint_distinguish(AlgorithmSpec::n2fwl(HopLimit::finite(1)), pair.shrikhande,
                                                     pair.rook, refine_options(o))));
}

void cfi(BatteryReport& r, const SuiteOptions& o) {
  const auto three = cfi_pair(3);
  const auto two = cfi_pair(2);
  r.summary["cfi3_nodes"] = three.g_side.node_count();
  r.checks.push_back(verdict_check("ktfwl(2,1) on cfi(3)", Kind::Equivalent,
                                   joint_distinguish(AlgorithmSpec::ktfwl(2, 1), three.g_side, three.h_side,
                                                     refine_options(o))));
  r.checks.push_back(verdict_check("ktfwl(2,2) on cfi(3)", Kind::Distinguished,
                                   joint_distinguish(AlgorithmSpec::ktfwl(2, 2), three.g_side, three.h_side,
                                                     refine_options(o))));
  r.checks.push_back(verdict_check("ktfwl(2,1) on cfi(2)", Kind::Distinguished,
                                   joint_distinguish(AlgorithmSpec::ktfwl(2, 1), two.g_side, two.h_side,
                                                     refine_options(o))));
}

void solvability(BatteryReport& r, const SuiteOptions& o) {
  std::vector<Graph> graphs = all_nonisomorphic_graphs(6);
  r.checks.push_back({"isomorphism classes on 6 nodes", "156", std::to_string(graphs.size()), graphs.size() == 156});
  // Relabelled copies give the battery isomorphic pairs as well.
  auto rng = seeded(o, 4);
  const std::size_t classes = graphs.size();
  for (std::size_t i = 0; i < classes; i += 6) {
    graphs.push_back(apply_permutation(graphs[i], random_permutation(6, rng)));
  }

  const auto spec = AlgorithmSpec::ktfwl(2, 4);
  const auto verdicts = pairwise_verdicts(spec, graphs, refine_options(o));
  std::size_t pairs = 0;
  std::size_t agree = 0;
  std::size_t isomorphic = 0;
  nlohmann::json mismatches = nlohmann::json::array();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t j = i + 1; j < graphs.size(); ++j) {
      const bool iso = are_isomorphic(graphs[i], graphs[j]);
      const auto& v = verdicts[i][j];
      const bool ok = iso ? v.kind == Kind::Equivalent : v.kind == Kind::Distinguished;
      ++pairs;
      isomorphic += iso ? 1 : 0;
      if (ok) {
        ++agree;
      } else if (mismatches.size() < 10) {
        mismatches.push_back({{"i", i}, {"j", j}, {"isomorphic", iso}, {"verdict", describe(v)}});
      }
    }
  }
  r.summary["graphs"] = graphs.size();
  r.summary["pairs"] = pairs;
  r.summary["isomorphic_pairs"] = isomorphic;
  r.summary["mismatches"] = std::move(mismatches);
  r.checks.push_back(count_check("ktfwl(2,4) agrees with isomorphism oracle", agree, pairs));
}

void two_one_equivalence(BatteryReport& r, const SuiteOptions& o) {
  std::vector<std::pair<Graph, Graph>> pairs;
  auto rng = seeded(o, 5);
  for (int i = 0; i < 200; ++i) {
    Graph g = random_graph(12, 0.3, rng());
    Graph h = random_graph(12, 0.3, rng());
    pairs.emplace_back(std::move(g), std::move(h));
  }
  for (int i = 0; i < 50; ++i) {
    Graph g = random_graph(12, 0.3, rng());
    Graph h = apply_permutation(g, random_permutation(12, rng));
    pairs.emplace_back(std::move(g), std::move(h));
  }
  for (int i = 0; i < 50; ++i) {
    Graph g = random_graph(12, 0.3, rng());
    Graph h = edge_swapped(g, 3, rng);
    pairs.emplace_back(std::move(g), std::move(h));
  }
  const auto srgs = srg_pair();
  const auto cfi2 = cfi_pair(2);
  const auto cfi3 = cfi_pair(3);
  pairs.emplace_back(srgs.shrikhande, srgs.rook);
  pairs.emplace_back(cfi2.g_side, cfi2.h_side);
  pairs.emplace_back(cfi3.g_side, cfi3.h_side);
  pairs.emplace_back(csl_graph(41, 2), csl_graph(41, 3));
  pairs.emplace_back(cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3)));

  std::size_t same = 0;
  std::size_t distinguished = 0;
  nlohmann::json differences = nlohmann::json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto a = joint_distinguish(AlgorithmSpec::ktfwl(2, 1), pairs[i].first, pairs[i].second, refine_options(o));
    const auto b = joint_distinguish(AlgorithmSpec::kfwl(2), pairs[i].first, pairs[i].second, refine_options(o));
    if (a == b) {
      ++same;
    } else if (differences.size() < 10) {
      differences.push_back({{"pair", i}, {"ktfwl(2,1)", describe(a)}, {"kfwl(2)", describe(b)}});
    }
    distinguished += b.kind == Kind::Distinguished ? 1 : 0;
  }
  r.summary["pairs"] = pairs.size();
  r.summary["distinguished_by_kfwl2"] = distinguished;
  r.summary["differences"] = std::move(differences);
  r.checks.push_back(count_check("ktfwl(2,1) verdicts equal kfwl(2) verdicts", same, pairs.size()));
}

void counting_power(BatteryReport& r, const SuiteOptions& o) {
  const SubstructureKind kinds[] = {SubstructureKind::Cycle6, SubstructureKind::Clique4, SubstructureKind::Path4};
  auto rng = seeded(o, 6);
  std::size_t collected = 0;
  std::size_t separated = 0;
  std::size_t tried = 0;
  nlohmann::json misses = nlohmann::json::array();
  nlohmann::json by_kind = nlohmann::json::object();
  const auto spec = AlgorithmSpec::n2fwl(HopLimit::infinite());
  while (collected < 60 && tried < 2000) {
    ++tried;
    const std::size_t n = 10 + uniform_below(rng, 9);  // 10..18
    const double p = 0.2 + 0.05 * static_cast<double>(uniform_below(rng, 5));
    Graph g = random_graph(n, p, rng());
    // Half the pairs share the degree sequence, which makes them harder.
    Graph h = (tried % 2 == 0) ? edge_swapped(g, 2, rng) : random_graph(n, p, rng());
    std::vector<std::string> differing;
    for (auto kind : kinds) {
      if (count_substructure(g, kind).total != count_substructure(h, kind).total) differing.push_back(to_string(kind));
    }
    if (differing.empty()) continue;
    ++collected;
    for (const auto& name : differing) by_kind[name] = by_kind.value(name, 0) + 1;
    const auto v = joint_distinguish(spec, g, h, refine_options(o));
    if (v.kind == Kind::Distinguished) {
      ++separated;
    } else if (misses.size() < 10) {
      misses.push_back({{"g", to_graph6(g)}, {"h", to_graph6(h)}, {"verdict", describe(v)}});
    }
  }
  r.summary["pairs_tried"] = tried;
  r.summary["pairs_with_count_difference"] = collected;
  r.summary["differing_counts"] = std::move(by_kind);
  r.summary["misses"] = std::move(misses);
  r.checks.push_back({"pairs with differing counts", ">= 50", std::to_string(collected), collected >= 50});
  r.checks.push_back(count_check("n2fwl(h=inf) distinguishes every such pair", separated, collected));
}

void clique_contrast(BatteryReport& r, const SuiteOptions& o) {
  const auto pair = srg_pair();
  const auto rook = count_substructure(pair.rook, SubstructureKind::Clique4).total;
  const auto shrikhande = count_substructure(pair.shrikhande, SubstructureKind::Clique4).total;
  r.checks.push_back({"clique4 count in Rook", "> 0", std::to_string(rook), rook > 0});
  r.checks.push_back({"clique4 count in Shrikhande", "0", std::to_string(shrikhande), shrikhande == 0});
  r.checks.push_back(verdict_check("kfwl(2) Shrikhande vs Rook", Kind::Equivalent,
                                   joint_distinguish(AlgorithmSpec::kfwl(2), pair.shrikhande, pair.rook,
                                                     refine_options(o))));
}

// ---------------------------------------------------------------------------
// Properties

std::vector<AlgorithmSpec> property_specs() {
  std::vector<AlgorithmSpec> out;
  for (const char* text : {"1wl", "kwl(2)", "kwl(3)", "kfwl(2)", "kfwl(3)", "ktfwl(2,1)", "ktfwl(2,2)", "ktfwl(3,1)",
                           "ktfwl+(2,1,union_open)", "ktfwl+(2,1,spd_shell)", "ktfwl+(2,2,common_nbr*2)",
                           "ktfwl+(2,2,prod(open_nbr(2),geodesic))", "ktfwl+(2,2,hop_ball(1,2)*2&ball(2))",
                           "ktfwl+(3,2,prod(closed_nbr(3),union_closed))", "n2fwl(h=1)", "n2fwl(h=2)",
                           "n2fwl(h=inf)"}) {
    out.push_back(parse_algorithm(text));
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> property_sets() {
  // (ES text, tuple length k)
  return {{"global*1", 2},          {"global*2", 2},           {"closed_nbr(1)", 2},  {"open_nbr(2)*2", 2},
          {"hop_ball(1,2)", 2},     {"union_open", 3},         {"union_closed*2", 2}, {"common_nbr", 2},
          {"spd_shell", 2},         {"geodesic*2", 2},         {"n2(h=1)", 2},        {"n2(h=inf)", 2},
          {"prod(open_nbr(2),geodesic)", 2}, {"common_nbr*2&ball(2)", 2}, {"prod(closed_nbr(3),hop_ball(1,inf))", 3}};
}

void properties(BatteryReport& r, const SuiteOptions& o) {
  const auto specs = property_specs();
  auto rng = seeded(o, 8);

  // Permutation invariance of histograms.
  {
    std::size_t good = 0;
    std::size_t total = 0;
    for (const auto& spec : specs) {
      for (int trial = 0; trial < 3; ++trial) {
        const std::size_t n = spec.arity() >= 3 ? 6 : 8;
        const Graph g = random_graph(n, 0.4, rng());
        const Graph h = apply_permutation(g, random_permutation(n, rng));
        ++total;
        good += joint_distinguish(spec, g, h, refine_options(o)).kind == Kind::Equivalent ? 1 : 0;
      }
    }
    r.checks.push_back(count_check("histograms invariant under relabelling", good, total));
  }

  // Each round refines the previous partition.
  {
    std::size_t good = 0;
    std::size_t total = 0;
    for (const auto& spec : specs) {
      const Graph g = random_graph(spec.arity() >= 3 ? 6 : 9, 0.35, rng());
      JointRefinement run(spec, {&g}, refine_options(o));
      std::size_t previous_classes = run.coloring(0).distinct_count();
      while (!run.converged(0) && run.iteration() < run.cap()) {
        const auto before = partition_of(run.coloring(0));
        run.step();
        const auto after = partition_of(run.coloring(0));
        // Tuples sharing a new class must have shared an old class.
        std::unordered_map<std::uint32_t, std::uint32_t> parent;
        bool refines = true;
        for (std::size_t i = 0; i < after.size(); ++i) {
          refines = refines && parent.emplace(after[i], before[i]).first->second == before[i];
        }
        const std::size_t classes = run.coloring(0).distinct_count();
        ++total;
        good += (refines && classes >= previous_classes) ? 1 : 0;
        previous_classes = classes;
      }
    }
    r.checks.push_back(count_check("every round refines the partition", good, total));
  }

  // Equivariant sets commute with relabelling.
  {
    std::size_t good = 0;
    std::size_t total = 0;
    for (const auto& [text, k] : property_sets()) {
      const auto es = parse_equivariant_set(text);
      for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 8;
        const Graph g = random_graph(n, trial % 2 ? 0.25 : 0.45, rng());
        const Permutation perm = random_permutation(n, rng);
        const Graph h = apply_permutation(g, perm);
        std::vector<Node> v(k);
        std::vector<Node> moved(k);
        for (std::size_t i = 0; i < k; ++i) {
          v[i] = static_cast<Node>(uniform_below(rng, n));
          moved[i] = perm(v[i]);
        }
        auto image = equivariant_set(es, g, v);
        for (auto& w : image) {
          for (auto& x : w) x = perm(x);
        }
        std::ranges::sort(image);
        ++total;
        good += image == equivariant_set(es, h, moved) ? 1 : 0;
      }
    }
    r.checks.push_back(count_check("equivariant sets commute with relabelling", good, total));
  }

  // Neighborhood tuple length law and positional consistency.
  {
    std::size_t good = 0;
    std::size_t total = 0;
    for (std::size_t k = 1; k <= 4; ++k) {
      for (std::size_t t = 1; t <= 4; ++t) {
        const NeighborhoodPattern pattern(k, t);
        std::vector<Node> v(k);
        std::vector<Node> w(t);
        for (auto& x : v) x = static_cast<Node>(uniform_below(rng, 10));
        for (auto& x : w) x = static_cast<Node>(uniform_below(rng, 10));
        const auto tuple = neighborhood_tuple(v, w);
        bool ok = tuple.size() == neighborhood_tuple_length(k, t) && pattern.length() == tuple.size() &&
                  tuple.front() == v;
        for (std::size_t e = 0; ok && e < tuple.size(); ++e) {
          const auto src = pattern.sources(e);
          for (std::size_t j = 0; j < k; ++j) ok = ok && tuple[e][j] == (src[j] < k ? v[src[j]] : w[src[j] - k]);
        }
        ++total;
        good += ok ? 1 : 0;
      }
    }
    r.checks.push_back(count_check("neighborhood tuple length law for 1 <= k,t <= 4", good, total));
  }

  // t = 1 collapses to k-FWL.
  {
    std::size_t good = 0;
    std::size_t total = 0;
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t k = trial < 8 ? 2 : 3;
      const Graph g = random_graph(k == 2 ? 10 : 6, 0.3, rng());
      const AlgorithmSpec variants[] = {AlgorithmSpec::kfwl(static_cast<std::uint32_t>(k)),
                                        AlgorithmSpec::ktfwl(static_cast<std::uint32_t>(k), 1),
                                        AlgorithmSpec::ktfwl_plus(static_cast<std::uint32_t>(k), 1,
                                                                  EquivariantSetSpec::global(1))};
      std::vector<std::unique_ptr<JointRefinement>> runs;
      for (const auto& spec : variants) {
        runs.push_back(std::make_unique<JointRefinement>(spec, std::vector<const Graph*>{&g}, refine_options(o)));
      }
      bool ok = true;
      for (int round = 0; round < 12 && ok; ++round) {
        const auto reference = partition_of(runs[0]->coloring(0));
        for (const auto& run : runs) ok = ok && partition_of(run->coloring(0)) == reference;
        for (auto& run : runs) run->step();
      }
      ++total;
      good += ok ? 1 : 0;
    }
    const std::vector<Code> members = {{3, 1}, {2}, {3, 1}, {0, 7}};
    std::vector<KeyedCode> keyed;
    for (Node i = 0; i < members.size(); ++i) keyed.push_back({{i}, members[i]});
    ++total;
    good += hierarchical_encode(keyed, 1) == multiset_encode(members) ? 1 : 0;
    r.checks.push_back(count_check("t = 1 hierarchy collapses to k-FWL", good, total));
  }
}

struct BatteryDef {
  const char* name;
  double limit_seconds;
  void (*run)(BatteryReport&, const SuiteOptions&);
};

const BatteryDef kBatteries[kBatteryCount] = {
    {"baseline", 1, baseline},
    {"srg_separation", 30, srg},
    {"cfi_hierarchy", 600, cfi},
    {"solvability_n6", 1800, solvability},
    {"two_one_equals_two_fwl", 300, two_one_equivalence},
    {"counting_power", 600, counting_power},
    {"clique4_contrast", 60, clique_contrast},
    {"properties", 300, properties},
};

}  // namespace

bool BatteryReport::passed() const {
  return !checks.empty() && std::ranges::all_of(checks, [](const Check& c) { return c.ok; });
}

bool SuiteReport::passed() const {
  return std::ranges::all_of(batteries, [](const BatteryReport& b) { return b.passed(); });
}

nlohmann::json SuiteReport::verdicts() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& b : batteries) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : b.checks) {
      checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
    }
    list.push_back({{"id", b.id}, {"name", b.name}, {"passed", b.passed()}, {"checks", std::move(checks)},
                    {"summary", b.summary}});
  }
  return list;
}

nlohmann::json SuiteReport::timings() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& b : batteries) {
    list.push_back({{"id", b.id}, {"millis", b.millis}, {"limit_seconds", b.limit_seconds},
                    {"within_limit", b.within_limit()}});
  }
  return list;
}

nlohmann::json SuiteReport::to_json() const {
  return {{"tool", kToolVersion},
          {"invocation", {{"command", "suite"}, {"level", "desk"}, {"seed", options.seed},
                          {"inject", to_string(options.fault)}}},
          {"passed", passed()},
          {"batteries", verdicts()},
          {"timings", timings()}};
}

std::string battery_name(int id) {
  if (id < 1 || id > kBatteryCount) throw std::invalid_argument("no battery " + std::to_string(id));
  return kBatteries[id - 1].name;
}

BatteryReport run_battery(int id, const SuiteOptions& options) {
  battery_name(id);  // validates id
  const auto& def = kBatteries[id - 1];
  BatteryReport report;
  report.id = id;
  report.name = def.name;
  report.limit_seconds = def.limit_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    def.run(report, options);
  } catch (const std::exception& e) {
    report.checks.push_back({"completed without error", "no exception", e.what(), false});
  }
  report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SuiteReport run_suite(const SuiteOptions& options, const std::vector<int>& only) {
  SuiteReport report;
  report.options = options;
  for (int id = 1; id <= kBatteryCount; ++id) {
    if (!only.empty() && std::ranges::find(only, id) == only.end()) continue;
    report.batteries.push_back(run_battery(id, options));
  }
  return report;
}

Fault parse_fault(const std::string& name) {
  if (name == "none") return Fault::None;
  if (name == "drop_aggregation") return Fault::DropAggregation;
  if (name == "break_grouping") return Fault::BreakGrouping;
  throw std::invalid_argument("unknown fault '" + name + "'");
}

std::string to_string(Fault fault) {
  switch (fault) {
    case Fault::None:
      return "none";
    case Fault::DropAggregation:
      return "drop_aggregation";
    case Fault::BreakGrouping:
      return "break_grouping";
  }
  return "?";
}

}  // namespace wlkit
