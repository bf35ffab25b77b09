#include "wlkit/oracles.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace wlkit {

namespace {

// Plain color refinement on the disjoint union of two graphs, via ordered
// maps. Kept separate from the engine so it can serve as a cross-check.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> union_colors(const Graph& g, const Graph& h) {
  const Graph* graphs[2] = {&g, &h};
  std::vector<std::uint32_t> color[2];
  std::map<std::uint32_t, std::uint32_t> start;
  for (int s = 0; s < 2; ++s) {
    for (Node v = 0; v < graphs[s]->node_count(); ++v) {
      start.emplace(graphs[s]->color(v), static_cast<std::uint32_t>(start.size()));
      color[s].push_back(start.at(graphs[s]->color(v)));
    }
  }
  std::size_t classes = start.size();
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> names;
    std::vector<std::uint32_t> next[2];
    for (int s = 0; s < 2; ++s) {
      for (Node v = 0; v < graphs[s]->node_count(); ++v) {
        std::vector<std::uint32_t> sig{color[s][v]};
        for (Node u : graphs[s]->neighbors(v)) sig.push_back(color[s][u]);
        std::sort(sig.begin() + 1, sig.end());
        auto [it, fresh] = names.emplace(std::move(sig), static_cast<std::uint32_t>(names.size()));
        next[s].push_back(it->second);
      }
    }
    color[0] = std::move(next[0]);
    color[1] = std::move(next[1]);
    if (names.size() == classes) break;
    classes = names.size();
  }
  return {color[0], color[1]};
}

class IsoSearch {
 public:
  IsoSearch(const Graph& g, const Graph& h, std::vector<std::uint32_t> cg, std::vector<std::uint32_t> ch)
      : g_(g), h_(h), cg_(std::move(cg)), ch_(std::move(ch)), map_(g.node_count(), kUnmapped),
        used_(h.node_count(), false) {
    // Most constrained first: small color classes, then BFS-ish adjacency.
    std::map<std::uint32_t, std::size_t> class_size;
    for (auto c : cg_) ++class_size[c];
    std::vector<bool> placed(g.node_count(), false);
    while (order_.size() < g.node_count()) {
      Node best = kUnmapped;
      std::size_t best_links = 0;
      for (Node v = 0; v < g.node_count(); ++v) {
        if (placed[v]) continue;
        std::size_t links = 0;
        for (Node u : g.neighbors(v)) links += placed[u] ? 1 : 0;
        if (best == kUnmapped || links > best_links ||
            (links == best_links && class_size[cg_[v]] < class_size[cg_[best]])) {
          best = v;
          best_links = links;
        }
      }
      placed[best] = true;
      order_.push_back(best);
    }
  }

  bool run() { return extend(0); }

 private:
  static constexpr Node kUnmapped = ~Node{0};

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const Node v = order_[depth];
    for (Node x = 0; x < h_.node_count(); ++x) {
      if (used_[x] || ch_[x] != cg_[v]) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const Node u = order_[d];
        ok = g_.adjacent(u, v) == h_.adjacent(map_[u], x);
      }
      if (!ok) continue;
      map_[v] = x;
      used_[x] = true;
      if (extend(depth + 1)) return true;
      used_[x] = false;
      map_[v] = kUnmapped;
    }
    return false;
  }

  const Graph& g_;
  const Graph& h_;
  std::vector<std::uint32_t> cg_;
  std::vector<std::uint32_t> ch_;
  std::vector<Node> order_;
  std::vector<Node> map_;
  std::vector<bool> used_;
};

// Counts injective maps pattern -> target preserving pattern edges.
class EmbeddingCounter {
 public:
  EmbeddingCounter(const Graph& pattern, const Graph& target)
      : p_(pattern), g_(target), map_(pattern.node_count()), used_(target.node_count(), false),
        hits_(target.node_count(), 0) {
    // Each pattern node after the first has an earlier neighbor (patterns are connected).
    std::vector<bool> placed(p_.node_count(), false);
    order_.push_back(0);
    placed[0] = true;
    while (order_.size() < p_.node_count()) {
      for (Node v = 0; v < p_.node_count(); ++v) {
        if (placed[v]) continue;
        if (std::ranges::any_of(p_.neighbors(v), [&](Node u) { return placed[u]; })) {
          placed[v] = true;
          order_.push_back(v);
          break;
        }
      }
    }
  }

  void run() { extend(0); }
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint64_t>& hits() const { return hits_; }

 private:
  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      ++total_;
      for (Node p = 0; p < p_.node_count(); ++p) ++hits_[map_[p]];
      return;
    }
    const Node v = order_[depth];
    auto try_node = [&](Node x) {
      if (used_[x]) return;
      for (std::size_t d = 0; d < depth; ++d) {
        const Node u = order_[d];
        if (p_.adjacent(u, v) && !g_.adjacent(map_[u], x)) return;
      }
      map_[v] = x;
      used_[x] = true;
      extend(depth + 1);
      used_[x] = false;
    };
    if (depth == 0) {
      for (Node x = 0; x < g_.node_count(); ++x) try_node(x);
      return;
    }
    // Candidates: neighbors of the image of some earlier pattern neighbor.
    Node anchor = order_[0];
    for (std::size_t d = 0; d < depth; ++d) {
      if (p_.adjacent(order_[d], v)) {
        anchor = order_[d];
        break;
      }
    }
    for (Node x : g_.neighbors(map_[anchor])) try_node(x);
  }

  const Graph& p_;
  const Graph& g_;
  std::vector<Node> order_;
  std::vector<Node> map_;
  std::vector<bool> used_;
  std::vector<std::uint64_t> hits_;
  std::uint64_t total_ = 0;
};

Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
  return Graph(n, std::vector<Edge>(edges));
}

constexpr std::pair<SubstructureKind, std::string_view> kNames[] = {
    {SubstructureKind::Cycle3, "cycle3"},
    {SubstructureKind::Cycle4, "cycle4"},
    {SubstructureKind::Cycle5, "cycle5"},
    {SubstructureKind::Cycle6, "cycle6"},
    {SubstructureKind::TailedTriangle, "tailed_triangle"},
    {SubstructureKind::ChordalCycle, "chordal_cycle"},
    {SubstructureKind::Clique4, "clique4"},
    {SubstructureKind::Path4, "path4"},
    {SubstructureKind::TriangleRectangle, "triangle_rectangle"},
};

}  // namespace

bool are_isomorphic(const Graph& g, const Graph& h) {
  if (g.node_count() != h.node_count() || g.edge_count() != h.edge_count()) return false;
  auto [cg, ch] = union_colors(g, h);
  auto sg = cg;
  auto sh = ch;
  std::ranges::sort(sg);
  std::ranges::sort(sh);
  if (sg != sh) return false;
  return IsoSearch(g, h, std::move(cg), std::move(ch)).run();
}

std::string to_string(SubstructureKind kind) {
  for (auto [k, name] : kNames) {
    if (k == kind) return std::string(name);
  }
  throw std::logic_error("unknown substructure kind");
}

SubstructureKind parse_substructure_kind(std::string_view name) {
  for (auto [k, n] : kNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown substructure '" + std::string(name) + "'");
}

const std::vector<SubstructureKind>& all_substructure_kinds() {
  static const std::vector<SubstructureKind> kinds = [] {
    std::vector<SubstructureKind> out;
    for (auto [k, name] : kNames) out.push_back(k);
    return out;
  }();
  return kinds;
}

Graph pattern_graph(SubstructureKind kind) {
  switch (kind) {
    case SubstructureKind::Cycle3:
      return from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    case SubstructureKind::Cycle4:
      return from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    case SubstructureKind::Cycle5:
      return from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    case SubstructureKind::Cycle6:
      return from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    case SubstructureKind::TailedTriangle:
      return from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    case SubstructureKind::ChordalCycle:
      return from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    case SubstructureKind::Clique4:
      return from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    case SubstructureKind::Path4:
      return from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    case SubstructureKind::TriangleRectangle:
      // triangle a,b,c and 4-cycle a,b,d,e sharing edge ab
      return from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {1, 3}, {3, 4}, {4, 0}});
  }
  throw std::logic_error("unknown substructure kind");
}

SubstructureCount count_substructure(const Graph& g, SubstructureKind kind) {
  if (g.node_count() > kCountBudget) {
    throw std::length_error("count_substructure: graph exceeds the " + std::to_string(kCountBudget) + "-node budget");
  }
  const Graph pattern = pattern_graph(kind);
  EmbeddingCounter self(pattern, pattern);
  self.run();
  const std::uint64_t automorphisms = self.total();

  EmbeddingCounter counter(pattern, g);
  counter.run();
  SubstructureCount out;
  out.total = counter.total() / automorphisms;
  for (auto hits : counter.hits()) out.per_node.push_back(hits / automorphisms);
  return out;
}

std::optional<std::vector<Node>> find_distance_two_clique(const Graph& g, std::size_t size) {
  if (size < 2) throw std::invalid_argument("distance-two-clique size must be >= 2");
  const auto& d = g.distances();
  std::vector<Node> chosen;
  auto extend = [&](auto&& self, Node from) -> bool {
    if (chosen.size() == size) return true;
    for (Node v = from; v < g.node_count(); ++v) {
      if (!std::ranges::all_of(chosen, [&](Node u) { return d.finite(u, v) && d.at(u, v) == 2; })) continue;
      chosen.push_back(v);
      if (self(self, v + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(extend, 0)) return chosen;
  return std::nullopt;
}

std::optional<std::vector<Node>> find_distance_two_transversal(const Graph& g,
                                                               std::span<const std::vector<Node>> groups) {
  const auto& d = g.distances();
  std::vector<Node> chosen;
  auto extend = [&](auto&& self) -> bool {
    if (chosen.size() == groups.size()) return true;
    for (Node v : groups[chosen.size()]) {
      if (v >= g.node_count()) throw std::invalid_argument("distance-two transversal: node out of range");
      if (!std::ranges::all_of(chosen, [&](Node u) { return d.finite(u, v) && d.at(u, v) == 2; })) continue;
      chosen.push_back(v);
      if (self(self)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(extend)) return chosen;
  return std::nullopt;
}

bool has_distance_two_clique(const Graph& g, std::size_t size) {
  return find_distance_two_clique(g, size).has_value();
}

}  // namespace wlkit
