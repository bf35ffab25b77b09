#include "wlkit/ktfwl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <stdexcept>

namespace wlkit {

namespace {

std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  std::size_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Index-ascending m-subsets of {0..n-1}, in lexicographic order.
std::vector<std::vector<std::uint32_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = static_cast<std::uint32_t>(i);
  if (m > n) return out;
  while (true) {
    out.push_back(pick);
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<Node> intersect(const std::vector<Node>& a, const std::vector<Node>& b) {
  std::vector<Node> out;
  std::ranges::set_intersection(a, b, std::back_inserter(out));
  return out;
}

std::vector<Node> unite(const std::vector<Node>& a, const std::vector<Node>& b) {
  std::vector<Node> out;
  std::ranges::set_union(a, b, std::back_inserter(out));
  return out;
}

std::vector<Node> open_nbrs(const Graph& g, Node v) {
  const auto nbrs = g.neighbors(v);
  return {nbrs.begin(), nbrs.end()};
}

}  // namespace

std::size_t neighborhood_tuple_length(std::size_t k, std::size_t t) {
  std::size_t total = 0;
  for (std::size_t m = 0; m <= std::min(k, t); ++m) total += binomial(k, m) * binomial(t, m);
  return total;
}

NeighborhoodPattern::NeighborhoodPattern(std::size_t k, std::size_t t) : k_(k), t_(t) {
  if (k == 0 || t == 0) throw std::invalid_argument("neighborhood tuples need k >= 1 and t >= 1");
  for (std::size_t m = 0; m <= std::min(k, t); ++m) {
    auto positions = subsets(k, m);
    // Worked example order for k = t = 2: replace position 2 before position 1.
    if (k == 2 && t == 2 && m == 1) std::ranges::reverse(positions);
    const auto picks = subsets(t, m);
    for (const auto& at : positions) {
      for (const auto& from : picks) {
        const std::size_t base = sources_.size();
        for (std::size_t j = 0; j < k; ++j) sources_.push_back(static_cast<std::uint32_t>(j));
        for (std::size_t r = 0; r < m; ++r) sources_[base + at[r]] = static_cast<std::uint32_t>(k + from[r]);
      }
    }
  }
}

std::vector<std::vector<Node>> neighborhood_tuple(std::span<const Node> v, std::span<const Node> w) {
  if (v.empty() || w.empty()) throw std::invalid_argument("neighborhood_tuple: empty tuple");
  const NeighborhoodPattern pattern(v.size(), w.size());
  std::vector<std::vector<Node>> out;
  out.reserve(pattern.length());
  for (std::size_t e = 0; e < pattern.length(); ++e) {
    std::vector<Node> tuple;
    for (auto src : pattern.sources(e)) tuple.push_back(src < v.size() ? v[src] : w[src - v.size()]);
    out.push_back(std::move(tuple));
  }
  return out;
}

// ---------------------------------------------------------------------------

void EquivariantSetSpec::validate(std::size_t k) const {
  if (coordinates.empty()) throw std::invalid_argument("equivariant set needs at least one coordinate");
  for (const auto& base : coordinates) {
    switch (base.kind) {
      case BaseSetKind::ClosedNbr:
      case BaseSetKind::OpenNbr:
      case BaseSetKind::HopBall:
        if (base.coordinate < 1 || base.coordinate > k) {
          throw std::invalid_argument("base set refers to coordinate " + std::to_string(base.coordinate) +
                                      " of a " + std::to_string(k) + "-tuple");
        }
        break;
      case BaseSetKind::CommonNbr:
      case BaseSetKind::SpdShell:
      case BaseSetKind::GeodesicSet:
        if (k < 2) throw std::invalid_argument("pairwise base sets need k >= 2");
        break;
      default:
        break;
    }
  }
  if (ball_filter && !ball_filter->is_infinite() && ball_filter->hops() < 1) {
    throw std::invalid_argument("ball filter radius must be >= 1");
  }
}

EquivariantSetSpec EquivariantSetSpec::global(std::size_t t) {
  return {std::vector<BaseSet>(t, BaseSet::global()), std::nullopt};
}

EquivariantSetSpec EquivariantSetSpec::n2(HopLimit h) {
  return {{BaseSet::closed_nbr(2), BaseSet::closed_nbr(1)}, h};
}

std::vector<Node> evaluate_base_set(const BaseSet& base, const Graph& g, std::span<const Node> v) {
  const auto need = [&](std::size_t count) {
    if (v.size() < count) throw std::invalid_argument("base set needs a longer tuple");
  };
  const auto coordinate = [&]() -> Node {
    if (base.coordinate < 1 || base.coordinate > v.size()) {
      throw std::invalid_argument("base set coordinate out of range");
    }
    return v[base.coordinate - 1];
  };
  for (Node x : v) {
    if (x >= g.node_count()) throw std::invalid_argument("tuple entry out of range");
  }

  switch (base.kind) {
    case BaseSetKind::Global: {
      std::vector<Node> all(g.node_count());
      for (Node u = 0; u < all.size(); ++u) all[u] = u;
      return all;
    }
    case BaseSetKind::ClosedNbr:
      return neighbors_within(g, coordinate(), 1u);
    case BaseSetKind::OpenNbr:
      return open_nbrs(g, coordinate());
    case BaseSetKind::HopBall:
      return neighbors_within(g, coordinate(), base.hops);
    case BaseSetKind::UnionOpenNbrs:
    case BaseSetKind::UnionClosedNbrs: {
      std::vector<Node> out;
      for (Node x : v) {
        out = unite(out, base.kind == BaseSetKind::UnionOpenNbrs ? open_nbrs(g, x) : neighbors_within(g, x, 1u));
      }
      return out;
    }
    case BaseSetKind::CommonNbr:
      need(2);
      return intersect(open_nbrs(g, v[0]), open_nbrs(g, v[1]));
    case BaseSetKind::SpdShell: {
      need(2);
      const auto& d = g.distances();
      if (!d.finite(v[0], v[1])) return {};
      return intersect(kth_hop(g, v[0], d.at(v[0], v[1])), open_nbrs(g, v[1]));
    }
    case BaseSetKind::GeodesicSet: {
      need(2);
      const auto& d = g.distances();
      if (!d.finite(v[0], v[1])) return {};
      const auto target = d.at(v[0], v[1]);
      std::vector<Node> out;
      for (Node u = 0; u < g.node_count(); ++u) {
        if (d.finite(v[0], u) && d.finite(u, v[1]) && d.at(v[0], u) + d.at(u, v[1]) == target) out.push_back(u);
      }
      return out;
    }
  }
  throw std::logic_error("unknown base set kind");
}

std::vector<std::vector<Node>> coordinate_sets(const EquivariantSetSpec& spec, const Graph& g,
                                               std::span<const Node> v) {
  spec.validate(v.size());
  std::vector<std::vector<Node>> sets;
  sets.reserve(spec.arity());
  for (const auto& base : spec.coordinates) sets.push_back(evaluate_base_set(base, g, v));
  if (spec.ball_filter && !spec.ball_filter->is_infinite()) {
    std::vector<Node> ball = neighbors_within(g, v[0], *spec.ball_filter);
    for (std::size_t i = 1; i < v.size(); ++i) ball = intersect(ball, neighbors_within(g, v[i], *spec.ball_filter));
    for (auto& s : sets) s = intersect(s, ball);
  }
  return sets;
}

std::vector<std::vector<Node>> equivariant_set(const EquivariantSetSpec& spec, const Graph& g,
                                               std::span<const Node> v) {
  const auto sets = coordinate_sets(spec, g, v);
  std::vector<std::vector<Node>> out;
  if (std::ranges::any_of(sets, [](const auto& s) { return s.empty(); })) return out;
  std::vector<std::size_t> at(sets.size(), 0);
  // Odometer with the last coordinate fastest gives lexicographic order.
  while (true) {
    std::vector<Node> w(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) w[i] = sets[i][at[i]];
    out.push_back(std::move(w));
    std::size_t i = sets.size();
    while (i > 0 && ++at[i - 1] == sets[i - 1].size()) at[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::vector<std::array<Node, 2>> n2_neighborhood(const Graph& g, Node v1, Node v2, HopLimit h) {
  const Node v[2] = {v1, v2};
  std::vector<std::array<Node, 2>> out;
  for (const auto& w : equivariant_set(EquivariantSetSpec::n2(h), g, v)) out.push_back({w[0], w[1]});
  return out;
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

constexpr std::pair<std::string_view, BaseSetKind> kPlainBases[] = {
    {"global", BaseSetKind::Global},
    {"union_open", BaseSetKind::UnionOpenNbrs},
    {"union_closed", BaseSetKind::UnionClosedNbrs},
    {"common_nbr", BaseSetKind::CommonNbr},
    {"spd_shell", BaseSetKind::SpdShell},
    {"geodesic", BaseSetKind::GeodesicSet},
};

class EsParser {
 public:
  explicit EsParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  EquivariantSetSpec parse() {
    EquivariantSetSpec spec;
    if (accept("n2(")) {
      accept("h=");
      spec = EquivariantSetSpec::n2(radius());
      expect(")");
    } else if (accept("prod(")) {
      spec.coordinates.push_back(base());
      while (accept(",")) spec.coordinates.push_back(base());
      expect(")");
    } else {
      const BaseSet b = base();
      std::size_t t = 1;
      if (accept("*")) t = integer();
      if (t == 0) fail("arity must be >= 1");
      spec.coordinates.assign(t, b);
    }
    if (accept("&ball(")) {
      if (spec.ball_filter) fail("ball filter given twice");
      spec.ball_filter = radius();
      expect(")");
    }
    if (pos_ != text_.size()) fail("unexpected trailing text");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("equivariant set '" + text_ + "' at " + std::to_string(pos_) + ": " + why);
  }

  bool accept(std::string_view token) {
    if (std::string_view(text_).substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::uint32_t integer() {
    std::uint32_t value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  HopLimit hop() {
    if (accept("inf")) return HopLimit::infinite();
    return HopLimit::finite(integer());
  }

  // A ball radius for the filter; 0 would keep only the tuple's own nodes.
  HopLimit radius() {
    const HopLimit h = hop();
    if (!h.is_infinite() && h.hops() < 1) fail("ball radius must be >= 1");
    return h;
  }

  BaseSet base() {
    for (auto [name, kind] : kPlainBases) {
      if (accept(name)) return BaseSet::of(kind);
    }
    if (accept("closed_nbr(")) {
      auto i = integer();
      expect(")");
      return BaseSet::closed_nbr(i);
    }
    if (accept("open_nbr(")) {
      auto i = integer();
      expect(")");
      return BaseSet::open_nbr(i);
    }
    if (accept("hop_ball(")) {
      auto i = integer();
      expect(",");
      auto h = hop();
      expect(")");
      return BaseSet::hop_ball(i, h);
    }
    fail("unknown base set");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

std::string base_name(const BaseSet& b) {
  for (auto [name, kind] : kPlainBases) {
    if (kind == b.kind) return std::string(name);
  }
  const auto i = std::to_string(b.coordinate);
  switch (b.kind) {
    case BaseSetKind::ClosedNbr:
      return "closed_nbr(" + i + ")";
    case BaseSetKind::OpenNbr:
      return "open_nbr(" + i + ")";
    case BaseSetKind::HopBall:
      return "hop_ball(" + i + "," + to_string(b.hops) + ")";
    default:
      throw std::logic_error("unknown base set kind");
  }
}

}  // namespace

EquivariantSetSpec parse_equivariant_set(std::string_view text) { return EsParser(text).parse(); }

std::string to_string(HopLimit h) { return h.is_infinite() ? "inf" : std::to_string(h.hops()); }

std::string to_string(const EquivariantSetSpec& spec) {
  if (spec.ball_filter && spec == EquivariantSetSpec::n2(*spec.ball_filter)) {
    return "n2(h=" + to_string(*spec.ball_filter) + ")";
  }
  std::string out;
  const auto& c = spec.coordinates;
  if (c.empty()) throw std::invalid_argument("empty equivariant set");
  if (std::ranges::all_of(c, [&](const BaseSet& b) { return b == c.front(); })) {
    out = base_name(c.front());
    if (c.size() > 1) out += "*" + std::to_string(c.size());
  } else {
    out = "prod(";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + base_name(c[i]);
    out += ")";
  }
  if (spec.ball_filter) out += "&ball(" + to_string(*spec.ball_filter) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchical multisets

Code multiset_encode(std::vector<Code> elements) {
  std::ranges::sort(elements);
  Code out{static_cast<std::uint32_t>(elements.size())};
  for (const auto& e : elements) {
    out.push_back(static_cast<std::uint32_t>(e.size()));
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

namespace {

Code encode_level(std::vector<const KeyedCode*> members, std::size_t level) {
  if (level == 1) {
    std::vector<Code> codes;
    codes.reserve(members.size());
    for (const auto* m : members) codes.push_back(m->code);
    return multiset_encode(std::move(codes));
  }
  std::map<Node, std::vector<const KeyedCode*>> groups;
  for (const auto* m : members) groups[m->key[level - 1]].push_back(m);
  std::vector<Code> inner;
  inner.reserve(groups.size());
  for (auto& [node, group] : groups) inner.push_back(encode_level(std::move(group), level - 1));
  return multiset_encode(std::move(inner));
}

}  // namespace

Code hierarchical_encode(std::span<const KeyedCode> members, std::size_t t) {
  if (t == 0) throw std::invalid_argument("hierarchical multiset needs t >= 1");
  std::vector<const KeyedCode*> refs;
  refs.reserve(members.size());
  for (const auto& m : members) {
    if (m.key.size() != t) throw std::invalid_argument("hierarchical multiset key has the wrong arity");
    refs.push_back(&m);
  }
  return encode_level(std::move(refs), t);
}

Code update_rule_ktfwl_plus(const Graph& g, std::size_t k, std::size_t t, const EquivariantSetSpec& es,
                            const TupleColoring& prev, std::span<const Node> v) {
  if (v.size() != k || prev.arity != k || es.arity() != t) {
    throw std::invalid_argument("update_rule_ktfwl_plus: arity mismatch");
  }
  const NeighborhoodPattern pattern(k, t);
  const auto n = g.node_count();
  std::vector<KeyedCode> members;
  std::vector<Node> u(k);
  for (auto& w : equivariant_set(es, g, v)) {
    Code code;
    code.reserve(pattern.length());
    for (std::size_t e = 0; e < pattern.length(); ++e) {
      const auto src = pattern.sources(e);
      for (std::size_t j = 0; j < k; ++j) u[j] = src[j] < k ? v[src[j]] : w[src[j] - k];
      code.push_back(prev.colors[tuple_index(u, n)].value);
    }
    members.push_back({std::move(w), std::move(code)});
  }
  Code out{prev.at(v).value};
  const Code agg = hierarchical_encode(members, t);
  out.insert(out.end(), agg.begin(), agg.end());
  return out;
}

}  // namespace wlkit
