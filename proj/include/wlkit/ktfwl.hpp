#pragma once

// Neighborhood tuples, equivariant neighbor sets, hierarchical multisets and
// the (k,t)-FWL+ update rule built from them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wlkit/coloring.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/interner.hpp"

namespace wlkit {

/// sum_{m=0}^{min(k,t)} C(k,m) * C(t,m)
std::size_t neighborhood_tuple_length(std::size_t k, std::size_t t);

/// The index mapping shared by every neighborhood tuple of shape (k, t).
///
/// Slot j of entry e says which element of the concatenation p = (v, w) lands
/// in position j of the e-th k-tuple: values < k pick v, values >= k pick w.
/// Blocks are laid out by m ascending. Inside a block the replaced positions
/// are the outer loop and the substituted sub-tuple of w the inner loop, both
/// in ascending lexicographic order, except that for k = t = 2 the positions
/// run (2, 1) so the result reads
///   ((v1,v2), (v1,w1), (v1,w2), (w1,v2), (w2,v2), (w1,w2)).
/// For t = 1 this gives the k-FWL order (v, v_{w/1}, ..., v_{w/k}).
class NeighborhoodPattern {
 public:
  NeighborhoodPattern(std::size_t k, std::size_t t);

  std::size_t k() const { return k_; }
  std::size_t t() const { return t_; }
  std::size_t length() const { return sources_.size() / k_; }
  std::span<const std::uint32_t> sources(std::size_t entry) const {
    return {sources_.data() + entry * k_, k_};
  }

 private:
  std::size_t k_;
  std::size_t t_;
  std::vector<std::uint32_t> sources_;
};

/// Q^F_w(v). Throws std::invalid_argument on empty tuples.
std::vector<std::vector<Node>> neighborhood_tuple(std::span<const Node> v, std::span<const Node> w);

// ---------------------------------------------------------------------------
// Equivariant sets

enum class BaseSetKind {
  Global,           // V(G)
  ClosedNbr,        // N_1(v_i)
  OpenNbr,          // Q_1(v_i)
  HopBall,          // N_h(v_i)
  UnionOpenNbrs,    // union_i Q_1(v_i)
  UnionClosedNbrs,  // union_i N_1(v_i)
  CommonNbr,        // Q_1(v_1) & Q_1(v_2)
  SpdShell,         // Q_{SPD(v_1,v_2)}(v_1) & Q_1(v_2)
  GeodesicSet,      // SP(v_1, v_2)
};

struct BaseSet {
  BaseSetKind kind = BaseSetKind::Global;
  std::uint32_t coordinate = 0;  // 1-based, ClosedNbr/OpenNbr/HopBall only
  HopLimit hops = HopLimit::finite(1);  // HopBall only

  static BaseSet global() { return {}; }
  static BaseSet closed_nbr(std::uint32_t i) { return {BaseSetKind::ClosedNbr, i}; }
  static BaseSet open_nbr(std::uint32_t i) { return {BaseSetKind::OpenNbr, i}; }
  static BaseSet hop_ball(std::uint32_t i, HopLimit h) { return {BaseSetKind::HopBall, i, h}; }
  static BaseSet of(BaseSetKind kind) { return {kind}; }

  friend bool operator==(const BaseSet&, const BaseSet&) = default;
};

/// ES^t(v) = ES_1(v) x ... x ES_t(v), optionally with every coordinate
/// restricted to the ball intersection  N_h(v_1) & ... & N_h(v_k).
struct EquivariantSetSpec {
  std::vector<BaseSet> coordinates;
  std::optional<HopLimit> ball_filter;

  std::size_t arity() const { return coordinates.size(); }
  /// Throws std::invalid_argument if a descriptor is not defined for k-tuples.
  void validate(std::size_t k) const;

  static EquivariantSetSpec global(std::size_t t);
  /// (N_1(v_2) x N_1(v_1)) & (N_h(v_1) & N_h(v_2))^2
  static EquivariantSetSpec n2(HopLimit h);

  friend bool operator==(const EquivariantSetSpec&, const EquivariantSetSpec&) = default;
};

/// Sorted node set for one descriptor at tuple v.
std::vector<Node> evaluate_base_set(const BaseSet& base, const Graph& g, std::span<const Node> v);
/// Per-coordinate sets for ES^t(v) after the ball filter.
std::vector<std::vector<Node>> coordinate_sets(const EquivariantSetSpec& spec, const Graph& g,
                                               std::span<const Node> v);
/// All t-tuples of ES^t(v), lexicographically sorted.
std::vector<std::vector<Node>> equivariant_set(const EquivariantSetSpec& spec, const Graph& g,
                                               std::span<const Node> v);
/// N²(v) for a 2-tuple, lexicographically sorted.
std::vector<std::array<Node, 2>> n2_neighborhood(const Graph& g, Node v1, Node v2, HopLimit h);

/// Grammar: term ['&ball(' hop ')'], where term is one of
///   base ['*' t] | 'prod(' base {',' base} ')' | 'n2(h=' hop ')'
/// and base is global | closed_nbr(i) | open_nbr(i) | hop_ball(i,hop) |
///   union_open | union_closed | common_nbr | spd_shell | geodesic.
/// hop is a positive integer or 'inf'.
EquivariantSetSpec parse_equivariant_set(std::string_view text);
std::string to_string(const EquivariantSetSpec& spec);
std::string to_string(HopLimit h);

// ---------------------------------------------------------------------------
// Hierarchical multisets

struct KeyedCode {
  std::vector<Node> key;  // the t-tuple w
  Code code;
};

/// {{ code | key }}_t. Members sharing key coordinates 2..t form the innermost
/// multisets, which are grouped by coordinates 3..t, and so on; the outermost
/// multiset ranges over the last coordinate. Keys only drive the grouping and
/// are not part of the code. For t = 1 this is the plain sorted multiset code.
/// Throws std::invalid_argument on a key whose length is not t.
Code hierarchical_encode(std::span<const KeyedCode> members, std::size_t t);

/// Plain multiset code: count, then the length-prefixed element codes sorted.
Code multiset_encode(std::vector<Code> elements);

/// One (k,t)-FWL+ update of tuple v, exactly as a nested canonical code:
/// (prev(v), {{ (prev(u) | u in Q^F_w(v)) | w in ES^t(v) }}_t).
Code update_rule_ktfwl_plus(const Graph& g, std::size_t k, std::size_t t, const EquivariantSetSpec& es,
                            const TupleColoring& prev, std::span<const Node> v);

}  // namespace wlkit
