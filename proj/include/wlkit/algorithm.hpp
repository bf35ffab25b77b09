#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wlkit/graph.hpp"
#include "wlkit/ktfwl.hpp"

namespace wlkit {

enum class Algorithm { OneWL, KWL, KFWL, KTFWL, KTFWLPlus, N2FWL };

/// Which refinement to run and with which knobs. Fields that a variant does
/// not use keep their defaults so that equality is structural.
struct AlgorithmSpec {
  Algorithm kind = Algorithm::OneWL;
  std::uint32_t k = 1;
  std::uint32_t t = 1;
  EquivariantSetSpec es;                          // KTFWLPlus
  HopLimit hops = HopLimit::infinite();           // N2FWL
  std::optional<std::size_t> cap;                 // iteration cap; unset = default

  static AlgorithmSpec one_wl();
  static AlgorithmSpec kwl(std::uint32_t k);
  static AlgorithmSpec kfwl(std::uint32_t k);
  static AlgorithmSpec ktfwl(std::uint32_t k, std::uint32_t t);
  static AlgorithmSpec ktfwl_plus(std::uint32_t k, std::uint32_t t, EquivariantSetSpec es);
  static AlgorithmSpec n2fwl(HopLimit h);

  /// Tuple length the coloring is defined on.
  std::size_t arity() const { return kind == Algorithm::OneWL ? 1 : k; }
  /// Throws std::invalid_argument on k < 2, t < 1, h < 1 or a bad ES.
  void validate() const;
  /// The cap if set, otherwise 2 * n^arity + 2.
  std::size_t effective_cap(std::size_t n) const;
  /// The equivariant set used by the hierarchical update (KTFWL, KTFWLPlus, N2FWL).
  EquivariantSetSpec neighbor_set() const;

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// `1wl | kwl(k) | kfwl(k) | ktfwl(k,t) | ktfwl+(k,t,ES) | n2fwl(h=H)` with an
/// optional `;cap=N` suffix. `n2fwl(H)` is accepted too. Throws
/// std::invalid_argument with the offending text.
AlgorithmSpec parse_algorithm(std::string_view text);
std::string to_string(const AlgorithmSpec& spec);

}  // namespace wlkit
