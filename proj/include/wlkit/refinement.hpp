#pragma once

// Fixed-point color refinement over k-tuples, shared-interner joint runs, and
// histogram-based distinguishing verdicts.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wlkit/algorithm.hpp"
#include "wlkit/coloring.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/interner.hpp"

namespace wlkit {

/// Deliberate defects used as negative controls by the suite.
enum class Fault {
  None,
  DropAggregation,  // new color = old color; nothing ever refines
  BreakGrouping,    // innermost hierarchical groups keep only their size
};

struct RefineOptions {
  unsigned jobs = 0;  // 0: WLKIT_JOBS from the environment, else 1
  Fault fault = Fault::None;
};

/// Worker count after applying the environment default.
unsigned resolve_jobs(unsigned requested);

/// Initial color code of a tuple: arity, node colors, equality pattern
/// (for each position, the first position holding the same node), then one
/// adjacency bit per position pair i < j.
Code atomic_type(const Graph& g, std::span<const Node> tuple);

using Histogram = std::vector<std::pair<ColorId, std::size_t>>;

/// Sorted by ColorId.
Histogram histogram_of(const TupleColoring& coloring);

struct RefinementResult {
  std::string algorithm;
  TupleColoring coloring;
  std::size_t iterations = 0;
  bool converged = false;
  Histogram histogram;
  std::uint64_t provenance = 0;  // of the interner that issued the ColorIds
};

/// {algorithm, iterations, histogram: [[id, count], ...], converged}
nlohmann::json to_json(const RefinementResult& result);

/// Lockstep refinement of several graphs under one shared ColorInterner, so
/// ColorIds are comparable across graphs at equal iteration counts.
class JointRefinement {
 public:
  JointRefinement(const AlgorithmSpec& spec, std::vector<const Graph*> graphs, RefineOptions options = {});
  ~JointRefinement();
  JointRefinement(const JointRefinement&) = delete;
  JointRefinement& operator=(const JointRefinement&) = delete;

  const AlgorithmSpec& spec() const { return spec_; }
  std::size_t graph_count() const { return graphs_.size(); }
  /// Rounds executed so far.
  std::size_t iteration() const { return iteration_; }
  /// Largest cap over the graphs.
  std::size_t cap() const { return cap_; }

  const TupleColoring& coloring(std::size_t graph) const { return colorings_[graph]; }
  Histogram histogram(std::size_t graph) const { return histogram_of(colorings_[graph]); }
  /// Whether the partition of this graph has stopped changing.
  bool converged(std::size_t graph) const { return converged_at_[graph] != 0; }
  /// Round in which stability was first observed, 0 if not yet.
  std::size_t converged_at(std::size_t graph) const { return converged_at_[graph]; }
  bool all_converged() const;

  const ColorInterner& interner() const { return interner_; }

  /// One refinement round on every graph.
  void step();

  RefinementResult result(std::size_t graph) const;

  class Rule;  // update rule, defined with the engine

 private:
  AlgorithmSpec spec_;
  std::vector<const Graph*> graphs_;
  RefineOptions options_;
  ColorInterner interner_;
  std::unique_ptr<Rule> rule_;
  std::vector<TupleColoring> colorings_;
  std::vector<std::size_t> distinct_;
  std::vector<std::size_t> converged_at_;
  std::size_t iteration_ = 0;
  std::size_t cap_ = 0;
};

/// Runs until the partition is stable or the cap is hit (converged = false).
RefinementResult refine(const AlgorithmSpec& spec, const Graph& g, const RefineOptions& options = {});

/// Refines all graphs under one interner until every one is stable or the cap is hit.
std::vector<RefinementResult> refine_jointly(const AlgorithmSpec& spec, std::span<const Graph> graphs,
                                             const RefineOptions& options = {});

/// Throws std::invalid_argument when the results came from different
/// interners or algorithms.
bool histogram_equal(const RefinementResult& a, const RefinementResult& b);

struct Verdict {
  enum class Kind { Equivalent, Distinguished, Inconclusive };
  Kind kind = Kind::Equivalent;
  /// Distinguished: round of first histogram mismatch (0 = initial colors).
  /// Equivalent: rounds until both partitions were stable.
  /// Inconclusive: rounds executed before the cap.
  std::size_t iteration = 0;

  static Verdict equivalent(std::size_t it) { return {Kind::Equivalent, it}; }
  static Verdict distinguished(std::size_t it) { return {Kind::Distinguished, it}; }
  static Verdict inconclusive(std::size_t it) { return {Kind::Inconclusive, it}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(Verdict::Kind kind);
nlohmann::json to_json(const Verdict& verdict);

Verdict joint_distinguish(const AlgorithmSpec& spec, const Graph& g, const Graph& h,
                          const RefineOptions& options = {});

/// Verdicts for every pair from a single joint run over all graphs; entry
/// [i][j] matches joint_distinguish(spec, graphs[i], graphs[j]).
std::vector<std::vector<Verdict>> pairwise_verdicts(const AlgorithmSpec& spec, std::span<const Graph> graphs,
                                                    const RefineOptions& options = {});

}  // namespace wlkit
