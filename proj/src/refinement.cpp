#include "wlkit/refinement.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace wlkit {

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WLKIT_JOBS")) {
    unsigned value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  return 1;
}

Code atomic_type(const Graph& g, std::span<const Node> tuple) {
  if (tuple.empty()) throw std::invalid_argument("atomic_type: empty tuple");
  for (Node v : tuple) {
    if (v >= g.node_count()) throw std::invalid_argument("atomic_type: node out of range");
  }
  const std::size_t k = tuple.size();
  Code code{static_cast<std::uint32_t>(k)};
  for (Node v : tuple) code.push_back(g.color(v));
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t first = 0;
    while (tuple[first] != tuple[i]) ++first;
    code.push_back(static_cast<std::uint32_t>(first));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) code.push_back(g.adjacent(tuple[i], tuple[j]) ? 1 : 0);
  }
  return code;
}

Histogram histogram_of(const TupleColoring& coloring) {
  std::vector<ColorId> sorted = coloring.colors;
  std::ranges::sort(sorted);
  Histogram out;
  for (ColorId c : sorted) {
    if (!out.empty() && out.back().first == c) {
      ++out.back().second;
    } else {
      out.emplace_back(c, 1);
    }
  }
  return out;
}

nlohmann::json to_json(const RefinementResult& result) {
  nlohmann::json hist = nlohmann::json::array();
  for (auto [id, count] : result.histogram) hist.push_back({id.value, count});
  return {{"algorithm", result.algorithm},
          {"iterations", result.iterations},
          {"histogram", std::move(hist)},
          {"converged", result.converged}};
}

// ---------------------------------------------------------------------------
// Update rules. stage() is pure and runs on worker threads; finalize() runs
// on the calling thread in tuple order and may intern into shared tables.

class JointRefinement::Rule {
 public:
  virtual ~Rule() = default;
  virtual void begin_iteration() {}
  virtual void stage(const Graph& g, const TupleColoring& prev, std::size_t index,
                     std::vector<std::uint32_t>& out) const = 0;
  /// Appends the aggregate part of the new code.
  virtual void finalize(CodeView staged, Code& out) { out.insert(out.end(), staged.begin(), staged.end()); }
};

namespace {

using Rule = JointRefinement::Rule;

class OneWlRule final : public Rule {
 public:
  void stage(const Graph& g, const TupleColoring& prev, std::size_t index,
             std::vector<std::uint32_t>& out) const override {
    const auto nbrs = g.neighbors(static_cast<Node>(index));
    out.push_back(static_cast<std::uint32_t>(nbrs.size()));
    const std::size_t base = out.size();
    for (Node u : nbrs) out.push_back(prev.colors[u].value);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(base), out.end());
  }
};

class KwlRule final : public Rule {
 public:
  void stage(const Graph& g, const TupleColoring& prev, std::size_t index,
             std::vector<std::uint32_t>& out) const override {
    const std::size_t n = g.node_count();
    const std::size_t k = prev.arity;
    std::vector<Node> v(k);
    tuple_at(index, n, v);
    for (std::size_t j = 0; j < k; ++j) {
      out.push_back(static_cast<std::uint32_t>(n));
      const std::size_t base = out.size();
      std::vector<Node> u = v;
      for (Node w = 0; w < n; ++w) {
        u[j] = w;
        out.push_back(prev.colors[tuple_index(u, n)].value);
      }
      std::sort(out.begin() + static_cast<std::ptrdiff_t>(base), out.end());
    }
  }
};

class KfwlRule final : public Rule {
 public:
  void stage(const Graph& g, const TupleColoring& prev, std::size_t index,
             std::vector<std::uint32_t>& out) const override {
    const std::size_t n = g.node_count();
    const std::size_t k = prev.arity;
    std::vector<Node> v(k);
    tuple_at(index, n, v);
    std::vector<std::uint32_t> members(n * k);
    std::vector<Node> u(k);
    for (Node w = 0; w < n; ++w) {
      for (std::size_t j = 0; j < k; ++j) {
        std::ranges::copy(v, u.begin());
        u[j] = w;
        members[w * k + j] = prev.colors[tuple_index(u, n)].value;
      }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(members.begin() + static_cast<std::ptrdiff_t>(a * k),
                                          members.begin() + static_cast<std::ptrdiff_t>((a + 1) * k),
                                          members.begin() + static_cast<std::ptrdiff_t>(b * k),
                                          members.begin() + static_cast<std::ptrdiff_t>((b + 1) * k));
    });
    out.push_back(static_cast<std::uint32_t>(n));
    for (std::size_t w : order) {
      out.insert(out.end(), members.begin() + static_cast<std::ptrdiff_t>(w * k),
                 members.begin() + static_cast<std::ptrdiff_t>((w + 1) * k));
    }
  }
};

// Shared by (k,t)-FWL, (k,t)-FWL+ and N²-FWL. The staged record is the t
// coordinate set sizes followed by one member code (prev colors along the
// neighborhood tuple) per w, enumerated with w_1 fastest. That order makes
// every hierarchical group a contiguous run, so finalize() can fold the
// levels bottom-up, interning each level's sorted multiset into a table of
// its own. The tables are shared by all graphs within a round.
class HierarchicalRule final : public Rule {
 public:
  HierarchicalRule(std::size_t k, std::size_t t, EquivariantSetSpec es, bool break_grouping)
      : pattern_(k, t), es_(std::move(es)), break_grouping_(break_grouping), levels_(t + 1) {}

  void begin_iteration() override {
    for (auto& level : levels_) level.clear();
  }

  void stage(const Graph& g, const TupleColoring& prev, std::size_t index,
             std::vector<std::uint32_t>& out) const override {
    const std::size_t n = g.node_count();
    const std::size_t k = pattern_.k();
    const std::size_t t = pattern_.t();
    std::vector<Node> p(k + t);  // v followed by w
    tuple_at(index, n, std::span<Node>(p.data(), k));
    const auto sets = coordinate_sets(es_, g, std::span<const Node>(p.data(), k));
    for (const auto& s : sets) out.push_back(static_cast<std::uint32_t>(s.size()));
    if (std::ranges::any_of(sets, [](const auto& s) { return s.empty(); })) return;

    std::vector<std::size_t> at(t, 0);
    std::vector<Node> u(k);
    while (true) {
      for (std::size_t i = 0; i < t; ++i) p[k + i] = sets[i][at[i]];
      for (std::size_t e = 0; e < pattern_.length(); ++e) {
        const auto src = pattern_.sources(e);
        for (std::size_t j = 0; j < k; ++j) u[j] = p[src[j]];
        out.push_back(prev.colors[tuple_index(u, n)].value);
      }
      std::size_t i = 0;
      while (i < t && ++at[i] == sets[i].size()) at[i++] = 0;
      if (i == t) break;
    }
  }

  void finalize(CodeView staged, Code& out) override {
    const std::size_t t = pattern_.t();
    const std::size_t width = pattern_.length();
    const auto sizes = staged.first(t);
    const auto members = staged.subspan(t);
    auto& top = levels_[t];
    if (members.empty()) {
      const std::uint32_t empty[] = {0};
      out.push_back(top.intern(empty));
      return;
    }

    std::vector<std::uint32_t> ids(members.size() / width);
    for (std::size_t m = 0; m < ids.size(); ++m) ids[m] = levels_[0].intern(members.subspan(m * width, width));

    Code group;
    for (std::size_t level = 1; level <= t; ++level) {
      const std::size_t size = sizes[level - 1];
      std::vector<std::uint32_t> next(ids.size() / size);
      for (std::size_t gi = 0; gi < next.size(); ++gi) {
        group.assign(1, static_cast<std::uint32_t>(size));
        if (!(break_grouping_ && level == 1)) {
          const auto first = ids.begin() + static_cast<std::ptrdiff_t>(gi * size);
          group.insert(group.end(), first, first + static_cast<std::ptrdiff_t>(size));
          std::sort(group.begin() + 1, group.end());
        }
        next[gi] = levels_[level].intern(group);
      }
      ids = std::move(next);
    }
    out.push_back(ids.front());
  }

 private:
  NeighborhoodPattern pattern_;
  EquivariantSetSpec es_;
  bool break_grouping_;
  std::vector<CodeInterner> levels_;  // [0] member codes, [l] level-l multisets
};

std::unique_ptr<Rule> make_rule(const AlgorithmSpec& spec, Fault fault) {
  switch (spec.kind) {
    case Algorithm::OneWL:
      return std::make_unique<OneWlRule>();
    case Algorithm::KWL:
      return std::make_unique<KwlRule>();
    case Algorithm::KFWL:
      return std::make_unique<KfwlRule>();
    case Algorithm::KTFWL:
    case Algorithm::KTFWLPlus:
    case Algorithm::N2FWL:
      return std::make_unique<HierarchicalRule>(spec.k, spec.t, spec.neighbor_set(), fault == Fault::BreakGrouping);
  }
  throw std::logic_error("unknown algorithm");
}

// Bounds the staged buffers held at once.
constexpr std::size_t kChunkTuples = 256;

}  // namespace

// ---------------------------------------------------------------------------

JointRefinement::JointRefinement(const AlgorithmSpec& spec, std::vector<const Graph*> graphs,
                                 RefineOptions options)
    : spec_(spec), graphs_(std::move(graphs)), options_(options) {
  spec_.validate();
  options_.jobs = resolve_jobs(options_.jobs);
  rule_ = make_rule(spec_, options_.fault);
  const std::size_t k = spec_.arity();
  std::vector<Node> tuple(k);
  for (const Graph* g : graphs_) {
    const std::size_t n = g->node_count();
    TupleColoring c{k, n, std::vector<ColorId>(tuple_count(n, k))};
    for (std::size_t i = 0; i < c.colors.size(); ++i) {
      tuple_at(i, n, tuple);
      c.colors[i] = interner_.intern(atomic_type(*g, tuple));
    }
    distinct_.push_back(c.distinct_count());
    colorings_.push_back(std::move(c));
    cap_ = std::max(cap_, spec_.effective_cap(n));
  }
  converged_at_.assign(graphs_.size(), 0);
}

JointRefinement::~JointRefinement() = default;

bool JointRefinement::all_converged() const {
  return std::ranges::all_of(converged_at_, [](std::size_t at) { return at != 0; });
}

void JointRefinement::step() {
  ++iteration_;
  rule_->begin_iteration();
  const unsigned jobs = options_.jobs;
  const std::size_t chunk = kChunkTuples * jobs;
  std::vector<std::vector<std::uint32_t>> staged(chunk);
  Code code;

  for (std::size_t gi = 0; gi < graphs_.size(); ++gi) {
    const Graph& g = *graphs_[gi];
    const TupleColoring& prev = colorings_[gi];
    TupleColoring next{prev.arity, prev.node_count, std::vector<ColorId>(prev.colors.size())};
    const std::size_t total = prev.colors.size();

    for (std::size_t begin = 0; begin < total; begin += chunk) {
      const std::size_t end = std::min(total, begin + chunk);
      if (options_.fault != Fault::DropAggregation) {
        auto work = [&](std::size_t from, std::size_t to) {
          for (std::size_t i = from; i < to; ++i) {
            auto& buffer = staged[i - begin];
            buffer.clear();
            rule_->stage(g, prev, i, buffer);
          }
        };
        if (jobs <= 1 || end - begin < 2) {
          work(begin, end);
        } else {
          const std::size_t per = (end - begin + jobs - 1) / jobs;
          std::vector<std::jthread> workers;
          for (std::size_t from = begin; from < end; from += per) {
            workers.emplace_back(work, from, std::min(end, from + per));
          }
        }
      }
      for (std::size_t i = begin; i < end; ++i) {
        code.assign(1, prev.colors[i].value);
        if (options_.fault != Fault::DropAggregation) rule_->finalize(staged[i - begin], code);
        next.colors[i] = interner_.intern(code);
      }
    }

    const std::size_t distinct = next.distinct_count();
    if (distinct == distinct_[gi] && converged_at_[gi] == 0) converged_at_[gi] = iteration_;
    distinct_[gi] = distinct;
    colorings_[gi] = std::move(next);
  }
}

RefinementResult JointRefinement::result(std::size_t graph) const {
  RefinementResult r;
  r.algorithm = to_string(spec_);
  r.coloring = colorings_[graph];
  r.iterations = converged(graph) ? converged_at_[graph] : iteration_;
  r.converged = converged(graph);
  r.histogram = histogram(graph);
  r.provenance = interner_.provenance();
  return r;
}

RefinementResult refine(const AlgorithmSpec& spec, const Graph& g, const RefineOptions& options) {
  JointRefinement run(spec, {&g}, options);
  while (!run.converged(0) && run.iteration() < run.cap()) run.step();
  return run.result(0);
}

std::vector<RefinementResult> refine_jointly(const AlgorithmSpec& spec, std::span<const Graph> graphs,
                                             const RefineOptions& options) {
  std::vector<const Graph*> refs;
  for (const auto& g : graphs) refs.push_back(&g);
  JointRefinement run(spec, refs, options);
  while (!run.all_converged() && run.iteration() < run.cap()) run.step();
  std::vector<RefinementResult> out;
  for (std::size_t i = 0; i < graphs.size(); ++i) out.push_back(run.result(i));
  return out;
}

bool histogram_equal(const RefinementResult& a, const RefinementResult& b) {
  if (a.provenance != b.provenance) throw std::invalid_argument("histograms come from different interners");
  if (a.algorithm != b.algorithm) throw std::invalid_argument("histograms come from different algorithms");
  return a.histogram == b.histogram;
}

std::string to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Equivalent:
      return "Equivalent";
    case Verdict::Kind::Distinguished:
      return "Distinguished";
    case Verdict::Kind::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

nlohmann::json to_json(const Verdict& verdict) {
  return {{"verdict", to_string(verdict.kind)}, {"iteration", verdict.iteration}};
}

Verdict joint_distinguish(const AlgorithmSpec& spec, const Graph& g, const Graph& h, const RefineOptions& options) {
  spec.validate();
  if (g.node_count() != h.node_count()) return Verdict::distinguished(0);
  JointRefinement run(spec, {&g, &h}, options);
  while (true) {
    if (run.histogram(0) != run.histogram(1)) return Verdict::distinguished(run.iteration());
    if (run.all_converged()) return Verdict::equivalent(run.iteration());
    if (run.iteration() >= run.cap()) return Verdict::inconclusive(run.iteration());
    run.step();
  }
}

std::vector<std::vector<Verdict>> pairwise_verdicts(const AlgorithmSpec& spec, std::span<const Graph> graphs,
                                                    const RefineOptions& options) {
  const std::size_t count = graphs.size();
  std::vector<const Graph*> refs;
  for (const auto& g : graphs) refs.push_back(&g);
  JointRefinement run(spec, refs, options);

  // fingerprints[l][i]: histogram of graph i after round l, as an interned id.
  CodeInterner histograms;
  std::vector<std::vector<std::uint32_t>> fingerprints;
  auto record = [&] {
    std::vector<std::uint32_t> row(count);
    Code code;
    for (std::size_t i = 0; i < count; ++i) {
      code.clear();
      for (auto [id, n] : run.histogram(i)) {
        code.push_back(id.value);
        code.push_back(static_cast<std::uint32_t>(n));
      }
      row[i] = histograms.intern(code);
    }
    fingerprints.push_back(std::move(row));
  };
  record();
  while (!run.all_converged() && run.iteration() < run.cap()) {
    run.step();
    record();
  }

  std::vector<std::vector<Verdict>> out(count, std::vector<Verdict>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      Verdict v;
      const std::size_t ci = run.converged_at(i);
      const std::size_t cj = run.converged_at(j);
      if (graphs[i].node_count() != graphs[j].node_count()) {
        v = Verdict::distinguished(0);
      } else {
        const std::size_t cap = spec.effective_cap(graphs[i].node_count());
        for (std::size_t l = 0;; ++l) {
          if (fingerprints[l][i] != fingerprints[l][j]) {
            v = Verdict::distinguished(l);
            break;
          }
          if (ci != 0 && cj != 0 && ci <= l && cj <= l) {
            v = Verdict::equivalent(l);
            break;
          }
          if (l >= cap || l + 1 >= fingerprints.size()) {
            v = Verdict::inconclusive(l);
            break;
          }
        }
      }
      out[i][j] = out[j][i] = v;
    }
  }
  return out;
}

}  // namespace wlkit
