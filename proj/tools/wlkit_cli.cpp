// wlkit command-line front end. JSON goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 ok, 1 suite failure or --expect mismatch, 2 input error,
// 3 iteration cap exceeded.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "wlkit/generators.hpp"
#include "wlkit/graph_io.hpp"
#include "wlkit/oracles.hpp"
#include "wlkit/refinement.hpp"
#include "wlkit/suite.hpp"

namespace {

using namespace wlkit;

constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "name" or "name(a,b,...)" with unsigned integer arguments.
struct Call {
  std::string name;
  std::vector<std::uint64_t> args;
};

Call parse_call(const std::string& text) {
  Call call;
  const auto open = text.find('(');
  call.name = text.substr(0, open);
  if (open == std::string::npos) return call;
  if (text.back() != ')') throw InputError("malformed builtin '" + text + "'");
  std::stringstream inner(text.substr(open + 1, text.size() - open - 2));
  std::string item;
  while (std::getline(inner, item, ',')) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw InputError("bad number in '" + text + "'");
    call.args.push_back(value);
  }
  return call;
}

void need_args(const Call& c, std::size_t count) {
  if (c.args.size() != count) {
    throw InputError(c.name + " takes " + std::to_string(count) + " argument(s)");
  }
}

Graph builtin_graph(const std::string& text) {
  const Call c = parse_call(text);
  if (c.name == "shrikhande") return srg_pair().shrikhande;
  if (c.name == "rook") return srg_pair().rook;
  if (c.name == "c6") return cycle_graph(6);
  if (c.name == "2c3") return disjoint_union(cycle_graph(3), cycle_graph(3));
  if (c.name == "cycle") return need_args(c, 1), cycle_graph(c.args[0]);
  if (c.name == "path") return need_args(c, 1), path_graph(c.args[0]);
  if (c.name == "complete") return need_args(c, 1), complete_graph(c.args[0]);
  if (c.name == "csl") return need_args(c, 2), csl_graph(c.args[0], c.args[1]);
  if (c.name == "cfi_g") return need_args(c, 1), cfi_pair(static_cast<std::uint32_t>(c.args[0])).g_side;
  if (c.name == "cfi_h") return need_args(c, 1), cfi_pair(static_cast<std::uint32_t>(c.args[0])).h_side;
  throw InputError("unknown builtin graph '" + text + "'");
}

std::pair<Graph, Graph> builtin_pair(const std::string& text) {
  const Call c = parse_call(text);
  if (c.name == "srg") {
    auto p = srg_pair();
    return {std::move(p.shrikhande), std::move(p.rook)};
  }
  if (c.name == "cfi") {
    need_args(c, 1);
    auto p = cfi_pair(static_cast<std::uint32_t>(c.args[0]));
    return {std::move(p.g_side), std::move(p.h_side)};
  }
  if (c.name == "csl") {
    need_args(c, 3);
    return {csl_graph(c.args[0], c.args[1]), csl_graph(c.args[0], c.args[2])};
  }
  if (c.name == "c6_2c3") return {cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))};
  throw InputError("unknown builtin pair '" + text + "'");
}

std::vector<Graph> load(const std::string& path) {
  if (path == "-") return read_graphs(std::cin);
  return read_graph_file(path);
}

std::string digest(const Histogram& h) {
  std::uint64_t x = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t w) {
    x ^= w;
    x *= 0x100000001b3ULL;
  };
  for (auto [id, count] : h) {
    mix(id.value);
    mix(count);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

struct Common {
  std::string alg = "1wl";
  unsigned jobs = 0;
  std::size_t cap = 0;

  AlgorithmSpec spec() const {
    AlgorithmSpec s = parse_algorithm(alg);
    if (cap > 0) s.cap = cap;
    return s;
  }
  RefineOptions options() const { return {jobs, Fault::None}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--alg", c.alg, "algorithm, e.g. 1wl, kfwl(2), ktfwl(2,2), ktfwl+(2,2,n2(h=1)), n2fwl(h=1)");
  cmd->add_option("--jobs", c.jobs, "worker threads (default: WLKIT_JOBS or 1)");
  cmd->add_option("--cap", c.cap, "iteration cap (default 2*n^k+2)");
}

nlohmann::json invocation(const std::string& command, const Common& c) {
  nlohmann::json j = {{"command", command}, {"alg", to_string(c.spec())}};
  return j;
}

int cmd_refine(const std::string& file, const std::string& builtin, const Common& c) {
  std::vector<Graph> graphs;
  if (!builtin.empty()) {
    graphs.push_back(builtin_graph(builtin));
  } else if (!file.empty()) {
    graphs = load(file);
  } else {
    throw InputError("refine needs a graph file or --builtin");
  }
  const auto spec = c.spec();
  nlohmann::json results = nlohmann::json::array();
  bool capped = false;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto r = refine(spec, graphs[i], c.options());
    auto j = to_json(r);
    j["graph"] = i;
    j["distinct_colors"] = r.histogram.size();
    j["histogram_digest"] = digest(r.histogram);
    results.push_back(std::move(j));
    if (!r.converged) {
      capped = true;
      std::cerr << "graph " << i << ": iteration cap " << spec.effective_cap(graphs[i].node_count()) << " exceeded\n";
    }
  }
  auto inv = invocation("refine", c);
  inv["input"] = builtin.empty() ? file : builtin;
  std::cout << nlohmann::json{{"tool", kToolVersion}, {"invocation", inv}, {"results", results}}.dump(2) << "\n";
  return capped ? kExitCap : 0;
}

int cmd_distinguish(const std::vector<std::string>& files, const std::string& builtin, const std::string& expect,
                    const Common& c) {
  Graph g;
  Graph h;
  if (!builtin.empty()) {
    std::tie(g, h) = builtin_pair(builtin);
  } else if (files.size() == 2) {
    auto a = load(files[0]);
    auto b = load(files[1]);
    if (a.empty() || b.empty()) throw InputError("graph file is empty");
    g = std::move(a.front());
    h = std::move(b.front());
  } else if (files.size() == 1) {
    auto a = load(files[0]);
    if (a.size() != 2) throw InputError("a single input file must hold exactly two graphs");
    g = std::move(a[0]);
    h = std::move(a[1]);
  } else {
    throw InputError("distinguish needs two graphs or --builtin");
  }
  const auto spec = c.spec();
  const auto start = std::chrono::steady_clock::now();
  const auto v = joint_distinguish(spec, g, h, c.options());
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  auto inv = invocation("distinguish", c);
  inv["input"] = builtin.empty() ? nlohmann::json(files) : nlohmann::json(builtin);
  std::cout << nlohmann::json{{"tool", kToolVersion}, {"invocation", inv}, {"verdict", to_json(v)},
                              {"timings", {{"millis", ms}}}}
                   .dump(2)
            << "\n";
  if (v.kind == Verdict::Kind::Inconclusive) {
    std::cerr << "iteration cap exceeded after " << v.iteration << " rounds\n";
    return kExitCap;
  }
  if (!expect.empty()) {
    const bool want_distinguished = expect == "distinguished";
    if (!want_distinguished && expect != "equivalent") throw InputError("--expect takes equivalent|distinguished");
    if ((v.kind == Verdict::Kind::Distinguished) != want_distinguished) {
      std::cerr << "expected " << expect << ", got " << to_string(v.kind) << "\n";
      return kExitMismatch;
    }
  }
  return 0;
}

int cmd_gen(const std::string& what, const std::string& format, std::uint64_t seed) {
  const Call c = parse_call(what);
  const GraphFormat fmt = format == "json" ? GraphFormat::Json : GraphFormat::Graph6;
  if (format != "json" && format != "graph6") throw InputError("--format takes graph6|json");
  std::vector<Graph> graphs;
  if (c.name == "cfi") {
    need_args(c, 1);
    const auto pair = cfi_pair(static_cast<std::uint32_t>(c.args[0]));
    if (fmt == GraphFormat::Json) {
      // Node metadata rides along in each record; graph readers ignore it.
      auto describe = [](const std::vector<CfiNode>& nodes) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& x : nodes) {
          out.push_back({x.kind == CfiNode::Kind::Meta ? "meta" : "edge", x.index, x.label});
        }
        return out;
      };
      for (const auto& [side, graph, nodes] : {std::tuple{"g", &pair.g_side, &pair.g_nodes},
                                               std::tuple{"h", &pair.h_side, &pair.h_nodes}}) {
        auto j = graph_to_json(*graph);
        j["meta"] = {{"cfi_k", pair.k}, {"side", side}, {"nodes", describe(*nodes)}};
        std::cout << j.dump() << "\n";
      }
      return 0;
    }
    graphs = {pair.g_side, pair.h_side};
  } else if (c.name == "srg") {
    auto p = srg_pair();
    graphs = {p.shrikhande, p.rook};
  } else if (c.name == "random") {
    need_args(c, 2);
    // random(n, percent)
    graphs.push_back(random_graph(c.args[0], static_cast<double>(c.args[1]) / 100.0, seed));
  } else if (c.name == "all") {
    need_args(c, 1);
    graphs = all_nonisomorphic_graphs(c.args[0]);
  } else {
    graphs.push_back(builtin_graph(what));
  }
  write_graphs(std::cout, graphs, fmt);
  return 0;
}

int cmd_count(const std::string& file, const std::string& builtin, const std::string& kind_name) {
  std::vector<Graph> graphs;
  if (!builtin.empty()) {
    graphs.push_back(builtin_graph(builtin));
  } else if (!file.empty()) {
    graphs = load(file);
  } else {
    throw InputError("count needs a graph file or --builtin");
  }
  std::vector<SubstructureKind> kinds;
  if (kind_name == "all") {
    kinds = all_substructure_kinds();
  } else {
    kinds.push_back(parse_substructure_kind(kind_name));
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (auto kind : kinds) {
      const auto count = count_substructure(graphs[i], kind);
      std::cout << nlohmann::json{{"graph", i}, {"kind", to_string(kind)}, {"total", count.total},
                                  {"per_node", count.per_node}}
                       .dump()
                << "\n";
    }
  }
  return 0;
}

int cmd_suite(const std::string& level, const std::vector<int>& only, const std::string& inject, std::uint64_t seed,
              unsigned jobs, bool timings) {
  if (level != "desk") throw InputError("only --level desk is available");
  SuiteOptions options;
  options.jobs = jobs;
  options.fault = parse_fault(inject);
  options.seed = seed;
  for (int id : only) battery_name(id);
  const auto report = run_suite(options, only);
  auto j = report.to_json();
  if (!timings) j.erase("timings");
  std::cout << j.dump(2) << "\n";
  for (const auto& b : report.batteries) {
    std::cerr << (b.passed() ? "PASS " : "FAIL ") << b.id << " " << b.name << " (" << b.millis << " ms)\n";
  }
  return report.passed() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weisfeiler-Lehman refinement toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common common;
  std::string file;
  std::string builtin;
  std::vector<std::string> files;
  std::string expect;
  std::string format = "graph6";
  std::uint64_t seed = 1;
  std::string kind = "all";
  std::string level = "desk";
  std::vector<int> only;
  std::string inject = "none";
  std::uint64_t suite_seed = SuiteOptions{}.seed;
  bool no_timings = false;

  auto* refine_cmd = app.add_subcommand("refine", "refine each graph of a file and report its stable coloring");
  refine_cmd->add_option("file", file, "graph6 / JSON-record file, '-' for stdin");
  refine_cmd->add_option("--builtin", builtin, "shrikhande, rook, c6, 2c3, cycle(n), csl(n,s), cfi_g(k), cfi_h(k)");
  add_common(refine_cmd, common);

  auto* dist_cmd = app.add_subcommand("distinguish", "joint refinement of two graphs");
  dist_cmd->add_option("files", files, "one file with two graphs, or two files");
  dist_cmd->add_option("--builtin", builtin, "srg, cfi(k), csl(n,s1,s2), c6_2c3");
  dist_cmd->add_option("--expect", expect, "equivalent|distinguished; exit 1 on mismatch");
  add_common(dist_cmd, common);

  auto* gen_cmd = app.add_subcommand("gen", "emit generated graphs");
  std::string what;
  gen_cmd->add_option("what", what, "cfi(k), srg, csl(n,s), random(n,percent), all(n), cycle(n), ...")->required();
  gen_cmd->add_option("--format", format, "graph6|json");
  gen_cmd->add_option("--seed", seed, "seed for random graphs");

  auto* count_cmd = app.add_subcommand("count", "exhaustive substructure counts");
  count_cmd->add_option("file", file, "graph file, '-' for stdin");
  count_cmd->add_option("--builtin", builtin, "a builtin graph name");
  count_cmd->add_option("--kind", kind, "cycle3..cycle6, tailed_triangle, chordal_cycle, clique4, path4, "
                                        "triangle_rectangle, or all");

  auto* suite_cmd = app.add_subcommand("suite", "run the separation and property batteries");
  suite_cmd->add_option("--level", level, "desk");
  suite_cmd->add_option("--only", only, "battery ids to run")->delimiter(',');
  suite_cmd->add_option("--inject", inject, "none|drop_aggregation|break_grouping (negative control)");
  suite_cmd->add_option("--seed", suite_seed, "seed for the randomized batteries");
  suite_cmd->add_option("--jobs", common.jobs, "worker threads");
  suite_cmd->add_flag("--no-timings", no_timings, "omit wall-clock timings from the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*refine_cmd) return cmd_refine(file, builtin, common);
    if (*dist_cmd) return cmd_distinguish(files, builtin, expect, common);
    if (*gen_cmd) return cmd_gen(what, format, seed);
    if (*count_cmd) return cmd_count(file, builtin, kind);
    if (*suite_cmd) return cmd_suite(level, only, inject, suite_seed, common.jobs, !no_timings);
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
