#include "wlkit/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace wlkit {

namespace {

constexpr std::string_view kGraph6Header = ">>graph6<<";
constexpr int kBias = 63;

bool printable6(char c) { return c >= 63 && c <= 126; }

}  // namespace

Graph parse_graph6(std::string_view text) {
  std::size_t pos = 0;
  if (text.starts_with(kGraph6Header)) pos = kGraph6Header.size();
  if (text.ends_with("\r\n")) {
    text.remove_suffix(2);
  } else if (text.ends_with('\n')) {
    text.remove_suffix(1);
  }

  auto byte_at = [&](std::size_t at, const char* what) -> unsigned {
    if (at >= text.size()) throw ParseError(std::string("truncated ") + what, at);
    if (!printable6(text[at])) throw ParseError(std::string("malformed ") + what + " byte", at);
    return static_cast<unsigned>(text[at]) - kBias;
  };

  std::uint64_t n = 0;
  const unsigned first = byte_at(pos, "header");
  if (first < 63) {
    n = first;
    pos += 1;
  } else {
    const unsigned second = byte_at(pos + 1, "header");
    std::size_t width = 3;
    std::size_t start = pos + 1;
    if (second == 63) {
      width = 6;
      start = pos + 2;
    }
    for (std::size_t i = 0; i < width; ++i) n = (n << 6) | byte_at(start + i, "header");
    pos = start + width;
    if (n > (1u << 16)) throw ParseError("graph too large for a dense adjacency table", pos);
  }

  const std::uint64_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::size_t bytes = static_cast<std::size_t>((bits + 5) / 6);
  std::vector<Edge> edges;
  std::uint64_t bit = 0;
  for (Node j = 1; j < n; ++j) {
    for (Node i = 0; i < j; ++i, ++bit) {
      const std::size_t at = pos + static_cast<std::size_t>(bit / 6);
      const unsigned value = byte_at(at, "bit field");
      if ((value >> (5 - bit % 6)) & 1u) edges.emplace_back(i, j);
    }
  }
  if (bits % 6 != 0) {
    const std::size_t last = pos + bytes - 1;
    const unsigned value = byte_at(last, "bit field");
    const unsigned pad_mask = (1u << (6 - bits % 6)) - 1;
    if (value & pad_mask) throw ParseError("nonzero padding bits", last);
  }
  pos += bytes;
  if (pos != text.size()) throw ParseError("trailing garbage after graph6 record", pos);
  return Graph(static_cast<std::size_t>(n), edges);
}

std::string to_graph6(const Graph& g) {
  const std::uint64_t n = g.node_count();
  std::string out;
  if (n < 63) {
    out.push_back(static_cast<char>(n + kBias));
  } else if (n < 258048) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + kBias));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift = 30; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + kBias));
  }
  unsigned acc = 0;
  int filled = 0;
  for (Node j = 1; j < n; ++j) {
    for (Node i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1u : 0u);
      if (++filled == 6) {
        out.push_back(static_cast<char>(acc + kBias));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + kBias));
  return out;
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.node_count()},
          {"edges", std::move(edges)},
          {"colors", std::vector<NodeColor>(g.colors().begin(), g.colors().end())}};
}

Graph graph_from_json(const nlohmann::json& record) {
  try {
    const auto n = record.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : record.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw GraphError("edge entries must be [u, v] pairs");
      edges.emplace_back(e[0].get<Node>(), e[1].get<Node>());
    }
    std::vector<NodeColor> colors;
    if (record.contains("colors")) colors = record["colors"].get<std::vector<NodeColor>>();
    return Graph(n, edges, std::move(colors));
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("bad graph record: ") + e.what());
  }
}

std::vector<Graph> read_graphs(std::istream& in) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      if (line[first] == '{') {
        graphs.push_back(graph_from_json(nlohmann::json::parse(line)));
      } else {
        graphs.push_back(parse_graph6(line));
      }
    } catch (const ParseError& e) {
      throw ParseError::on_line(e.what(), line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError::on_line(e.what(), line_no);
    } catch (const GraphError& e) {
      throw ParseError::on_line(e.what(), line_no);
    }
  }
  return graphs;
}

std::vector<Graph> read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_graphs(in);
}

void write_graphs(std::ostream& out, const std::vector<Graph>& graphs, GraphFormat format) {
  for (const auto& g : graphs) {
    if (format == GraphFormat::Graph6) {
      out << to_graph6(g) << '\n';
    } else {
      out << graph_to_json(g).dump() << '\n';
    }
  }
}

}  // namespace wlkit
