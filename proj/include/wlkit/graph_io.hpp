#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wlkit/graph.hpp"

namespace wlkit {

/// Malformed input. offset() is the byte position of the problem within the
/// record (graph6) or the line number within a multi-graph file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  /// Wraps an error from one line of a multi-graph file.
  static ParseError on_line(const std::string& what, std::size_t line) {
    return ParseError(Line{}, "line " + std::to_string(line) + ": " + what, line);
  }
  std::size_t offset() const { return offset_; }

 private:
  struct Line {};
  ParseError(Line, const std::string& message, std::size_t line) : std::runtime_error(message), offset_(line) {}
  std::size_t offset_;
};

/// Parses one graph6 record. An optional ">>graph6<<" header and a single
/// trailing newline are accepted; anything else after the bit field is an error.
Graph parse_graph6(std::string_view text);
/// Encodes the structure of g (colors are dropped) without header or newline.
std::string to_graph6(const Graph& g);

/// {"n": 3, "edges": [[0,1],[1,2]], "colors": [0,0,1]}. "colors" is optional on input.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& record);

enum class GraphFormat { Graph6, Json };

/// Newline-delimited graphs. Each non-blank line is a JSON record if it starts
/// with '{', otherwise graph6. Errors report the 1-based line number.
std::vector<Graph> read_graphs(std::istream& in);
std::vector<Graph> read_graph_file(const std::string& path);
void write_graphs(std::ostream& out, const std::vector<Graph>& graphs, GraphFormat format);

}  // namespace wlkit
