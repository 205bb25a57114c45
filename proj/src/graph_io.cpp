#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/graph.hpp"

namespace qaoa_fipso {

namespace {

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line holding the opening bracket of edge `index`. The text is known to be
// valid JSON whose "edges" value is an array of integer pairs.
std::size_t line_of_edge(std::string_view text, std::size_t index) {
  std::size_t pos = text.find("\"edges\"");
  if (pos == std::string_view::npos) return 0;
  pos = text.find('[', pos);
  std::size_t seen = 0;
  while (pos != std::string_view::npos) {
    pos = text.find('[', pos + 1);
    if (pos == std::string_view::npos) break;
    if (seen++ == index) return line_of(text, pos);
  }
  return 0;
}

}  // namespace

std::string graph_to_json(const Graph& g) {
  std::ostringstream out;
  out << "{\"n\": " << g.node_count() << ", \"edges\": [";
  bool first = true;
  for (const Edge& e : g.edges()) {
    out << (first ? "" : ", ") << '[' << e.u << ", " << e.v << ']';
    first = false;
  }
  out << "]}\n";
  return out.str();
}

Graph graph_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_of(text, e.byte));
  }
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object", 1);
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ParseError("missing integer field \"n\"", line_of(text, text.find("\"n\"")));
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw ParseError("missing array field \"edges\"", line_of(text, text.find("\"edges\"")));
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "n" && key != "edges") {
      throw ParseError("unknown field \"" + key + "\"", line_of(text, text.find("\"" + key + "\"")));
    }
  }
  const auto n = doc["n"].get<long long>();
  if (n < 1 || n > kMaxGraphNodes) {
    throw ValidationError("node count " + std::to_string(n) + " outside 1.." +
                          std::to_string(kMaxGraphNodes));
  }

  std::vector<std::pair<int, int>> edges;
  const auto& list = doc["edges"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& item = list[i];
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        !item[1].is_number_integer()) {
      throw ParseError("edge " + std::to_string(i) + " must be a pair of integers",
                       line_of_edge(text, i));
    }
    const auto a = item[0].get<long long>();
    const auto b = item[1].get<long long>();
    if (a == b) {
      throw ParseError("edge " + std::to_string(i) + " is a self-loop on node " + std::to_string(a),
                       line_of_edge(text, i));
    }
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ValidationError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") references a node outside 0.." + std::to_string(n - 1));
    }
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return Graph(static_cast<int>(n), edges);
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return graph_from_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write graph file " + path.string());
  out << graph_to_json(g);
  if (!out) throw IoError("failed writing graph file " + path.string());
}

}  // namespace qaoa_fipso
