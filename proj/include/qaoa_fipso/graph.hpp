#ifndef QAOA_FIPSO_GRAPH_HPP
#define QAOA_FIPSO_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qaoa_fipso {

/// Partition assignment: bit i is the side of vertex i.
using Mask = std::uint64_t;

/// Largest node count any cut enumeration or simulation accepts.
inline constexpr int kMaxNodes = 24;

/// Largest node count a Graph value can hold (one mask word).
inline constexpr int kMaxGraphNodes = 63;

struct Edge {
  int u = 0;  // u < v
  int v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph on vertices 0..n-1.
///
/// Edges are stored normalized (u < v) and sorted, so two graphs with the same
/// edge set compare equal regardless of construction order.
class Graph {
 public:
  /// Throws ArgumentError for n < 1, CapacityError past kMaxGraphNodes,
  /// ValidationError for self-loops, duplicates or out-of-range endpoints.
  Graph(int n, std::span<const std::pair<int, int>> edges);
  Graph(int n, std::initializer_list<std::pair<int, int>> edges);

  int node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool adjacent(int i, int j) const { return (neighbors_.at(i) >> j) & 1U; }
  /// Neighbors of `i` as a bitmask.
  Mask neighbor_mask(int i) const { return neighbors_.at(i); }
  int degree(int i) const;

  /// Row-major n*n 0/1 matrix.
  std::vector<std::uint8_t> adjacency_matrix() const;

  bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<Mask> neighbors_;
};

struct CutResult {
  int value = 0;
  Mask mask = 0;
};

/// Each unordered pair is kept independently with probability `edge_prob`.
Graph generate_er(int n, double edge_prob, std::uint64_t seed);

/// Ring lattice of even degree k, then each lattice edge (u, u+j) is rewired
/// to a uniformly chosen non-neighbor of u with probability `rewire_prob`.
/// Vertices already adjacent to everyone keep their edge.
Graph generate_ws(int n, int k, double rewire_prob, std::uint64_t seed);

/// min(4, floor(n/2)) forced even and at least 2.
int ws_k_for(int n);

/// Number of edges whose endpoints lie on different sides of `mask`.
int cut_size(const Graph& g, Mask mask);

/// Exact maximum cut over all 2^n partitions (Gray-code enumeration).
CutResult max_cut_bruteforce(const Graph& g);

/// Best-improvement single-vertex local search from a seeded random partition.
/// Ties are broken toward the lowest vertex index.
CutResult one_exchange_cut(const Graph& g, std::uint64_t seed);

/// `{"n": <int>, "edges": [[i, j], ...]}`
std::string graph_to_json(const Graph& g);
Graph graph_from_json(std::string_view text);

Graph read_graph(const std::filesystem::path& path);
void write_graph(const Graph& g, const std::filesystem::path& path);

}  // namespace qaoa_fipso

#endif  // QAOA_FIPSO_GRAPH_HPP
