#include "qaoa_fipso/graph.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/rng.hpp"

namespace qaoa_fipso {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

void check_enumerable(const Graph& g) {
  if (g.node_count() > kMaxNodes) {
    throw CapacityError("cut enumeration supports at most " + std::to_string(kMaxNodes) +
                        " nodes, graph has " + std::to_string(g.node_count()));
  }
}

Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

}  // namespace

Graph::Graph(int n, std::span<const std::pair<int, int>> edges) : n_(n) {
  if (n < 1) throw ArgumentError("graph needs at least one node, got " + std::to_string(n));
  if (n > kMaxGraphNodes) {
    throw CapacityError("graph node count " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxGraphNodes));
  }
  neighbors_.assign(static_cast<std::size_t>(n), 0);
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ValidationError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") references a node outside 0.." + std::to_string(n - 1));
    }
    if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
    Edge e{std::min(a, b), std::max(a, b)};
    if ((neighbors_[e.u] >> e.v) & 1U) {
      throw ValidationError("duplicate edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ")");
    }
    neighbors_[e.u] |= Mask{1} << e.v;
    neighbors_[e.v] |= Mask{1} << e.u;
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
}

Graph::Graph(int n, std::initializer_list<std::pair<int, int>> edges)
    : Graph(n, std::span<const std::pair<int, int>>(edges.begin(), edges.size())) {}

int Graph::degree(int i) const { return std::popcount(neighbors_.at(i)); }

std::vector<std::uint8_t> Graph::adjacency_matrix() const {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n_) * n_, 0);
  for (const Edge& e : edges_) {
    a[static_cast<std::size_t>(e.u) * n_ + e.v] = 1;
    a[static_cast<std::size_t>(e.v) * n_ + e.u] = 1;
  }
  return a;
}

Graph generate_er(int n, double edge_prob, std::uint64_t seed) {
  check_probability(edge_prob, "edge probability");
  if (n < 1) throw ArgumentError("ER graph needs n >= 1");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < edge_prob) edges.emplace_back(i, j);
    }
  }
  return Graph(n, edges);
}

Graph generate_ws(int n, int k, double rewire_prob, std::uint64_t seed) {
  check_probability(rewire_prob, "rewire probability");
  if (k % 2 != 0 || k < 2 || k >= n) {
    throw ArgumentError("WS neighbor count k must be even with 2 <= k < n, got k=" +
                        std::to_string(k) + ", n=" + std::to_string(n));
  }
  if (n > kMaxGraphNodes) throw CapacityError("WS graph too large");

  std::vector<Mask> nbr(static_cast<std::size_t>(n), 0);
  auto link = [&](int a, int b) {
    nbr[a] |= Mask{1} << b;
    nbr[b] |= Mask{1} << a;
  };
  auto unlink = [&](int a, int b) {
    nbr[a] &= ~(Mask{1} << b);
    nbr[b] &= ~(Mask{1} << a);
  };
  for (int u = 0; u < n; ++u) {
    for (int j = 1; j <= k / 2; ++j) link(u, (u + j) % n);
  }

  Rng rng(seed);
  const Mask all = full_mask(n);
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) {
      const int v = (u + j) % n;
      if (rng.uniform() >= rewire_prob) continue;
      // Rewiring may already have removed this lattice edge via v's turn.
      if (!((nbr[u] >> v) & 1U)) continue;
      const Mask candidates = all & ~nbr[u] & ~(Mask{1} << u);
      const int count = std::popcount(candidates);
      if (count == 0) continue;
      auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(count)));
      Mask c = candidates;
      while (pick-- > 0) c &= c - 1;
      const int w = std::countr_zero(c);
      unlink(u, v);
      link(u, w);
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if ((nbr[u] >> v) & 1U) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

int ws_k_for(int n) {
  if (n < 3) throw ArgumentError("ws_k_for needs n >= 3, got " + std::to_string(n));
  int k = std::min(4, n / 2);
  k -= k % 2;
  return std::max(k, 2);
}

int cut_size(const Graph& g, Mask mask) {
  if (mask > full_mask(g.node_count())) {
    throw ArgumentError("mask " + std::to_string(mask) + " has bits beyond node count " +
                        std::to_string(g.node_count()));
  }
  int cut = 0;
  for (const Edge& e : g.edges()) cut += static_cast<int>(((mask >> e.u) ^ (mask >> e.v)) & 1U);
  return cut;
}

CutResult max_cut_bruteforce(const Graph& g) {
  check_enumerable(g);
  const int n = g.node_count();
  CutResult best;
  Mask gray = 0;
  int cut = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int v = std::countr_zero(step);
    // Moving v across turns same-side neighbors into cut edges and vice versa.
    const Mask side = ((gray >> v) & 1U) ? gray : ~gray;
    const int same = std::popcount(g.neighbor_mask(v) & side);
    cut += 2 * same - g.degree(v);
    gray ^= Mask{1} << v;
    if (cut > best.value) best = {cut, gray};
  }
  return best;
}

CutResult one_exchange_cut(const Graph& g, std::uint64_t seed) {
  const int n = g.node_count();
  Rng rng(seed);
  Mask mask = rng.next_u64() & full_mask(n);
  for (;;) {
    int best_gain = 0;
    int best_vertex = -1;
    for (int v = 0; v < n; ++v) {
      const Mask side = ((mask >> v) & 1U) ? mask : ~mask;
      const int gain = 2 * std::popcount(g.neighbor_mask(v) & side) - g.degree(v);
      if (gain > best_gain) {
        best_gain = gain;
        best_vertex = v;
      }
    }
    if (best_vertex < 0) break;
    mask ^= Mask{1} << best_vertex;
  }
  return {cut_size(g, mask), mask};
}

}  // namespace qaoa_fipso
