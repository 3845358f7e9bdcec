#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epos {

/// Largest vertex count a Graph can hold. Exact labeling is only claimed for n <= 11.
inline constexpr int kMaxOrder = 16;

using VertexMask = std::uint32_t;

inline constexpr VertexMask bit(int v) { return VertexMask{1} << v; }
inline int popcount(VertexMask m) { return std::popcount(m); }
inline int lowest_vertex(VertexMask m) { return std::countr_zero(m); }

/// Simple undirected graph on vertices 0..n-1, stored as neighbor bitmasks.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int order() const noexcept { return n_; }
  VertexMask vertices() const noexcept { return n_ == 0 ? 0 : static_cast<VertexMask>((std::uint64_t{1} << n_) - 1); }
  VertexMask neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  bool has_edge(int u, int v) const { return (adj_[static_cast<std::size_t>(u)] >> v) & 1U; }
  int degree(int v) const { return popcount(neighbors(v)); }
  int edge_count() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  /// Graph with vertex v renamed to perm[v].
  Graph relabeled(std::span<const int> perm) const;
  /// Subgraph induced on `mask`, vertices renumbered in increasing order.
  Graph induced(VertexMask mask) const;

  std::vector<std::pair<int, int>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::array<VertexMask, kMaxOrder> adj_{};
};

Graph empty_graph(int n);
Graph complete_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
/// K_{1,leaves}; the center is vertex 0.
Graph star_graph(int leaves);
Graph complete_bipartite_graph(int a, int b);
Graph graph_from_edges(int n, std::span<const std::pair<int, int>> edges);

// graph6 (short form, n <= 62; this library holds at most kMaxOrder vertices).
Graph parse_graph6(std::string_view line);
std::string encode_graph6(const Graph& g);

/// Byte sequence equal for two graphs iff they are isomorphic. Holds the graph6
/// string of the canonical relabeling.
struct CanonicalCertificate {
  std::string bytes;
  friend auto operator<=>(const CanonicalCertificate&, const CanonicalCertificate&) = default;
};

/// Canonical relabeling: lexicographically least graph6 bit string over the
/// individualization-refinement search tree. Requires n <= 11.
Graph canonical_form(const Graph& g);
CanonicalCertificate canonical_certificate(const Graph& g);
/// Canonical adjacency bits packed most-significant-first in graph6 pair order.
std::uint64_t canonical_code(const Graph& g);
Graph graph_from_code(int n, std::uint64_t code);

/// Calls `visit` once per isomorphism class of connected graphs on n vertices,
/// in increasing certificate order. Supports 1 <= n <= 9.
void enumerate_connected_graphs(int n, const std::function<void(const Graph&)>& visit);
std::vector<Graph> connected_graphs(int n);

bool is_connected(const Graph& g);
/// True when the subgraph induced on a nonempty `mask` is connected.
bool is_connected_subset(const Graph& g, VertexMask mask);
Graph complement(const Graph& g);
/// One vertex per block; blocks adjacent iff some edge of g crosses them.
Graph quotient(const Graph& g, std::span<const VertexMask> blocks);

}  // namespace epos
