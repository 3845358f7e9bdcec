#include "epos/graph.hpp"

#include <algorithm>
#include <numeric>

#include "epos/error.hpp"

namespace epos {

Graph::Graph(int n) : n_(n) {
  if (n < 0 || n > kMaxOrder) {
    throw ValidationError("graph order " + std::to_string(n) + " outside 0.." + std::to_string(kMaxOrder));
  }
}

int Graph::edge_count() const {
  int twice = 0;
  for (int v = 0; v < n_; ++v) twice += degree(v);
  return twice / 2;
}

void Graph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw ValidationError("invalid edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  adj_[static_cast<std::size_t>(u)] |= bit(v);
  adj_[static_cast<std::size_t>(v)] |= bit(u);
}

void Graph::remove_edge(int u, int v) {
  adj_[static_cast<std::size_t>(u)] &= ~bit(v);
  adj_[static_cast<std::size_t>(v)] &= ~bit(u);
}

Graph Graph::relabeled(std::span<const int> perm) const {
  Graph h(n_);
  for (int u = 0; u < n_; ++u) {
    VertexMask nb = adj_[static_cast<std::size_t>(u)];
    VertexMask mapped = 0;
    while (nb) {
      int v = lowest_vertex(nb);
      nb &= nb - 1;
      mapped |= bit(perm[static_cast<std::size_t>(v)]);
    }
    h.adj_[static_cast<std::size_t>(perm[static_cast<std::size_t>(u)])] = mapped;
  }
  return h;
}

Graph Graph::induced(VertexMask mask) const {
  std::array<int, kMaxOrder> index{};
  int k = 0;
  for (int v = 0; v < n_; ++v) {
    if (mask & bit(v)) index[static_cast<std::size_t>(v)] = k++;
  }
  Graph h(k);
  for (int u = 0; u < n_; ++u) {
    if (!(mask & bit(u))) continue;
    for (int v = u + 1; v < n_; ++v) {
      if ((mask & bit(v)) && has_edge(u, v)) h.add_edge(index[static_cast<std::size_t>(u)], index[static_cast<std::size_t>(v)]);
    }
  }
  return h;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph empty_graph(int n) { return Graph(n); }

Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph path_graph(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw ValidationError("cycle needs at least 3 vertices");
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

Graph complete_bipartite_graph(int a, int b) {
  Graph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) g.add_edge(u, v);
  return g;
}

Graph graph_from_edges(int n, std::span<const std::pair<int, int>> edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

// ---------------------------------------------------------------------------
// graph6

Graph parse_graph6(std::string_view line) {
  if (line.empty()) throw ParseError("empty graph6 string", 0);
  const int first = static_cast<unsigned char>(line[0]);
  if (first == 126) throw ParseError("graph6 long form (n > 62) is not supported", 0);
  if (first < 63 || first > 126) throw ParseError("graph6 order byte out of range 63..126", 0);
  const int n = first - 63;
  if (n > kMaxOrder) {
    throw ParseError("graph6 order " + std::to_string(n) + " exceeds supported maximum " + std::to_string(kMaxOrder), 0);
  }
  const std::size_t nbits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t nbytes = (nbits + 5) / 6;
  if (line.size() != 1 + nbytes) {
    const std::size_t offset = std::min(line.size(), 1 + nbytes);
    throw ParseError("graph6 length " + std::to_string(line.size()) + " does not match n=" + std::to_string(n) +
                         " (expected " + std::to_string(1 + nbytes) + ")",
                     offset);
  }
  for (std::size_t i = 1; i < line.size(); ++i) {
    const int c = static_cast<unsigned char>(line[i]);
    if (c < 63 || c > 126) throw ParseError("graph6 data byte out of range 63..126", i);
  }
  Graph g(n);
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int byte = static_cast<unsigned char>(line[1 + k / 6]) - 63;
      if ((byte >> (5 - static_cast<int>(k % 6))) & 1) g.add_edge(i, j);
    }
  }
  if (nbits % 6 != 0) {
    const int last = static_cast<unsigned char>(line.back()) - 63;
    const int pad = 6 - static_cast<int>(nbits % 6);
    if (last & ((1 << pad) - 1)) throw ParseError("graph6 nonzero padding bits", line.size() - 1);
  }
  return g;
}

std::string encode_graph6(const Graph& g) {
  const int n = g.order();
  if (n < 1) throw ValidationError("graph6 requires at least one vertex");
  const std::size_t nbits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  std::string out(1 + (nbits + 5) / 6, '\0');
  out[0] = static_cast<char>(n + 63);
  std::vector<int> bytes((nbits + 5) / 6, 0);
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      if (g.has_edge(i, j)) bytes[k / 6] |= 1 << (5 - static_cast<int>(k % 6));
    }
  }
  for (std::size_t b = 0; b < bytes.size(); ++b) out[1 + b] = static_cast<char>(bytes[b] + 63);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical labeling

namespace {

constexpr int kMaxCanonicalOrder = 11;

using Labeling = std::array<std::uint8_t, kMaxOrder>;

// Ordered partition of the vertex set: `order` lists vertices, `cell_start`
// has bit i set when position i begins a cell.
struct OrderedPartition {
  Labeling order{};
  std::uint32_t cell_start = 0;
};

std::uint64_t code_of_order(const Graph& g, const Labeling& order) {
  const int n = g.order();
  std::uint64_t code = 0;
  for (int j = 1; j < n; ++j) {
    const VertexMask nb = g.neighbors(order[static_cast<std::size_t>(j)]);
    for (int i = 0; i < j; ++i) code = (code << 1) | ((nb >> order[static_cast<std::size_t>(i)]) & 1U);
  }
  return code;
}

int cell_end(const OrderedPartition& p, int start, int n) {
  int e = start + 1;
  while (e < n && !(p.cell_start & (1U << e))) ++e;
  return e;
}

// Splits cells by neighbor counts into each cell until the partition is equitable.
void refine(const Graph& g, OrderedPartition& p) {
  const int n = g.order();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int ws = 0; ws < n; ws = cell_end(p, ws, n)) {
      const int we = cell_end(p, ws, n);
      VertexMask splitter = 0;
      for (int i = ws; i < we; ++i) splitter |= bit(p.order[static_cast<std::size_t>(i)]);
      for (int cs = 0; cs < n;) {
        const int ce = cell_end(p, cs, n);
        if (ce - cs > 1) {
          std::array<std::pair<int, std::uint8_t>, kMaxOrder> keyed{};
          bool uniform = true;
          for (int i = cs; i < ce; ++i) {
            const auto v = p.order[static_cast<std::size_t>(i)];
            keyed[static_cast<std::size_t>(i - cs)] = {popcount(g.neighbors(v) & splitter), v};
            if (keyed[static_cast<std::size_t>(i - cs)].first != keyed[0].first) uniform = false;
          }
          if (!uniform) {
            std::stable_sort(keyed.begin(), keyed.begin() + (ce - cs),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (int i = cs; i < ce; ++i) {
              p.order[static_cast<std::size_t>(i)] = keyed[static_cast<std::size_t>(i - cs)].second;
              if (i > cs && keyed[static_cast<std::size_t>(i - cs)].first != keyed[static_cast<std::size_t>(i - cs - 1)].first) {
                p.cell_start |= 1U << i;
              }
            }
            changed = true;
          }
        }
        cs = ce;
      }
    }
  }
}

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Graph& g) : g_(g), n_(g.order()) {}

  void run() {
    OrderedPartition root;
    for (int v = 0; v < n_; ++v) root.order[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
    root.cell_start = 1U;
    std::vector<int> prefix;
    search(root, prefix);
  }

  std::uint64_t best_code() const { return best_code_; }
  const Labeling& best_order() const { return best_order_; }

 private:
  void search(OrderedPartition p, std::vector<int>& prefix) {
    refine(g_, p);
    int target = -1;
    int target_end = -1;
    for (int s = 0; s < n_;) {
      const int e = cell_end(p, s, n_);
      if (e - s > 1) {
        target = s;
        target_end = e;
        break;
      }
      s = e;
    }
    if (target < 0) {
      leaf(p.order);
      return;
    }
    std::vector<int> tried;
    const Labeling cell_order = p.order;
    for (int i = target; i < target_end; ++i) {
      const int v = cell_order[static_cast<std::size_t>(i)];
      if (!tried.empty() && equivalent_to_tried(v, tried, prefix)) continue;
      tried.push_back(v);
      OrderedPartition child = p;
      // Move v to the front of the target cell and make it a singleton.
      int pos = target;
      while (child.order[static_cast<std::size_t>(pos)] != v) ++pos;
      std::swap(child.order[static_cast<std::size_t>(pos)], child.order[static_cast<std::size_t>(target)]);
      std::sort(child.order.begin() + target + 1, child.order.begin() + target_end);
      child.cell_start |= 1U << (target + 1);
      prefix.push_back(v);
      search(child, prefix);
      prefix.pop_back();
    }
  }

  // Union-find over the group generated by known automorphisms that fix `prefix` pointwise.
  bool equivalent_to_tried(int v, const std::vector<int>& tried, const std::vector<int>& prefix) const {
    std::array<int, kMaxOrder> parent{};
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (const auto& gamma : automorphisms_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(),
                               [&gamma](int u) { return gamma[static_cast<std::size_t>(u)] == u; });
      if (!fixes) continue;
      for (int x = 0; x < n_; ++x) {
        const int a = find(x);
        const int b = find(gamma[static_cast<std::size_t>(x)]);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    }
    const int root = find(v);
    return std::any_of(tried.begin(), tried.end(), [&](int u) { return find(u) == root; });
  }

  void leaf(const Labeling& order) {
    const std::uint64_t code = code_of_order(g_, order);
    if (!have_best_ || code < best_code_) {
      have_best_ = true;
      best_code_ = code;
      best_order_ = order;
      return;
    }
    if (code == best_code_) {
      // order[i] and best_order_[i] play the same role: map one onto the other.
      std::array<int, kMaxOrder> gamma{};
      for (int i = 0; i < n_; ++i) gamma[best_order_[static_cast<std::size_t>(i)]] = order[static_cast<std::size_t>(i)];
      automorphisms_.push_back(gamma);
    }
  }

  const Graph& g_;
  int n_;
  bool have_best_ = false;
  std::uint64_t best_code_ = 0;
  Labeling best_order_{};
  std::vector<std::array<int, kMaxOrder>> automorphisms_;
};

void require_canonical_order(const Graph& g) {
  if (g.order() > kMaxCanonicalOrder) {
    throw ValidationError("canonical labeling supports n <= 11, got n=" + std::to_string(g.order()));
  }
}

}  // namespace

std::uint64_t canonical_code(const Graph& g) {
  require_canonical_order(g);
  if (g.order() <= 1) return 0;
  CanonicalSearch search(g);
  search.run();
  return search.best_code();
}

Graph graph_from_code(int n, std::uint64_t code) {
  Graph g(n);
  int remaining = n * (n - 1) / 2;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      --remaining;
      if ((code >> remaining) & 1U) g.add_edge(i, j);
    }
  }
  return g;
}

Graph canonical_form(const Graph& g) { return graph_from_code(g.order(), canonical_code(g)); }

CanonicalCertificate canonical_certificate(const Graph& g) { return {encode_graph6(canonical_form(g))}; }

// ---------------------------------------------------------------------------
// Enumeration by edge augmentation

void enumerate_connected_graphs(int n, const std::function<void(const Graph&)>& visit) {
  if (n < 1 || n > 9) throw ValidationError("built-in enumeration supports 1 <= n <= 9, got " + std::to_string(n));
  const int pairs = n * (n - 1) / 2;
  std::vector<std::uint64_t> level{canonical_code(Graph(n))};
  std::vector<std::uint64_t> connected;
  for (int m = 0;; ++m) {
    for (std::uint64_t code : level) {
      if (is_connected(graph_from_code(n, code))) connected.push_back(code);
    }
    if (m == pairs) break;
    std::vector<std::uint64_t> next;
    for (std::uint64_t code : level) {
      Graph g = graph_from_code(n, code);
      for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
          if (g.has_edge(i, j)) continue;
          g.add_edge(i, j);
          next.push_back(canonical_code(g));
          g.remove_edge(i, j);
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  std::sort(connected.begin(), connected.end());
  for (std::uint64_t code : connected) visit(graph_from_code(n, code));
}

std::vector<Graph> connected_graphs(int n) {
  std::vector<Graph> out;
  enumerate_connected_graphs(n, [&out](const Graph& g) { out.push_back(g); });
  return out;
}

// ---------------------------------------------------------------------------
// Structural queries

bool is_connected_subset(const Graph& g, VertexMask mask) {
  if (mask == 0) return false;
  VertexMask seen = bit(lowest_vertex(mask));
  VertexMask frontier = seen;
  while (frontier) {
    const int v = lowest_vertex(frontier);
    frontier &= frontier - 1;
    const VertexMask fresh = g.neighbors(v) & mask & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return seen == mask;
}

bool is_connected(const Graph& g) { return g.order() == 0 || is_connected_subset(g, g.vertices()); }

Graph complement(const Graph& g) {
  Graph h(g.order());
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v)
      if (!g.has_edge(u, v)) h.add_edge(u, v);
  return h;
}

Graph quotient(const Graph& g, std::span<const VertexMask> blocks) {
  VertexMask covered = 0;
  for (VertexMask b : blocks) {
    if (b == 0 || (covered & b) || (b & ~g.vertices())) throw ValidationError("quotient blocks do not partition the vertex set");
    covered |= b;
  }
  if (covered != g.vertices()) throw ValidationError("quotient blocks do not cover the vertex set");
  const int k = static_cast<int>(blocks.size());
  Graph q(k);
  for (int a = 0; a < k; ++a) {
    VertexMask reach = 0;
    VertexMask members = blocks[static_cast<std::size_t>(a)];
    while (members) {
      const int v = lowest_vertex(members);
      members &= members - 1;
      reach |= g.neighbors(v);
    }
    for (int b = a + 1; b < k; ++b) {
      if (reach & blocks[static_cast<std::size_t>(b)]) q.add_edge(a, b);
    }
  }
  return q;
}

}  // namespace epos
