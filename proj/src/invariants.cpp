#include "epos/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include "epos/certificates.hpp"
#include "epos/error.hpp"
#include "epos/linalg.hpp"

namespace epos {

namespace {

FeatureCatalog build_catalog() {
  using K = FeatureKind;
  FeatureCatalog c;
  c.features = {
      {"n_vertices", K::discrete, "number of vertices"},
      {"n_edges", K::discrete, "number of edges"},
      {"density", K::continuous, "m / C(n,2); 0 when n = 1"},
      {"min_degree", K::discrete, "minimum vertex degree"},
      {"max_degree", K::discrete, "maximum vertex degree"},
      {"mean_degree", K::continuous, "2m / n"},
      {"degree_std", K::continuous, "population standard deviation of degrees (divide by n)"},
      {"diameter", K::discrete, "maximum eccentricity"},
      {"radius", K::discrete, "minimum eccentricity"},
      {"avg_shortest_path", K::continuous, "mean distance over unordered vertex pairs; 0 when n = 1"},
      {"wiener_index", K::discrete, "sum of distances over unordered vertex pairs"},
      {"girth", K::discrete, "length of a shortest cycle; 0 for forests"},
      {"triangle_count", K::discrete, "number of triangles"},
      {"num_claws", K::discrete, "number of induced K_{1,3}"},
      {"count_C4", K::discrete, "number of 4-cycles (not necessarily induced)"},
      {"independence_number", K::discrete, "size of a largest independent set"},
      {"clique_number", K::discrete, "size of a largest clique"},
      {"chromatic_number", K::discrete, "minimum number of colors in a proper coloring"},
      {"clique_cover_number", K::discrete, "chromatic number of the complement"},
      {"matching_number", K::discrete, "size of a maximum matching"},
      {"domination_number", K::discrete, "size of a smallest dominating set"},
      {"vertex_connectivity", K::discrete, "minimum vertices whose removal disconnects; n-1 for complete graphs"},
      {"edge_connectivity", K::discrete, "minimum edges whose removal disconnects; 0 when n = 1"},
      {"num_cut_vertices", K::discrete, "articulation points"},
      {"num_bridges", K::discrete, "edges whose removal disconnects"},
      {"num_leaves", K::discrete, "vertices of degree 1"},
      {"max_core_number", K::discrete, "degeneracy (largest k with a nonempty k-core)"},
      {"num_maximal_cliques", K::discrete, "number of maximal cliques"},
      {"is_regular", K::discrete, "1 if all degrees are equal"},
      {"is_bipartite", K::discrete, "1 if 2-colorable"},
      {"complement_triangle_count", K::discrete, "triangles in the complement (independent triples)"},
      {"transitivity", K::continuous, "3 * triangles / connected triples; 0 when there are no triples"},
      {"avg_clustering", K::continuous, "mean local clustering; vertices of degree < 2 count as 0"},
      {"degree_assortativity", K::continuous, "Pearson correlation of degrees across edges; 0 when degenerate"},
      {"mean_betweenness", K::continuous, "mean betweenness, normalized by (n-1)(n-2)/2; 0 when n <= 2"},
      {"mean_closeness", K::continuous, "mean of (n-1) / total distance; 0 when n = 1"},
      {"spectral_radius", K::continuous, "largest adjacency eigenvalue"},
      {"second_adj_eigenvalue", K::continuous, "second largest adjacency eigenvalue; 0 when n = 1"},
      {"smallest_adj_eigenvalue", K::continuous, "smallest adjacency eigenvalue"},
      {"graph_energy", K::continuous, "sum of absolute adjacency eigenvalues"},
      {"algebraic_connectivity", K::continuous, "second smallest Laplacian eigenvalue; 0 when n = 1"},
      {"laplacian_spectral_radius", K::continuous, "largest Laplacian eigenvalue"},
      {"laplacian_energy", K::continuous, "sum of |mu_i - 2m/n| over Laplacian eigenvalues"},
      {"log_spanning_tree_count", K::continuous, "natural log of the number of spanning trees"},
  };
  return c;
}

using DistanceMatrix = std::array<std::array<int, kMaxOrder>, kMaxOrder>;

DistanceMatrix distances(const Graph& g) {
  DistanceMatrix d{};
  const int n = g.order();
  for (int s = 0; s < n; ++s) {
    auto& row = d[static_cast<std::size_t>(s)];
    row.fill(-1);
    row[static_cast<std::size_t>(s)] = 0;
    VertexMask frontier = bit(s);
    VertexMask seen = frontier;
    for (int dist = 1; frontier; ++dist) {
      VertexMask next = 0;
      for (VertexMask f = frontier; f; f &= f - 1) next |= g.neighbors(lowest_vertex(f));
      next &= ~seen;
      for (VertexMask m = next; m; m &= m - 1) row[static_cast<std::size_t>(lowest_vertex(m))] = dist;
      seen |= next;
      frontier = next;
    }
  }
  return d;
}

bool colorable(const Graph& g, int k, int v, std::array<int, kMaxOrder>& color) {
  if (v == g.order()) return true;
  // Colors used so far bound the useful choices (symmetry breaking).
  int used = 0;
  for (int u = 0; u < v; ++u) used = std::max(used, color[static_cast<std::size_t>(u)] + 1);
  for (int c = 0; c < std::min(k, used + 1); ++c) {
    bool ok = true;
    for (VertexMask nb = g.neighbors(v) & (bit(v) - 1); nb; nb &= nb - 1) {
      if (color[static_cast<std::size_t>(lowest_vertex(nb))] == c) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    color[static_cast<std::size_t>(v)] = c;
    if (colorable(g, k, v + 1, color)) return true;
  }
  return false;
}

// Bron–Kerbosch with pivoting over bitmask candidate sets.
int count_maximal_cliques(const Graph& g, VertexMask p, VertexMask x) {
  if (p == 0 && x == 0) return 1;
  // Tomita pivot: vertex of P ∪ X with most neighbors in P.
  int pivot = -1;
  int best = -1;
  for (VertexMask m = p | x; m; m &= m - 1) {
    const int u = lowest_vertex(m);
    const int c = popcount(g.neighbors(u) & p);
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  int total = 0;
  for (VertexMask cand = p & ~g.neighbors(pivot); cand; cand &= cand - 1) {
    const int v = lowest_vertex(cand);
    total += count_maximal_cliques(g, p & g.neighbors(v), x & g.neighbors(v));
    p &= ~bit(v);
    x |= bit(v);
  }
  return total;
}

double mean_betweenness(const Graph& g) {
  const int n = g.order();
  if (n <= 2) return 0.0;
  std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
  // Brandes accumulation over BFS from every source.
  for (int s = 0; s < n; ++s) {
    std::vector<int> order;
    std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    sigma[static_cast<std::size_t>(s)] = 1.0;
    dist[static_cast<std::size_t>(s)] = 0;
    std::vector<int> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      order.push_back(v);
      for (VertexMask nb = g.neighbors(v); nb; nb &= nb - 1) {
        const int w = lowest_vertex(nb);
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
        }
      }
    }
    std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (VertexMask nb = g.neighbors(w); nb; nb &= nb - 1) {
        const int v = lowest_vertex(nb);
        if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(w)] - 1) {
          delta[static_cast<std::size_t>(v)] +=
              sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] * (1.0 + delta[static_cast<std::size_t>(w)]);
        }
      }
      if (w != s) bc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
    }
  }
  // Ordered-pair sums count each unordered pair twice; normalize by (n-1)(n-2).
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  double total = 0.0;
  for (double b : bc) total += b * scale;
  return total / n;
}

double sum_abs(const std::vector<double>& values, double shift) {
  double s = 0.0;
  for (double v : values) s += std::abs(v - shift);
  return s;
}

}  // namespace

std::optional<std::size_t> FeatureCatalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.name);
  return out;
}

const FeatureCatalog& feature_schema() {
  static const FeatureCatalog catalog = build_catalog();
  return catalog;
}

double FeatureVector::operator[](std::string_view name) const {
  const auto idx = feature_schema().index_of(name);
  if (!idx) throw ValidationError("unknown feature \"" + std::string(name) + "\"");
  return values.at(*idx);
}

int chromatic_number(const Graph& g) {
  if (g.order() == 0) return 0;
  std::array<int, kMaxOrder> color{};
  for (int k = 1;; ++k) {
    color.fill(0);
    if (colorable(g, k, 0, color)) return k;
  }
}

int matching_number(const Graph& g) {
  const int n = g.order();
  std::vector<std::int8_t> memo(std::size_t{1} << n, -1);
  std::function<int(VertexMask)> best = [&](VertexMask free) -> int {
    if (popcount(free) < 2) return 0;
    auto& slot = memo[free];
    if (slot >= 0) return slot;
    const int v = lowest_vertex(free);
    const VertexMask rest = free & ~bit(v);
    int result = best(rest);
    for (VertexMask nb = g.neighbors(v) & rest; nb; nb &= nb - 1) {
      result = std::max(result, 1 + best(rest & ~bit(lowest_vertex(nb))));
    }
    slot = static_cast<std::int8_t>(result);
    return result;
  };
  return best(g.vertices());
}

int domination_number(const Graph& g) {
  const int n = g.order();
  int best = n;
  for (VertexMask s = 1; s < (VertexMask{1} << n); ++s) {
    if (popcount(s) >= best) continue;
    VertexMask covered = s;
    for (VertexMask m = s; m; m &= m - 1) covered |= g.neighbors(lowest_vertex(m));
    if (covered == g.vertices()) best = popcount(s);
  }
  return best;
}

int vertex_connectivity(const Graph& g) {
  const int n = g.order();
  if (g.edge_count() == n * (n - 1) / 2) return n - 1;
  int best = n - 1;
  for (VertexMask s = 0; s < (VertexMask{1} << n); ++s) {
    if (popcount(s) >= best || popcount(s) > n - 2) continue;
    if (!is_connected_subset(g, g.vertices() & ~s)) best = popcount(s);
  }
  return best;
}

int edge_connectivity(const Graph& g) {
  const int n = g.order();
  if (n <= 1) return 0;
  int best = g.edge_count();
  // Bipartitions (S, V\S) with vertex 0 in S.
  for (VertexMask s = 1; s < (VertexMask{1} << n) - 1; s += 2) {
    int cut = 0;
    for (VertexMask m = s; m; m &= m - 1) cut += popcount(g.neighbors(lowest_vertex(m)) & ~s);
    best = std::min(best, cut);
  }
  return best;
}

int girth(const Graph& g) {
  const int n = g.order();
  int best = 0;
  for (int s = 0; s < n; ++s) {
    std::array<int, kMaxOrder> dist{};
    std::array<int, kMaxOrder> parent{};
    dist.fill(-1);
    dist[static_cast<std::size_t>(s)] = 0;
    parent[static_cast<std::size_t>(s)] = -1;
    std::vector<int> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (VertexMask nb = g.neighbors(u); nb; nb &= nb - 1) {
        const int w = lowest_vertex(nb);
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          parent[static_cast<std::size_t>(w)] = u;
          queue.push_back(w);
        } else if (parent[static_cast<std::size_t>(u)] != w) {
          const int len = dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(w)] + 1;
          if (best == 0 || len < best) best = len;
        }
      }
    }
  }
  return best;
}

int triangle_count(const Graph& g) {
  int t = 0;
  for (int u = 0; u < g.order(); ++u) {
    for (VertexMask nb = g.neighbors(u) & ~((bit(u) << 1) - 1); nb; nb &= nb - 1) {
      const int v = lowest_vertex(nb);
      t += popcount(g.neighbors(u) & g.neighbors(v) & ~((bit(v) << 1) - 1));
    }
  }
  return t;
}

std::int64_t spanning_tree_count(const Graph& g) {
  const int n = g.order();
  if (n <= 1) return 1;
  const int m = n - 1;
  // Bareiss fraction-free elimination on the Laplacian with row/column 0 removed.
  std::vector<std::vector<__int128>> a(static_cast<std::size_t>(m), std::vector<__int128>(static_cast<std::size_t>(m), 0));
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          i == j ? g.degree(i) : (g.has_edge(i, j) ? -1 : 0);
    }
  }
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < m; ++k) {
    auto ku = static_cast<std::size_t>(k);
    if (a[ku][ku] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < m; ++r) {
        if (a[static_cast<std::size_t>(r)][ku] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(a[ku], a[static_cast<std::size_t>(swap_row)]);
      sign = -sign;
    }
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < m; ++j) {
        auto iu = static_cast<std::size_t>(i);
        auto ju = static_cast<std::size_t>(j);
        a[iu][ju] = (a[iu][ju] * a[ku][ku] - a[iu][ku] * a[ku][ju]) / prev;
      }
    }
    prev = a[ku][ku];
  }
  return static_cast<std::int64_t>(sign * a[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m - 1)]);
}

FeatureVector compute_features(const Graph& g) {
  const int n = g.order();
  if (n < 1 || n > 11) throw ValidationError("features supported for 1 <= n <= 11, got n=" + std::to_string(n));
  if (!is_connected(g)) throw ValidationError("features require a connected graph (" + encode_graph6(g) + ")");

  const double nd = n;
  const int m = g.edge_count();
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) deg[static_cast<std::size_t>(v)] = g.degree(v);
  const double mean_deg = 2.0 * m / nd;
  double var = 0.0;
  for (int d : deg) var += (d - mean_deg) * (d - mean_deg);
  var /= nd;

  const DistanceMatrix dist = distances(g);
  int diameter = 0;
  int radius = n == 1 ? 0 : n;
  long wiener = 0;
  double closeness_sum = 0.0;
  for (int u = 0; u < n; ++u) {
    int ecc = 0;
    long total = 0;
    for (int v = 0; v < n; ++v) {
      const int d = dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      ecc = std::max(ecc, d);
      total += d;
      if (v > u) wiener += d;
    }
    diameter = std::max(diameter, ecc);
    radius = std::min(radius, ecc);
    if (total > 0) closeness_sum += (nd - 1.0) / static_cast<double>(total);
  }
  const double pairs = nd * (nd - 1.0) / 2.0;

  const int triangles = triangle_count(g);
  long connected_triples = 0;
  double clustering_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    const int d = deg[static_cast<std::size_t>(v)];
    connected_triples += static_cast<long>(d) * (d - 1) / 2;
    if (d >= 2) {
      int local = 0;
      for (VertexMask nb = g.neighbors(v); nb; nb &= nb - 1) local += popcount(g.neighbors(lowest_vertex(nb)) & g.neighbors(v));
      clustering_sum += (local / 2.0) / (d * (d - 1) / 2.0);
    }
  }

  long c4_twice = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const long c = popcount(g.neighbors(u) & g.neighbors(v));
      c4_twice += c * (c - 1) / 2;
    }
  }

  // Degree assortativity over both orientations of every edge.
  double assort = 0.0;
  if (m > 0) {
    double sx = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (auto [u, v] : g.edges()) {
      const double a = deg[static_cast<std::size_t>(u)];
      const double b = deg[static_cast<std::size_t>(v)];
      sx += a + b;
      sxx += a * a + b * b;
      sxy += 2.0 * a * b;
    }
    const double cnt = 2.0 * m;
    const double mean = sx / cnt;
    const double denom = sxx / cnt - mean * mean;
    if (denom > 1e-12) assort = (sxy / cnt - mean * mean) / denom;
  }

  int cut_vertices = 0;
  if (n >= 3) {
    for (int v = 0; v < n; ++v) cut_vertices += is_connected_subset(g, g.vertices() & ~bit(v)) ? 0 : 1;
  }
  int bridges = 0;
  for (auto [u, v] : g.edges()) {
    Graph h = g;
    h.remove_edge(u, v);
    bridges += is_connected(h) ? 0 : 1;
  }

  // Degeneracy by repeatedly removing a minimum-degree vertex.
  int core = 0;
  for (VertexMask alive = g.vertices(); alive;) {
    int pick = -1;
    int pick_deg = n + 1;
    for (VertexMask a = alive; a; a &= a - 1) {
      const int v = lowest_vertex(a);
      const int d = popcount(g.neighbors(v) & alive);
      if (d < pick_deg) {
        pick_deg = d;
        pick = v;
      }
    }
    core = std::max(core, pick_deg);
    alive &= ~bit(pick);
  }

  bool bipartite = true;
  {
    std::array<int, kMaxOrder> side{};
    side.fill(-1);
    side[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t head = 0; head < queue.size() && bipartite; ++head) {
      const int u = queue[head];
      for (VertexMask nb = g.neighbors(u); nb; nb &= nb - 1) {
        const int w = lowest_vertex(nb);
        if (side[static_cast<std::size_t>(w)] < 0) {
          side[static_cast<std::size_t>(w)] = 1 - side[static_cast<std::size_t>(u)];
          queue.push_back(w);
        } else if (side[static_cast<std::size_t>(w)] == side[static_cast<std::size_t>(u)]) {
          bipartite = false;
          break;
        }
      }
    }
  }

  const Graph comp = complement(g);

  SquareMatrix adjacency(static_cast<std::size_t>(n));
  SquareMatrix laplacian(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    laplacian(static_cast<std::size_t>(u), static_cast<std::size_t>(u)) = deg[static_cast<std::size_t>(u)];
    for (int v = 0; v < n; ++v) {
      if (g.has_edge(u, v)) {
        adjacency(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1.0;
        laplacian(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = -1.0;
      }
    }
  }
  const auto adj_eig = eigenvalues_symmetric(adjacency);
  const auto lap_eig = eigenvalues_symmetric(laplacian);

  const auto [min_deg, max_deg] = std::minmax_element(deg.begin(), deg.end());

  FeatureVector fv;
  fv.values = {
      nd,
      static_cast<double>(m),
      n > 1 ? m / pairs : 0.0,
      static_cast<double>(*min_deg),
      static_cast<double>(*max_deg),
      mean_deg,
      std::sqrt(var),
      static_cast<double>(diameter),
      static_cast<double>(radius),
      n > 1 ? static_cast<double>(wiener) / pairs : 0.0,
      static_cast<double>(wiener),
      static_cast<double>(girth(g)),
      static_cast<double>(triangles),
      static_cast<double>(count_claws(g)),
      static_cast<double>(c4_twice / 2),
      static_cast<double>(independence_number(g)),
      static_cast<double>(independence_number(comp)),
      static_cast<double>(chromatic_number(g)),
      static_cast<double>(chromatic_number(comp)),
      static_cast<double>(matching_number(g)),
      static_cast<double>(domination_number(g)),
      static_cast<double>(vertex_connectivity(g)),
      static_cast<double>(edge_connectivity(g)),
      static_cast<double>(cut_vertices),
      static_cast<double>(bridges),
      static_cast<double>(std::count(deg.begin(), deg.end(), 1)),
      static_cast<double>(core),
      static_cast<double>(count_maximal_cliques(g, g.vertices(), 0)),
      *min_deg == *max_deg ? 1.0 : 0.0,
      bipartite ? 1.0 : 0.0,
      static_cast<double>(triangle_count(comp)),
      connected_triples > 0 ? 3.0 * triangles / static_cast<double>(connected_triples) : 0.0,
      clustering_sum / nd,
      assort,
      mean_betweenness(g),
      closeness_sum / nd,
      adj_eig.front(),
      n > 1 ? adj_eig[1] : 0.0,
      adj_eig.back(),
      sum_abs(adj_eig, 0.0),
      n > 1 ? lap_eig[static_cast<std::size_t>(n - 2)] : 0.0,
      lap_eig.front(),
      sum_abs(lap_eig, mean_deg),
      std::log(static_cast<double>(spanning_tree_count(g))),
  };
  if (fv.values.size() != kFeatureCount) throw InternalError("feature vector length mismatch");
  // Spectral values come out of Jacobi with ulp-level noise, so graphs that share
  // an eigenvalue would otherwise disagree in the last bits. Snap to a 1e-9 grid.
  static const std::vector<std::size_t> spectral = [] {
    std::vector<std::size_t> idx;
    for (const char* name : {"spectral_radius", "second_adj_eigenvalue", "smallest_adj_eigenvalue", "graph_energy",
                             "algebraic_connectivity", "laplacian_spectral_radius", "laplacian_energy"})
      idx.push_back(feature_schema().index_of(name).value());
    return idx;
  }();
  for (std::size_t i : spectral) {
    const double snapped = std::round(fv.values[i] * 1e9) / 1e9;
    fv.values[i] = snapped == 0.0 ? 0.0 : snapped;
  }
  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    if (!std::isfinite(fv.values[i])) {
      throw InternalError("non-finite feature " + feature_schema().features[i].name + " for " + encode_graph6(g));
    }
  }
  return fv;
}

}  // namespace epos
