#include "epos/certificates.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_set>

#include "epos/error.hpp"

namespace epos {

namespace {

void max_independent(const Graph& g, VertexMask candidates, int size, int& best) {
  if (candidates == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + popcount(candidates) <= best) return;
  // Branch on a vertex of maximum degree within the candidates; isolated
  // candidates are always taken.
  int pick = -1;
  int pick_deg = -1;
  VertexMask isolated = 0;
  for (VertexMask rest = candidates; rest; rest &= rest - 1) {
    const int v = lowest_vertex(rest);
    const int d = popcount(g.neighbors(v) & candidates);
    if (d == 0) isolated |= bit(v);
    if (d > pick_deg) {
      pick = v;
      pick_deg = d;
    }
  }
  if (isolated) {
    max_independent(g, candidates & ~isolated, size + popcount(isolated), best);
    return;
  }
  max_independent(g, candidates & ~bit(pick) & ~g.neighbors(pick), size + 1, best);
  max_independent(g, candidates & ~bit(pick), size, best);
}

}  // namespace

int independence_number(const Graph& g) {
  int best = 0;
  max_independent(g, g.vertices(), 0, best);
  return best;
}

bool has_triangle(const Graph& g) {
  for (int u = 0; u < g.order(); ++u) {
    for (VertexMask nb = g.neighbors(u); nb; nb &= nb - 1) {
      const int v = lowest_vertex(nb);
      if (v > u && (g.neighbors(u) & g.neighbors(v))) return true;
    }
  }
  return false;
}

bool is_co_triangle_free(const Graph& g) {
  const bool by_triangles = !has_triangle(complement(g));
  const bool by_alpha = independence_number(g) <= 2;
  if (by_triangles != by_alpha) throw InternalError("co-triangle-free routes disagree on " + encode_graph6(g));
  return by_triangles;
}

bool alpha_condition_holds(const Graph& g) {
  const int n = g.order();
  return independence_number(g) == (n + 1) / 2 + 1;
}

bool connected_partition_exists(const Graph& g, const IntPartition& lambda) {
  const int n = g.order();
  if (lambda.weight() != n) {
    throw ValidationError("partition " + lambda.to_string() + " has weight " + std::to_string(lambda.weight()) +
                          ", graph has " + std::to_string(n) + " vertices");
  }
  if (n > kMaxDegree) throw ValidationError("connected_partition_exists supports n <= 11");
  if (n == 0) return true;
  // State: used-vertex mask plus remaining block sizes (counts packed 4 bits per size).
  std::uint64_t sizes = 0;
  for (int p : lambda.parts()) sizes += std::uint64_t{1} << (4 * p);
  std::unordered_set<std::uint64_t> failed;

  std::function<bool(VertexMask, std::uint64_t)> solve = [&](VertexMask used, std::uint64_t remaining) -> bool {
    if (used == g.vertices()) return true;
    const std::uint64_t key = (remaining << 16) | used;
    if (failed.contains(key)) return false;
    const VertexMask free = g.vertices() & ~used;
    const int anchor = lowest_vertex(free);
    const VertexMask others = free & ~bit(anchor);
    for (int s = 1; s <= n; ++s) {
      if (((remaining >> (4 * s)) & 0xF) == 0) continue;
      const std::uint64_t next_remaining = remaining - (std::uint64_t{1} << (4 * s));
      // Grow: all (s-1)-subsets of the free vertices joined to the anchor.
      if (s == 1) {
        if (solve(used | bit(anchor), next_remaining)) return true;
        continue;
      }
      for (VertexMask sub = others;; sub = (sub - 1) & others) {
        if (popcount(sub) == s - 1) {
          const VertexMask block = sub | bit(anchor);
          if (is_connected_subset(g, block) && solve(used | block, next_remaining)) return true;
        }
        if (sub == 0) break;
      }
    }
    failed.insert(key);
    return false;
  };
  return solve(0, sizes);
}

WitnessFamily parse_witness_family(const std::string& name) {
  if (name == "pairs_and_singleton") return WitnessFamily::pairs_and_singleton;
  if (name == "pairs_and_triple") return WitnessFamily::pairs_and_triple;
  if (name == "both") return WitnessFamily::both;
  throw ValidationError("unknown witness family \"" + name + "\" (expected pairs_and_singleton, pairs_and_triple, both)");
}

std::string to_string(WitnessFamily family) {
  switch (family) {
    case WitnessFamily::pairs_and_singleton: return "pairs_and_singleton";
    case WitnessFamily::pairs_and_triple: return "pairs_and_triple";
    case WitnessFamily::both: return "both";
  }
  return "both";
}

std::vector<IntPartition> witness_shapes(int n, WitnessFamily family) {
  if (n < 1) throw ValidationError("witness shapes need n >= 1");
  if (n % 2 == 0) return {IntPartition(std::vector<int>(static_cast<std::size_t>(n / 2), 2))};
  std::vector<IntPartition> shapes;
  if (family != WitnessFamily::pairs_and_triple) {
    std::vector<int> parts(static_cast<std::size_t>((n - 1) / 2), 2);
    parts.push_back(1);
    shapes.emplace_back(std::move(parts));
  }
  if (family != WitnessFamily::pairs_and_singleton && n >= 3) {
    std::vector<int> parts(static_cast<std::size_t>((n - 3) / 2), 2);
    parts.push_back(3);
    shapes.emplace_back(std::move(parts));
  }
  return shapes;
}

bool large_alpha_certificate(const Graph& g, WitnessFamily family) {
  if (!alpha_condition_holds(g)) {
    throw ValidationError("large_alpha_certificate requires independence number ceil(n/2)+1 (graph " + encode_graph6(g) + ")");
  }
  const auto shapes = witness_shapes(g.order(), family);
  return std::none_of(shapes.begin(), shapes.end(),
                      [&g](const IntPartition& shape) { return connected_partition_exists(g, shape); });
}

int count_claws(const Graph& g) {
  int claws = 0;
  for (int c = 0; c < g.order(); ++c) {
    const VertexMask nb = g.neighbors(c);
    for (VertexMask a = nb; a; a &= a - 1) {
      const int x = lowest_vertex(a);
      const VertexMask after_x = nb & ~((bit(x) << 1) - 1) & ~g.neighbors(x);
      for (VertexMask b = after_x; b; b &= b - 1) {
        const int y = lowest_vertex(b);
        claws += popcount(after_x & ~((bit(y) << 1) - 1) & ~g.neighbors(y));
      }
    }
  }
  return claws;
}

namespace {

// Block 0 is the center, blocks 1..3 the leaves; leaf labels are opened in order.
class ClawContraction {
 public:
  explicit ClawContraction(const Graph& g) : g_(g), n_(g.order()) {}

  bool search(int v, int leaves_open) {
    if (v == n_) return leaves_open == 3 && complete();
    // Not enough vertices left to open the remaining leaves, or the center is still empty.
    if (3 - leaves_open > n_ - v) return false;
    for (int b = 0; b <= std::min(3, leaves_open + 1); ++b) {
      if (b >= 1) {
        bool clash = false;
        for (int other = 1; other <= leaves_open; ++other) {
          if (other != b && (g_.neighbors(v) & blocks_[static_cast<std::size_t>(other)])) clash = true;
        }
        if (clash) continue;
      }
      blocks_[static_cast<std::size_t>(b)] |= bit(v);
      if (search(v + 1, std::max(leaves_open, b))) return true;
      blocks_[static_cast<std::size_t>(b)] &= ~bit(v);
    }
    return false;
  }

 private:
  bool complete() const {
    if (blocks_[0] == 0) return false;
    VertexMask center_reach = 0;
    for (VertexMask m = blocks_[0]; m; m &= m - 1) center_reach |= g_.neighbors(lowest_vertex(m));
    for (std::size_t b = 0; b < 4; ++b) {
      if (!is_connected_subset(g_, blocks_[b])) return false;
      if (b > 0 && !(center_reach & blocks_[b])) return false;
    }
    return true;
  }

  const Graph& g_;
  int n_;
  std::array<VertexMask, 4> blocks_{};
};

}  // namespace

bool is_claw_contractible(const Graph& g) {
  if (g.order() < 4) throw ValidationError("claw-contractibility needs at least 4 vertices");
  return ClawContraction(g).search(0, 0);
}

}  // namespace epos
