#include "epos/csf.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "epos/checked.hpp"
#include "epos/error.hpp"

namespace epos {

IntPartition StablePartition::type() const {
  std::vector<int> sizes;
  sizes.reserve(blocks.size());
  for (VertexMask b : blocks) sizes.push_back(popcount(b));
  return IntPartition(std::move(sizes));
}

namespace {

void place(const Graph& g, int v, std::vector<VertexMask>& blocks,
           const std::function<void(std::span<const VertexMask>)>& visit) {
  if (v == g.order()) {
    visit(blocks);
    return;
  }
  const VertexMask nb = g.neighbors(v);
  for (auto& block : blocks) {
    if (block & nb) continue;
    block |= bit(v);
    place(g, v + 1, blocks, visit);
    block &= ~bit(v);
  }
  blocks.push_back(bit(v));
  place(g, v + 1, blocks, visit);
  blocks.pop_back();
}

// Counts stable partitions by type; the type is tracked as a histogram of block
// sizes packed 4 bits per size.
class TypeCounter {
 public:
  explicit TypeCounter(const Graph& g) : g_(g), n_(g.order()) {}

  std::vector<std::int64_t> run() {
    const auto& parts = partitions_of(n_);
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::uint64_t key = 0;
      for (int p : parts[i].parts()) key += std::uint64_t{1} << (4 * p);
      index.emplace(key, i);
    }
    counts_.assign(parts.size(), 0);
    index_ = &index;
    recurse(0, 0);
    return counts_;
  }

 private:
  void recurse(int v, int nblocks) {
    if (v == n_) {
      std::uint64_t key = 0;
      for (int b = 0; b < nblocks; ++b) key += std::uint64_t{1} << (4 * popcount(blocks_[static_cast<std::size_t>(b)]));
      ++counts_[index_->at(key)];
      return;
    }
    const VertexMask nb = g_.neighbors(v);
    for (int b = 0; b < nblocks; ++b) {
      auto& block = blocks_[static_cast<std::size_t>(b)];
      if (block & nb) continue;
      block |= bit(v);
      recurse(v + 1, nblocks);
      block &= ~bit(v);
    }
    blocks_[static_cast<std::size_t>(nblocks)] = bit(v);
    recurse(v + 1, nblocks + 1);
    blocks_[static_cast<std::size_t>(nblocks)] = 0;
  }

  const Graph& g_;
  int n_;
  std::array<VertexMask, kMaxOrder> blocks_{};
  std::vector<std::int64_t> counts_;
  const std::unordered_map<std::uint64_t, std::size_t>* index_ = nullptr;
};

void require_csf_order(const Graph& g) {
  if (g.order() < 1 || g.order() > kMaxDegree) {
    throw ValidationError("chromatic symmetric functions supported for 1 <= n <= 11, got n=" + std::to_string(g.order()));
  }
}

}  // namespace

void for_each_stable_partition(const Graph& g, const std::function<void(std::span<const VertexMask>)>& visit) {
  std::vector<VertexMask> blocks;
  blocks.reserve(static_cast<std::size_t>(g.order()));
  place(g, 0, blocks, visit);
}

std::vector<StablePartition> stable_partitions(const Graph& g) {
  std::vector<StablePartition> out;
  for_each_stable_partition(g, [&out](std::span<const VertexMask> blocks) {
    out.push_back(StablePartition{{blocks.begin(), blocks.end()}});
  });
  return out;
}

SymFunc csf_m(const Graph& g) {
  require_csf_order(g);
  const auto counts = TypeCounter(g).run();
  const auto& parts = partitions_of(g.order());
  SymFunc f = SymFunc::zero(g.order(), Basis::monomial);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (counts[i] == 0) continue;
    std::int64_t weight = 1;
    for (int r : parts[i].multiplicities()) weight = checked_mul(weight, factorial(r));
    f.coeffs[i] = checked_mul(counts[i], weight);
  }
  return f;
}

SymFunc csf_e(const Graph& g) { return m_to_e(csf_m(g)); }

bool is_e_positive(const Graph& g) { return csf_e(g).min_coeff() >= 0; }

std::int64_t chromatic_count_brute(const Graph& g, int k) {
  const int n = g.order();
  if (k < 0 || k > 4) throw ValidationError("chromatic_count_brute supports 0 <= k <= 4");
  if (n > 8) throw ValidationError("chromatic_count_brute supports n <= 8");
  if (n == 0) return 1;
  if (k == 0) return 0;
  std::array<int, kMaxOrder> color{};
  std::int64_t total = 0;
  // Odometer over k^n assignments.
  while (true) {
    bool proper = true;
    for (int u = 0; u < n && proper; ++u) {
      VertexMask nb = g.neighbors(u) & ~((bit(u) << 1) - 1);  // only v > u
      while (nb) {
        const int v = lowest_vertex(nb);
        nb &= nb - 1;
        if (color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)]) {
          proper = false;
          break;
        }
      }
    }
    if (proper) ++total;
    int pos = 0;
    while (pos < n && ++color[static_cast<std::size_t>(pos)] == k) color[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  return total;
}

std::int64_t chromatic_count_via_e(const Graph& g, int k) {
  const SymFunc e = csf_e(g);
  const auto& parts = partitions_of(g.order());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (e.coeffs[i] == 0) continue;
    total = checked_add(total, checked_mul(e.coeffs[i], e_eval_ones(parts[i], k)));
  }
  return total;
}

LabelRecord label_graph(const Graph& g) { return label_from_e(encode_graph6(g), csf_e(g)); }

LabelRecord label_from_e(std::string graph6, const SymFunc& e) {
  LabelRecord rec;
  rec.graph6 = std::move(graph6);
  rec.min_e_coeff = e.min_coeff();
  rec.e_positive = rec.min_e_coeff >= 0;
  if (!rec.e_positive) {
    const auto it = std::min_element(e.coeffs.begin(), e.coeffs.end());
    rec.witness_partition = partitions_of(e.degree)[static_cast<std::size_t>(it - e.coeffs.begin())].to_semicolon_string();
  }
  return rec;
}

}  // namespace epos
