#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "epos/graph.hpp"
#include "epos/partition.hpp"
#include "epos/symfunc.hpp"

namespace epos {

/// Partition of the vertex set into independent sets.
struct StablePartition {
  std::vector<VertexMask> blocks;
  IntPartition type() const;
};

/// Visits every stable partition exactly once (vertices placed in index order,
/// each into an existing compatible block or a new one).
void for_each_stable_partition(const Graph& g, const std::function<void(std::span<const VertexMask>)>& visit);
std::vector<StablePartition> stable_partitions(const Graph& g);

/// Monomial expansion of the chromatic symmetric function: the coefficient of m_λ
/// is (#stable partitions of type λ) · ∏ r_i! with r_i the multiplicity of i in λ.
SymFunc csf_m(const Graph& g);
SymFunc csf_e(const Graph& g);
bool is_e_positive(const Graph& g);

/// Proper k-colorings counted by direct enumeration (k <= 4, n <= 8).
std::int64_t chromatic_count_brute(const Graph& g, int k);
/// Proper k-colorings from the e-expansion: Σ a_λ e_λ(1^k).
std::int64_t chromatic_count_via_e(const Graph& g, int k);

/// One row of the label file.
struct LabelRecord {
  std::string graph6;
  bool e_positive = false;
  std::int64_t min_e_coeff = 0;
  /// A most-negative λ (first in canonical order); empty when e-positive.
  std::string witness_partition;
};

LabelRecord label_graph(const Graph& g);
LabelRecord label_from_e(std::string graph6, const SymFunc& e);

}  // namespace epos
