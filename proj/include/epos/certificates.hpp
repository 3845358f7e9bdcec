#pragma once

#include <string>
#include <vector>

#include "epos/graph.hpp"
#include "epos/partition.hpp"

namespace epos {

int independence_number(const Graph& g);
bool has_triangle(const Graph& g);
/// complement(g) is triangle-free; checked both via triangles and via α(g) <= 2.
bool is_co_triangle_free(const Graph& g);
/// α(g) = ceil(n/2) + 1.
bool alpha_condition_holds(const Graph& g);

/// V splits into blocks of sizes λ_1..λ_k, each inducing a connected subgraph.
bool connected_partition_exists(const Graph& g, const IntPartition& lambda);

/// Which odd-n reading of "all parts 2, or all but the last part 2" to test.
enum class WitnessFamily { pairs_and_singleton, pairs_and_triple, both };

WitnessFamily parse_witness_family(const std::string& name);
std::string to_string(WitnessFamily family);
/// Even n: {(2^{n/2})}. Odd n: (2^{(n-1)/2},1) and/or (3,2^{(n-3)/2}).
std::vector<IntPartition> witness_shapes(int n, WitnessFamily family);

/// True when no witness shape admits a connected partition. Requires
/// alpha_condition_holds(g); throws ValidationError otherwise.
bool large_alpha_certificate(const Graph& g, WitnessFamily family = WitnessFamily::both);

/// Induced K_{1,3} subgraphs: Σ_v independent 3-subsets of N(v).
int count_claws(const Graph& g);

/// V partitions into four connected blocks whose quotient is exactly K_{1,3}. Requires n >= 4.
bool is_claw_contractible(const Graph& g);

}  // namespace epos
