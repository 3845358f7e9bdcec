#include <doctest.h>

#include "epos/certificates.hpp"
#include "epos/csf.hpp"
#include "epos/error.hpp"

using namespace epos;

namespace {

int brute_alpha(const Graph& g) {
  int best = 0;
  for (VertexMask s = 0; s < (VertexMask{1} << g.order()); ++s) {
    bool independent = true;
    for (VertexMask m = s; m && independent; m &= m - 1) independent = (g.neighbors(lowest_vertex(m)) & s) == 0;
    if (independent) best = std::max(best, popcount(s));
  }
  return best;
}

// All set partitions of the vertex set (stable partitions of the edgeless graph).
std::vector<std::vector<VertexMask>> set_partitions(int n) {
  std::vector<std::vector<VertexMask>> out;
  for_each_stable_partition(empty_graph(n), [&out](std::span<const VertexMask> blocks) {
    out.emplace_back(blocks.begin(), blocks.end());
  });
  return out;
}

bool brute_connected_partition(const Graph& g, const IntPartition& lambda) {
  for (const auto& blocks : set_partitions(g.order())) {
    std::vector<int> sizes;
    bool ok = true;
    for (VertexMask b : blocks) {
      sizes.push_back(popcount(b));
      ok = ok && is_connected_subset(g, b);
    }
    if (ok && IntPartition(sizes) == lambda) return true;
  }
  return false;
}

bool brute_claw_contractible(const Graph& g) {
  const auto claw = canonical_certificate(star_graph(3));
  for (const auto& blocks : set_partitions(g.order())) {
    if (blocks.size() != 4) continue;
    bool ok = true;
    for (VertexMask b : blocks) ok = ok && is_connected_subset(g, b);
    if (ok && canonical_certificate(quotient(g, blocks)) == claw) return true;
  }
  return false;
}

int brute_claws(const Graph& g) {
  int count = 0;
  const auto claw = canonical_certificate(star_graph(3));
  for (VertexMask s = 0; s < (VertexMask{1} << g.order()); ++s) {
    if (popcount(s) == 4 && canonical_certificate(g.induced(s)) == claw) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("independence number") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(independence_number(complete_graph(n)) == 1);
    CHECK(independence_number(empty_graph(n)) == n);
  }
  CHECK(independence_number(cycle_graph(5)) == 2);
  CHECK(brute_alpha(cycle_graph(5)) == 2);
  for (int n = 1; n <= 7; ++n)
    for (const Graph& g : connected_graphs(n)) REQUIRE(independence_number(g) == brute_alpha(g));
}

TEST_CASE("adding an edge never increases the independence number") {
  for (const Graph& g : connected_graphs(6)) {
    const int alpha = independence_number(g);
    for (int u = 0; u < 6; ++u)
      for (int v = u + 1; v < 6; ++v) {
        if (g.has_edge(u, v)) continue;
        Graph h = g;
        h.add_edge(u, v);
        REQUIRE(independence_number(h) <= alpha);
      }
  }
}

TEST_CASE("co-triangle-free") {
  CHECK(is_co_triangle_free(complete_graph(5)));
  CHECK_FALSE(is_co_triangle_free(star_graph(3)));
  CHECK(is_co_triangle_free(cycle_graph(5)));
  for (int n = 1; n <= 7; ++n)
    for (const Graph& g : connected_graphs(n)) REQUIRE(is_co_triangle_free(g) == (independence_number(g) <= 2));
}

TEST_CASE("alpha condition") {
  CHECK(alpha_condition_holds(star_graph(3)));
  CHECK_FALSE(alpha_condition_holds(complete_graph(4)));
  CHECK_FALSE(alpha_condition_holds(star_graph(8)));
  CHECK(alpha_condition_holds(star_graph(4)));
  CHECK_FALSE(alpha_condition_holds(complete_bipartite_graph(2, 3)));
}

TEST_CASE("connected partitions") {
  for (const Graph& g : connected_graphs(5)) {
    CHECK(connected_partition_exists(g, IntPartition{5}));
    CHECK(connected_partition_exists(g, IntPartition{1, 1, 1, 1, 1}));
  }
  CHECK(connected_partition_exists(empty_graph(3), IntPartition{1, 1, 1}));
  CHECK(connected_partition_exists(path_graph(4), IntPartition{2, 2}));
  CHECK_FALSE(connected_partition_exists(star_graph(3), IntPartition{2, 2}));
  CHECK_THROWS_AS(connected_partition_exists(path_graph(4), IntPartition{2, 1}), ValidationError);
}

TEST_CASE("connected partitions agree with exhaustive search for n <= 6") {
  for (int n = 1; n <= 6; ++n)
    for (const Graph& g : connected_graphs(n))
      for (const auto& lambda : partitions_of(n)) REQUIRE(connected_partition_exists(g, lambda) == brute_connected_partition(g, lambda));
}

TEST_CASE("witness shapes") {
  CHECK(witness_shapes(6, WitnessFamily::both) == std::vector<IntPartition>{IntPartition{2, 2, 2}});
  CHECK(witness_shapes(5, WitnessFamily::both) == std::vector<IntPartition>{IntPartition{2, 2, 1}, IntPartition{3, 2}});
  CHECK(witness_shapes(5, WitnessFamily::pairs_and_singleton) == std::vector<IntPartition>{IntPartition{2, 2, 1}});
  CHECK(witness_shapes(5, WitnessFamily::pairs_and_triple) == std::vector<IntPartition>{IntPartition{3, 2}});
  CHECK(witness_shapes(3, WitnessFamily::both) == std::vector<IntPartition>{IntPartition{2, 1}, IntPartition{3}});
  CHECK(parse_witness_family("pairs_and_triple") == WitnessFamily::pairs_and_triple);
  CHECK(to_string(WitnessFamily::both) == "both");
  CHECK_THROWS_AS(parse_witness_family("odd"), ValidationError);
}

TEST_CASE("large independence number certificate") {
  CHECK(large_alpha_certificate(star_graph(3)));
  CHECK(large_alpha_certificate(star_graph(4)));
  CHECK_THROWS_AS(large_alpha_certificate(complete_bipartite_graph(2, 3)), ValidationError);
  CHECK_THROWS_AS(large_alpha_certificate(path_graph(4)), ValidationError);
}

TEST_CASE("claw counts") {
  CHECK(count_claws(star_graph(3)) == 1);
  CHECK(count_claws(complete_graph(4)) == 0);
  CHECK(count_claws(star_graph(4)) == 4);
  for (int n = 1; n <= 6; ++n)
    for (const Graph& g : connected_graphs(n)) REQUIRE(count_claws(g) == brute_claws(g));
  for (int n = 3; n <= 10; ++n) {
    CHECK(count_claws(path_graph(n)) == 0);
    CHECK(count_claws(cycle_graph(n)) == 0);
  }
}

TEST_CASE("claw contractibility") {
  CHECK(is_claw_contractible(star_graph(3)));
  CHECK_FALSE(is_claw_contractible(complete_graph(4)));
  // Claw with one edge subdivided.
  const std::vector<std::pair<int, int>> spider{{0, 1}, {0, 2}, {0, 3}, {3, 4}};
  CHECK(is_claw_contractible(graph_from_edges(5, spider)));
  CHECK_THROWS_AS(is_claw_contractible(path_graph(3)), ValidationError);
}

TEST_CASE("claw contractibility agrees with exhaustive search for n <= 7") {
  for (int n = 4; n <= 7; ++n)
    for (const Graph& g : connected_graphs(n)) REQUIRE(is_claw_contractible(g) == brute_claw_contractible(g));
}
