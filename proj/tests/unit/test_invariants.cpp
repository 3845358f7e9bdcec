#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "epos/certificates.hpp"
#include "epos/error.hpp"
#include "epos/invariants.hpp"
#include "epos/linalg.hpp"

using namespace epos;

TEST_CASE("Jacobi eigenvalues") {
  SquareMatrix id(3);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1.0;
  for (double v : eigenvalues_symmetric(id)) CHECK(v == doctest::Approx(1.0));

  SquareMatrix k2(2);
  k2(0, 1) = k2(1, 0) = 1.0;
  const auto e2 = eigenvalues_symmetric(k2);
  CHECK(e2[0] == doctest::Approx(1.0));
  CHECK(e2[1] == doctest::Approx(-1.0));

  SquareMatrix c4(4);
  for (std::size_t i = 0; i < 4; ++i) c4(i, (i + 1) % 4) = c4((i + 1) % 4, i) = 1.0;
  const auto e4 = eigenvalues_symmetric(c4);
  const std::vector<double> expected{2.0, 0.0, 0.0, -2.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(e4[i] - expected[i]) < 1e-10);
}

TEST_CASE("Jacobi eigenvalues of cycles match the closed form 2cos(2πj/n)") {
  for (int n = 3; n <= 11; ++n) {
    SquareMatrix a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n)) = a(static_cast<std::size_t>((i + 1) % n), static_cast<std::size_t>(i)) = 1.0;
    std::vector<double> closed;
    for (int j = 0; j < n; ++j) closed.push_back(2.0 * std::cos(2.0 * M_PI * j / n));
    std::sort(closed.begin(), closed.end(), std::greater<>());
    const auto got = eigenvalues_symmetric(a);
    for (std::size_t i = 0; i < closed.size(); ++i) CHECK(std::abs(got[i] - closed[i]) < 1e-10);
  }
}

TEST_CASE("feature schema") {
  const auto& schema = feature_schema();
  CHECK(schema.features.size() == 44);
  for (const char* name : {"num_claws", "transitivity", "degree_std", "independence_number"}) CHECK(schema.index_of(name).has_value());
  const auto names = schema.names();
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
}

TEST_CASE("feature examples") {
  const auto k3 = compute_features(complete_graph(3));
  CHECK(k3["transitivity"] == 1.0);
  CHECK(k3["num_claws"] == 0.0);
  CHECK(k3["independence_number"] == 1.0);
  CHECK(k3["degree_std"] == 0.0);

  const auto c5 = compute_features(cycle_graph(5));
  CHECK(c5["transitivity"] == 0.0);
  CHECK(c5["independence_number"] == 2.0);
  CHECK(c5["degree_std"] == 0.0);
  CHECK(c5["diameter"] == 2.0);
  CHECK(c5["girth"] == 5.0);
  CHECK(c5["chromatic_number"] == 3.0);
  CHECK(c5["count_C4"] == 0.0);
  CHECK(c5["log_spanning_tree_count"] == doctest::Approx(std::log(5.0)));

  const auto claw = compute_features(star_graph(3));
  CHECK(claw["num_claws"] == 1.0);
  CHECK(claw["degree_std"] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(claw["num_leaves"] == 3.0);
  CHECK(claw["num_cut_vertices"] == 1.0);
  CHECK(claw["num_bridges"] == 3.0);
  CHECK(claw["girth"] == 0.0);
  CHECK(claw["degree_assortativity"] == doctest::Approx(-1.0));
  CHECK(claw["spectral_radius"] == doctest::Approx(std::sqrt(3.0)));

  const auto k4 = compute_features(complete_graph(4));
  CHECK(k4["vertex_connectivity"] == 3.0);
  CHECK(k4["edge_connectivity"] == 3.0);
  CHECK(k4["count_C4"] == 3.0);
  CHECK(k4["num_maximal_cliques"] == 1.0);
  CHECK(k4["degree_assortativity"] == 0.0);
  CHECK(k4["log_spanning_tree_count"] == doctest::Approx(std::log(16.0)));

  const auto single = compute_features(Graph(1));
  for (double v : single.values) CHECK(std::isfinite(v));

  CHECK_THROWS_AS(compute_features(empty_graph(3)), ValidationError);
}

TEST_CASE("exact invariants against small closed forms") {
  CHECK(spanning_tree_count(complete_graph(11)) == 2357947691LL);  // 11^9
  CHECK(spanning_tree_count(cycle_graph(9)) == 9);
  CHECK(matching_number(path_graph(7)) == 3);
  CHECK(domination_number(path_graph(7)) == 3);
  CHECK(chromatic_number(cycle_graph(7)) == 3);
  CHECK(chromatic_number(complete_graph(6)) == 6);
  CHECK(edge_connectivity(cycle_graph(6)) == 2);
  CHECK(vertex_connectivity(path_graph(5)) == 1);
}

TEST_CASE("feature invariants on all connected graphs n <= 6") {
  std::mt19937_64 rng(5);
  const auto& schema = feature_schema();
  for (int n = 1; n <= 6; ++n) {
    for (const Graph& g : connected_graphs(n)) {
      const auto f = compute_features(g);
      REQUIRE(f.values.size() == 44);
      CHECK(f["transitivity"] >= 0.0);
      CHECK(f["transitivity"] <= 1.0);
      CHECK(f["density"] >= 0.0);
      CHECK(f["density"] <= 1.0);
      if (n >= 2) CHECK(f["algebraic_connectivity"] > 1e-9);
      CHECK(f["spectral_radius"] >= f["mean_degree"] - 1e-9);
      CHECK(f["spectral_radius"] <= f["max_degree"] + 1e-9);
      CHECK(f["num_claws"] == count_claws(g));

      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto h = compute_features(g.relabeled(perm));
      for (std::size_t i = 0; i < 44; ++i) {
        if (schema.features[i].kind == FeatureKind::discrete) {
          REQUIRE(h.values[i] == f.values[i]);
        } else {
          REQUIRE(std::abs(h.values[i] - f.values[i]) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("num_claws equals count_claws for n = 7") {
  for (const Graph& g : connected_graphs(7)) REQUIRE(compute_features(g)["num_claws"] == count_claws(g));
}
