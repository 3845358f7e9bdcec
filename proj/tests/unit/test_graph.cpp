#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "epos/error.hpp"
#include "epos/graph.hpp"

using namespace epos;

namespace {

// Brute-force canonical form: least graph6 string over all n! relabelings.
std::string brute_canonical(const Graph& g) {
  std::vector<int> perm(static_cast<std::size_t>(g.order()));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s = encode_graph6(g.relabeled(perm));
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Graph labeled_graph(int n, std::uint32_t mask) {
  Graph g(n);
  int k = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++k)
      if (mask & (1U << k)) g.add_edge(i, j);
  return g;
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

TEST_CASE("graph6 known strings") {
  CHECK(parse_graph6("A_") == complete_graph(2));
  CHECK(parse_graph6("A?") == empty_graph(2));
  CHECK(encode_graph6(complete_graph(2)) == "A_");
  CHECK(encode_graph6(empty_graph(2)) == "A?");
  CHECK(encode_graph6(parse_graph6("D?{")) == "D?{");
  CHECK(encode_graph6(Graph(1)) == "@");
}

TEST_CASE("graph6 round trip on every labeled graph with n <= 6") {
  for (int n = 1; n <= 6; ++n) {
    const std::uint32_t count = 1U << (n * (n - 1) / 2);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      const Graph g = labeled_graph(n, mask);
      const std::string s = encode_graph6(g);
      REQUIRE(parse_graph6(s) == g);
      REQUIRE(encode_graph6(parse_graph6(s)) == s);
    }
  }
}

TEST_CASE("graph6 errors report byte offsets") {
  SUBCASE("length") {
    try {
      parse_graph6("D?");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 2);
    }
  }
  SUBCASE("byte out of range") {
    try {
      parse_graph6("D? ");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 2);
    }
  }
  SUBCASE("nonzero padding") {
    // n=2 has one data bit; "A@" sets a pad bit.
    try {
      parse_graph6("A@");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 1);
    }
  }
  CHECK_THROWS_AS(parse_graph6(""), ParseError);
  CHECK_THROWS_AS(parse_graph6("~??"), ParseError);
}

TEST_CASE("canonical certificate basics") {
  const Graph p3a = path_graph(3);
  const std::vector<std::pair<int, int>> edges{{1, 0}, {0, 2}};
  const Graph p3b = graph_from_edges(3, edges);
  CHECK(canonical_certificate(p3a) == canonical_certificate(p3b));
  CHECK(canonical_certificate(p3a) != canonical_certificate(complete_graph(3)));
}

TEST_CASE("canonical certificate agrees with brute force on all 5-vertex graphs") {
  // Same partition of the labeled graphs into classes under both routes.
  std::map<std::string, std::string> brute_to_fast;
  std::map<std::string, std::string> fast_to_brute;
  for (std::uint32_t mask = 0; mask < (1U << 10); ++mask) {
    const Graph g = labeled_graph(5, mask);
    const std::string c = canonical_certificate(g).bytes;
    const std::string b = brute_canonical(g);
    REQUIRE(brute_to_fast.emplace(b, c).first->second == c);
    REQUIRE(fast_to_brute.emplace(c, b).first->second == b);
  }
  CHECK(fast_to_brute.size() == 34);
  CHECK(brute_to_fast.size() == 34);
}

TEST_CASE("canonical certificate is relabeling invariant for n <= 6") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 6; ++n) {
    const std::uint32_t count = 1U << (n * (n - 1) / 2);
    for (std::uint32_t mask = 0; mask < count; mask += (n == 6 ? 37 : 1)) {
      const Graph g = labeled_graph(n, mask);
      const auto cert = canonical_certificate(g);
      for (int t = 0; t < 3; ++t) {
        REQUIRE(canonical_certificate(g.relabeled(random_permutation(n, rng))) == cert);
      }
    }
  }
}

TEST_CASE("canonical labeling handles highly symmetric graphs on 11 vertices") {
  for (const Graph& g : {empty_graph(11), complete_graph(11), star_graph(10), complete_bipartite_graph(5, 6),
                         cycle_graph(11)}) {
    std::mt19937_64 rng(3);
    const auto cert = canonical_certificate(g);
    CHECK(canonical_certificate(g.relabeled(random_permutation(11, rng))) == cert);
  }
}

TEST_CASE("enumeration matches a brute-force oracle for n <= 6") {
  for (int n = 1; n <= 6; ++n) {
    std::set<std::string> oracle;
    const std::uint32_t count = 1U << (n * (n - 1) / 2);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      const Graph g = labeled_graph(n, mask);
      if (is_connected(g)) oracle.insert(brute_canonical(g));
    }
    std::vector<std::string> got;
    std::set<std::string> got_classes;
    enumerate_connected_graphs(n, [&](const Graph& g) {
      got.push_back(encode_graph6(g));
      got_classes.insert(brute_canonical(g));
    });
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(got.size() == oracle.size());
    CHECK(got_classes == oracle);
  }
  CHECK(connected_graphs(1).size() == 1);
  CHECK(connected_graphs(4).size() == 6);
  CHECK(connected_graphs(5).size() == 21);
}

TEST_CASE("enumeration counts for n = 7, 8 match the published connected-graph counts") {
  for (auto [n, expected] : {std::pair{7, 853}, std::pair{8, 11117}}) {
    const auto graphs = connected_graphs(n);
    CHECK(graphs.size() == static_cast<std::size_t>(expected));
    std::set<std::string> certs;
    for (const auto& g : graphs) {
      REQUIRE(is_connected(g));
      certs.insert(canonical_certificate(g).bytes);
    }
    CHECK(certs.size() == graphs.size());
  }
  CHECK_THROWS_AS(connected_graphs(0), ValidationError);
  CHECK_THROWS_AS(connected_graphs(10), ValidationError);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(complete_graph(2)));
  CHECK_FALSE(is_connected(empty_graph(2)));
  CHECK(is_connected(path_graph(9)));
}

TEST_CASE("complement") {
  CHECK(complement(complete_graph(5)) == empty_graph(5));
  for (std::uint32_t mask = 0; mask < (1U << 15); mask += 11) {
    const Graph g = labeled_graph(6, mask);
    REQUIRE(complement(complement(g)) == g);
  }
  CHECK(canonical_certificate(complement(cycle_graph(5))) == canonical_certificate(cycle_graph(5)));
}

TEST_CASE("quotient") {
  const Graph p4 = path_graph(4);
  const std::vector<VertexMask> singletons{bit(0), bit(1), bit(2), bit(3)};
  CHECK(quotient(p4, singletons) == p4);
  const std::vector<VertexMask> whole{p4.vertices()};
  CHECK(quotient(p4, whole).order() == 1);
  const std::vector<VertexMask> merged{bit(0) | bit(1), bit(2), bit(3)};
  CHECK(canonical_certificate(quotient(p4, merged)) == canonical_certificate(path_graph(3)));
  const std::vector<VertexMask> overlapping{bit(0) | bit(1), bit(1) | bit(2), bit(3)};
  CHECK_THROWS_AS(quotient(p4, overlapping), ValidationError);
  const std::vector<VertexMask> missing{bit(0), bit(1)};
  CHECK_THROWS_AS(quotient(p4, missing), ValidationError);
}
