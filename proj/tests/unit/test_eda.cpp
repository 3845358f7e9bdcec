#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "epos/certificates.hpp"
#include "epos/csf.hpp"
#include "epos/eda.hpp"
#include "epos/error.hpp"

using namespace epos;

namespace {

Dataset toy(const std::vector<std::vector<double>>& cols, const std::vector<int>& labels) {
  Dataset ds;
  ds.features = Matrix(labels.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    ds.feature_names.push_back("x" + std::to_string(c));
    for (std::size_t r = 0; r < labels.size(); ++r) ds.features(r, c) = cols[c][r];
  }
  for (std::size_t r = 0; r < labels.size(); ++r) ds.graph6.push_back("@");
  ds.labels = labels;
  return ds;
}

std::vector<double> observed(const Dataset& ds, const std::string& f) {
  auto v = ds.column_values(f);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// All maximal pure single-feature intervals by direct enumeration.
std::vector<ConjectureBox> brute_single(const Dataset& ds, const std::string& f, std::size_t min_support, int target) {
  const auto vals = observed(ds, f);
  std::vector<ConjectureBox> out;
  for (std::size_t a = 0; a < vals.size(); ++a)
    for (std::size_t b = a; b < vals.size(); ++b) {
      const BoxCount c = evaluate_box(ds, {{f, vals[a], vals[b]}}, target);
      if (c.support < min_support || c.positives != c.support) continue;
      const bool left_max = a == 0 || evaluate_box(ds, {{f, vals[a - 1], vals[b]}}, target).positives !=
                                          evaluate_box(ds, {{f, vals[a - 1], vals[b]}}, target).support;
      const bool right_max = b + 1 == vals.size() || evaluate_box(ds, {{f, vals[a], vals[b + 1]}}, target).positives !=
                                                         evaluate_box(ds, {{f, vals[a], vals[b + 1]}}, target).support;
      if (left_max && right_max) out.push_back({{{f, vals[a], vals[b]}}, c.support, c.support});
    }
  return out;
}

// Every box is pure, correctly counted, and no endpoint can move one observed value outward.
void check_boxes(const Dataset& ds, const std::vector<ConjectureBox>& boxes, std::size_t min_support, int target) {
  for (const ConjectureBox& b : boxes) {
    REQUIRE(!b.clauses.empty());
    const BoxCount c = evaluate_box(ds, b.clauses, target);
    REQUIRE(c.support == b.support);
    REQUIRE(c.positives == b.support);
    REQUIRE(b.support >= min_support);
    for (std::size_t i = 0; i < b.clauses.size(); ++i) {
      const auto vals = observed(ds, b.clauses[i].feature);
      const auto lo = std::lower_bound(vals.begin(), vals.end(), b.clauses[i].lo) - vals.begin();
      const auto hi = std::lower_bound(vals.begin(), vals.end(), b.clauses[i].hi) - vals.begin();
      for (int side = 0; side < 2; ++side) {
        auto wider = b.clauses;
        if (side == 0) {
          if (lo == 0) continue;
          wider[i].lo = vals[static_cast<std::size_t>(lo - 1)];
        } else {
          if (static_cast<std::size_t>(hi + 1) == vals.size()) continue;
          wider[i].hi = vals[static_cast<std::size_t>(hi + 1)];
        }
        const BoxCount w = evaluate_box(ds, wider, target);
        REQUIRE(w.positives < w.support);
      }
    }
  }
}

Dataset connected_dataset(int n_min, int n_max) {
  std::vector<Graph> graphs;
  std::vector<int> labels;
  for (int n = n_min; n <= n_max; ++n)
    for (const Graph& g : connected_graphs(n)) {
      graphs.push_back(g);
      labels.push_back(is_e_positive(g) ? 1 : 0);
    }
  return build_dataset(graphs, labels);
}

}  // namespace

TEST_CASE("bin_stats") {
  const auto one = bin_stats({3.0, 3.0, 3.0}, {1, 0, 1}, 10);
  REQUIRE(one.size() == 1);
  CHECK(one[0].count == 3);

  const auto lab = bin_stats({0, 1, 1, 0}, {0, 1, 1, 0}, 10);
  REQUIRE(lab.size() == 2);
  CHECK(lab[0].lo == 0.0);
  CHECK(lab[0].positive_rate == 0.0);
  CHECK(lab[1].lo == 1.0);
  CHECK(lab[1].positive_rate == 1.0);

  const auto ints = bin_stats({1, 2, 5}, {1, 1, 0}, 10);
  CHECK(ints.size() == 5);
  CHECK(ints[2].count == 0);

  const auto cont = bin_stats({0.0, 0.5, 1.0, 0.25}, {1, 0, 1, 1}, 2);
  REQUIRE(cont.size() == 2);
  CHECK(cont[0].count == 2);
  CHECK(cont[1].count == 2);
  CHECK(cont[1].hi == 1.0);
  CHECK_THROWS_AS(bin_stats({1.0}, {1}, 0), ValidationError);
}

TEST_CASE("single threshold toy") {
  std::vector<double> x, noise;
  std::vector<int> y;
  for (int rep = 0; rep < 5; ++rep)
    for (int v = 0; v < 10; ++v) {
      x.push_back(v);
      noise.push_back((v * 7 + rep * 3) % 5);
      y.push_back(v <= 3 ? 1 : 0);
    }
  const Dataset ds = toy({x, noise}, y);
  MiningConfig cfg;
  cfg.min_support = 1;
  const auto boxes = mine_zero_fp_boxes(ds, {"x0", "x1"}, cfg);
  REQUIRE(!boxes.empty());
  CHECK(boxes[0].clauses == std::vector<Clause>{{"x0", 0, 3}});
  CHECK(boxes[0].support == 20);
  check_boxes(ds, boxes, 1, 1);
  CHECK_THROWS_AS(mine_zero_fp_boxes(ds, {}, cfg), ValidationError);
  CHECK_THROWS_AS(mine_zero_fp_boxes(ds, {"nope"}, cfg), ValidationError);
}

TEST_CASE("q = 1 agrees with a brute-force interval scan") {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 20 + rng.below(40);
    std::vector<double> a(n), b(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(8));
      b[i] = static_cast<double>(rng.below(5)) * 0.5;
      y[i] = rng.uniform() < 0.2 + 0.1 * a[i] ? 1 : 0;
    }
    const Dataset ds = toy({a, b}, y);
    MiningConfig cfg;
    cfg.max_clauses = 1;
    cfg.min_support = 1 + rng.below(3);
    for (int target : {1, 0}) {
      const auto got = target ? mine_zero_fp_boxes(ds, {"x0", "x1"}, cfg) : negative_condition_scan(ds, {"x0", "x1"}, cfg);
      auto expected = brute_single(ds, "x0", cfg.min_support, target);
      const auto more = brute_single(ds, "x1", cfg.min_support, target);
      expected.insert(expected.end(), more.begin(), more.end());
      REQUIRE(got.size() == expected.size());
      for (const auto& e : expected) REQUIRE(std::find(got.begin(), got.end(), e) != got.end());
    }
  }
}

TEST_CASE("greedy conjunction finds a two-clause box and the pair search confirms it") {
  std::vector<double> a, b, c;
  std::vector<int> y;
  for (int rep = 0; rep < 3; ++rep)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        a.push_back(i);
        b.push_back(j);
        c.push_back((i + j + rep) % 3);
        y.push_back(i <= 2 && j >= 3 ? 1 : 0);
      }
  const Dataset ds = toy({a, b, c}, y);
  MiningConfig cfg;
  cfg.min_support = 5;
  const auto boxes = mine_zero_fp_boxes(ds, {"x0", "x1", "x2"}, cfg);
  REQUIRE(!boxes.empty());
  const std::vector<Clause> target{{"x0", 0, 2}, {"x1", 3, 5}};
  CHECK(boxes[0].clauses == target);
  CHECK(boxes[0].support == 27);
  check_boxes(ds, boxes, 5, 1);
  const auto pairs = exhaustive_pair_boxes(ds, "x0", "x1", 5);
  REQUIRE(!pairs.empty());
  CHECK(pairs[0].clauses == target);
  check_boxes(ds, pairs, 5, 1);
}

TEST_CASE("greedy boxes on random data are pure and maximal") {
  Rng rng(77);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 80 + rng.below(80);
    std::vector<std::vector<double>> cols(4, std::vector<double>(n));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& col : cols) col[i] = static_cast<double>(rng.below(7));
      y[i] = (cols[0][i] < 3 && cols[1][i] > 2) || rng.uniform() < 0.1 ? 1 : 0;
    }
    const Dataset ds = toy(cols, y);
    MiningConfig cfg;
    cfg.min_support = 3;
    cfg.max_cuts = 4;  // forces the quantile path
    const auto boxes = mine_zero_fp_boxes(ds, {"x0", "x1", "x2", "x3"}, cfg);
    check_boxes(ds, boxes, 3, 1);
    for (const auto& b : boxes) REQUIRE(b.clauses.size() <= 4);
    check_boxes(ds, negative_condition_scan(ds, {"x0", "x1", "x2", "x3"}, cfg), 3, 0);
    check_boxes(ds, exhaustive_pair_boxes(ds, "x0", "x1", 3, 16, 1), 3, 1);
  }
}

TEST_CASE("negative scan on an all-positive dataset is empty") {
  const Dataset ds = toy({{1, 2, 3}}, {1, 1, 1});
  CHECK(negative_condition_scan(ds, {"x0"}, MiningConfig{}).empty());
}

TEST_CASE("reports") {
  ReportMeta meta{8, 11117};
  CHECK(conjecture_report_text({}, meta, false).find("No candidate condition found.") != std::string::npos);
  const std::vector<ConjectureBox> boxes{{{{"independence_number", 1, 2}}, 120, 120}};
  const std::string text = conjecture_report_text(boxes, meta, false);
  CHECK(text.find("∀ connected G on n≤8 vertices: 1 ≤ independence_number ≤ 2 ⇒ e-positive (support 120, verified "
                  "exhaustively)") != std::string::npos);
  CHECK(conjecture_report_text(boxes, meta, false) == text);
  const auto j = conjecture_report_json(boxes, meta, false);
  CHECK(j.at("boxes")[0].at("verified") == true);
  CHECK(j.at("boxes")[0].at("clauses")[0].at("hi") == 2.0);
  CHECK(format_value(0.1) == "0.1");
  CHECK(format_value(4.0) == "4");
}

TEST_CASE("connected graphs n <= 6: independence-number boxes") {
  const Dataset ds = connected_dataset(1, 6);
  std::size_t co_triangle_free = 0;
  for (const auto& s : ds.graph6) co_triangle_free += is_co_triangle_free(parse_graph6(s)) ? 1 : 0;
  MiningConfig cfg;
  cfg.min_support = default_min_support(ds.size());
  const auto boxes = mine_zero_fp_boxes(ds, {"independence_number"}, cfg);
  const ConjectureBox want{{{"independence_number", 1, 2}}, co_triangle_free, co_triangle_free};
  CHECK(std::find(boxes.begin(), boxes.end(), want) != boxes.end());
  check_boxes(ds, boxes, cfg.min_support, 1);

  const auto bins = bin_stats(ds.column_values("independence_number"), ds.labels, 10);
  CHECK(bins[1].lo == 2.0);
  CHECK(bins[1].positive_rate == 1.0);

  for (int n : {4, 6}) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < ds.size(); ++r)
      if (ds.features(r, ds.column("n_vertices")) == n) rows.push_back(r);
    const Dataset slice = ds.subset(rows);
    MiningConfig one;
    one.min_support = 1;
    const auto neg = negative_condition_scan(slice, {"independence_number"}, one);
    REQUIRE(!neg.empty());
    const double alpha = (n + 1) / 2 + 1;
    CHECK(neg[0].clauses[0].lo == alpha);
    const BoxCount exact = evaluate_box(slice, {{"independence_number", alpha, alpha}}, 1);
    CHECK(exact.support > 0);
    CHECK(exact.positives == 0);
  }
}
