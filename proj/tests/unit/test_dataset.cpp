#include <doctest.h>

#include "epos/dataset.hpp"
#include "epos/error.hpp"
#include "epos/invariants.hpp"

using namespace epos;

TEST_CASE("dataset CSV round trip") {
  const std::vector<Graph> graphs{complete_graph(3), star_graph(3), cycle_graph(5)};
  const Dataset ds = build_dataset(graphs, {1, 0, 1});
  const std::string csv = dataset_to_csv(ds);
  const auto header = split_csv_line(split_lines(csv)[0]);
  CHECK(header.size() == 46);
  CHECK(header[0] == "graph6");
  CHECK(header[45] == "e_positive");
  const Dataset back = dataset_from_csv(csv, "mem");
  CHECK(back.graph6 == ds.graph6);
  CHECK(back.labels == ds.labels);
  CHECK(back.feature_names == ds.feature_names);
  CHECK(back.features == ds.features);
  CHECK(dataset_to_csv(back) == csv);
  CHECK(back.column_values("transitivity")[0] == 1.0);
  CHECK_THROWS_WITH_AS(back.column("nope"), doctest::Contains("nope"), ValidationError);
}

TEST_CASE("dataset CSV errors carry line numbers") {
  CHECK_THROWS_WITH_AS(dataset_from_csv("graph6,a,e_positive\nA_,1\n", "f.csv"), doctest::Contains("f.csv:2"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(dataset_from_csv("graph6,a,e_positive\nA_,1,0\nA_,x,1\n", "f.csv"), doctest::Contains("f.csv:3"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(dataset_from_csv("graph6,a,e_positive\nA_,1,2\n", "f.csv"), doctest::Contains("0 or 1"),
                       ValidationError);
  CHECK_THROWS_AS(dataset_from_csv("x,a,e_positive\n", "f.csv"), ValidationError);
  CHECK_THROWS_AS(dataset_from_csv("", "f.csv"), ValidationError);
}

TEST_CASE("label rows") {
  const LabelRecord r = label_graph(star_graph(3));
  const std::string row = label_row(r);
  CHECK(row == encode_graph6(star_graph(3)) + ",0,-2,2;2");
  const LabelRecord back = parse_label_row(row, 2, "labels.csv");
  CHECK(back.graph6 == r.graph6);
  CHECK(back.e_positive == r.e_positive);
  CHECK(back.min_e_coeff == -2);
  CHECK(back.witness_partition == "2;2");
  CHECK_THROWS_WITH_AS(parse_label_row("A_,1,0", 7, "labels.csv"), doctest::Contains("labels.csv:7"), ValidationError);
  const auto all = labels_from_csv(label_header() + "\n" + row + "\n", "labels.csv");
  CHECK(all.size() == 1);
}

TEST_CASE("add_column and subset") {
  Dataset ds = build_dataset({complete_graph(2), path_graph(3)}, {1, 1});
  ds.add_column("flag", {0.0, 1.0});
  CHECK(ds.features.cols == 45);
  CHECK(ds.column_values("flag")[1] == 1.0);
  CHECK_THROWS_AS(ds.add_column("flag", {0.0, 0.0}), ValidationError);
  const Dataset one = ds.subset({1});
  CHECK(one.size() == 1);
  CHECK(one.graph6[0] == encode_graph6(path_graph(3)));
}
