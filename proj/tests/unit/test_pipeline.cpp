#include <doctest.h>

#include <unistd.h>

#include <fstream>

#include "epos/csf.hpp"
#include "epos/dataset.hpp"
#include "epos/error.hpp"
#include "epos/io.hpp"
#include "epos/pipeline.hpp"

using namespace epos;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("epos-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig quick_config(const fs::path& out) {
  RunConfig c = default_run_config();
  c.n = 6;
  c.out_dir = out.string();
  c.stage1.hidden = {16, 8};
  c.stage2.hidden = {16, 8};
  c.stage1.train.epochs = 30;
  c.stage2.train.epochs = 30;
  c.stage1.train.batch_size = 32;
  c.stage2.train.batch_size = 32;
  c.top_k = 8;
  return c;
}

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("parallel_for visits every index once and rethrows the first failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i >= 10) throw ValidationError("boom " + std::to_string(i));
                               }),
                  ValidationError);
}

TEST_CASE("gen is deterministic and counts connected graphs") {
  TempDir t;
  CHECK(cmd_gen(5, t.path / "a.g6") == 21);
  cmd_gen(5, t.path / "b.g6");
  CHECK(read_file(t.path / "a.g6") == read_file(t.path / "b.g6"));
  CHECK(read_graph6_file(t.path / "a.g6").size() == 21);
}

TEST_CASE("label: single edge and trees on four vertices") {
  TempDir t;
  write_file_atomic(t.path / "k2.g6", "A_\n");
  const LabelSummary s = cmd_label(t.path / "k2.g6", t.path / "k2.csv", 1);
  CHECK(s.total == 1);
  CHECK(s.positive == 1);
  const auto rows = labels_from_csv(read_file(t.path / "k2.csv"), "k2.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].e_positive);

  // Connected graphs on 4 vertices: only the claw fails.
  cmd_gen(4, t.path / "n4.g6");
  const LabelSummary s4 = cmd_label(t.path / "n4.g6", t.path / "n4.csv", 2);
  CHECK(s4.total == 6);
  CHECK(s4.positive == 5);
  for (const auto& r : labels_from_csv(read_file(t.path / "n4.csv"), "n4.csv"))
    CHECK(r.e_positive == (canonical_certificate(parse_graph6(r.graph6)) != canonical_certificate(star_graph(3))));
}

TEST_CASE("label resumes from a partial cache with identical output") {
  TempDir t;
  cmd_gen(6, t.path / "g.g6");
  const LabelSummary full = cmd_label(t.path / "g.g6", t.path / "full.csv", 2);
  CHECK(full.computed == 112);
  CHECK(full.positive == 68);

  // Keep the first 40 cache lines plus a torn one.
  const std::string cache = read_file(t.path / "full.csv.cache");
  std::size_t pos = 0;
  for (int i = 0; i < 40; ++i) pos = cache.find('\n', pos) + 1;
  write_file_atomic(t.path / "resume.csv.cache", cache.substr(0, pos) + cache.substr(pos, 5));
  const LabelSummary resumed = cmd_label(t.path / "g.g6", t.path / "resume.csv", 3);
  CHECK(resumed.cached == 40);
  CHECK(resumed.computed == 72);
  CHECK(read_file(t.path / "resume.csv") == read_file(t.path / "full.csv"));

  const LabelSummary again = cmd_label(t.path / "g.g6", t.path / "resume.csv", 1);
  CHECK(again.computed == 0);
  CHECK(read_file(t.path / "resume.csv") == read_file(t.path / "full.csv"));
}

TEST_CASE("label rejects bad graph6 with the line number") {
  TempDir t;
  write_file_atomic(t.path / "bad.g6", "A_\nD?\n");
  try {
    cmd_label(t.path / "bad.g6", t.path / "bad.csv", 1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("bad.g6:2") != std::string::npos);
  }
}

TEST_CASE("featurize writes the full schema") {
  TempDir t;
  cmd_gen(5, t.path / "g.g6");
  cmd_label(t.path / "g.g6", t.path / "l.csv", 1);
  CHECK(cmd_featurize(t.path / "l.csv", t.path / "d.csv", 2) == 21);
  const std::string text = read_file(t.path / "d.csv");
  const auto header = split_csv_line(std::string(split_lines(text)[0]));
  CHECK(header.size() == 46);
  const Dataset ds = load_dataset((t.path / "d.csv").string());
  CHECK(ds.size() == 21);
  cmd_featurize(t.path / "l.csv", t.path / "d1.csv", 1);
  CHECK(read_file(t.path / "d1.csv") == text);
}

TEST_CASE("run config round trip and strict parsing") {
  const RunConfig c = default_run_config();
  const nlohmann::json j = to_json(c);
  CHECK(to_json(run_config_from_json(j)) == j);

  auto missing = j;
  missing["stage2"]["train"].erase("fp_weight");
  try {
    run_config_from_json(missing);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stage2.train.fp_weight") != std::string::npos);
  }
  auto extra = j;
  extra["eda"]["bogus"] = 1;
  CHECK_THROWS_WITH_AS(run_config_from_json(extra), doctest::Contains("eda.bogus"), ValidationError);
  auto wrong = j;
  wrong["feature_schema_version"] = 7;
  CHECK_THROWS_AS(run_config_from_json(wrong), ValidationError);
  auto typed = j;
  typed["jobs"] = "four";
  CHECK_THROWS_WITH_AS(run_config_from_json(typed), doctest::Contains("jobs"), ValidationError);

  RunConfig s = c;
  apply_seed(s, 10);
  CHECK(s.stage1.seed == 10);
  CHECK(s.stage2.seed == 11);
  CHECK(s.stage1.train.seed == s.stage2.train.seed);
}

TEST_CASE("verify conditions on small orders") {
  TempDir t;
  cmd_gen(6, t.path / "g.g6");
  cmd_label(t.path / "g.g6", t.path / "l.csv", 2);
  for (Condition c : {Condition::co_triangle_free, Condition::alpha, Condition::clawfree_ccfree}) {
    const auto j = cmd_verify(t.path / "l.csv", c, WitnessFamily::both, t.path / (to_string(c) + ".json"), 2);
    CHECK(j.at("violation_count") == 0);
    CHECK(j.at("hypothesis_holds").get<std::size_t>() > 0);
    // Same answer when labels are recomputed from graph6.
    const auto k = cmd_verify(t.path / "g.g6", c, WitnessFamily::both, t.path / "x.json", 1);
    CHECK(k.at("hypothesis_holds") == j.at("hypothesis_holds"));
    CHECK(k.at("violation_count") == 0);
  }
}

TEST_CASE("run-all is reproducible") {
  TempDir t;
  RunConfig c = quick_config(t.path / "a");
  const auto m1 = cmd_run_all(c);
  c.out_dir = (t.path / "b").string();
  c.jobs = 3;
  const auto m2 = cmd_run_all(c);
  // config.json records out_dir and jobs, so compare everything else.
  auto strip = [](nlohmann::json m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : m.at("artifacts"))
      if (a.at("path") != "config.json") out.push_back(a);
    return out;
  };
  CHECK(strip(m1) == strip(m2));
  const auto m3 = cmd_run_all(quick_config(t.path / "a"));
  CHECK(m3 == m1);

  for (const char* f : {"graphs.g6", "labels.csv", "dataset.csv", "stage1/model.json", "stage1/metrics.json",
                        "stage1/saliency.json", "stage1/top_features.txt", "stage2/model.json", "stage2/metrics.json",
                        "eda/report.txt", "eda/conjectures.json", "eda/bins.csv", "verify/alpha.json", "manifest.json"})
    CHECK_MESSAGE(fs::exists(t.path / "a" / f), f);
  const auto metrics = nlohmann::json::parse(read_file(t.path / "a" / "stage1" / "metrics.json"));
  CHECK(metrics.at("test").at("accuracy").get<double>() >= 0.0);
}
