#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epos/attribution.hpp"
#include "epos/certificates.hpp"
#include "epos/eda.hpp"
#include "epos/nn.hpp"
#include "epos/verify.hpp"

namespace epos {

namespace fs = std::filesystem;

struct StageConfig {
  std::vector<std::size_t> hidden{256, 128, 64, 32};
  bool use_batchnorm = true;
  double dropout_rate = 0.0;
  std::uint64_t seed = 1;
  TrainConfig train;

  MLPConfig mlp(std::size_t input_dim) const;
};

struct EdaConfig {
  int max_clauses = 4;
  double min_support_fraction = 0.01;
  int num_bins = 10;
  std::size_t max_cuts = 64;
  /// Leading features of the stage-2 saliency ranking used as candidates.
  std::size_t top_features = 4;
  /// Always-included candidates.
  std::vector<std::string> extra_features{"independence_number", "num_claws"};
  /// Append a claw_contractible 0/1 column computed from graph6.
  bool claw_contractible_column = true;
  std::size_t pair_cross_check = 4;
};

struct RunConfig {
  int n = 6;
  /// Smallest order enumerated; graphs of every order in [n_min, n] are used.
  int n_min = 6;
  /// Used instead of enumeration when nonempty.
  std::string input_graph6;
  std::string out_dir = "epos-run";
  int feature_schema_version = 1;
  int jobs = 1;
  StageConfig stage1;
  StageConfig stage2;
  std::size_t top_k = 15;
  std::string saliency_split = "all";
  SaliencyTarget saliency_target = SaliencyTarget::probability;
  double target_precision = 1.0;
  EdaConfig eda;
  WitnessFamily witness_family = WitnessFamily::both;
  std::vector<std::string> verify_conditions{"co-triangle-free", "alpha", "clawfree-ccfree"};
};

RunConfig default_run_config();
nlohmann::json to_json(const RunConfig& c);
/// Strict: every key must be present and no unknown key is accepted; errors
/// name the offending key path.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const fs::path& path);
/// Derives every seed in the config from one value.
void apply_seed(RunConfig& c, std::uint64_t seed);

std::string sha256_hex(std::string_view data);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

std::vector<Graph> read_graph6_file(const fs::path& path);

std::size_t cmd_gen(int n, const fs::path& out);
/// All orders n_min..n_max, smallest first.
std::size_t cmd_gen(int n_min, int n_max, const fs::path& out);

struct LabelSummary {
  std::size_t total = 0;
  std::size_t positive = 0;
  std::size_t computed = 0;
  std::size_t cached = 0;
};

/// Labels every graph of a graph6 file. Full e-expansions are appended to
/// `<out>.cache` in chunks, so an interrupted run resumes where it stopped.
LabelSummary cmd_label(const fs::path& in, const fs::path& out, int jobs);
/// Dataset CSV from a label file.
std::size_t cmd_featurize(const fs::path& labels, const fs::path& out, int jobs);

nlohmann::json cmd_train_stage1(const fs::path& dataset, const RunConfig& cfg, const fs::path& out_dir);
nlohmann::json cmd_saliency(const fs::path& checkpoint, const fs::path& dataset, std::size_t k, const std::string& split,
                            SaliencyTarget target, const fs::path& out_dir);
nlohmann::json cmd_train_stage2(const fs::path& dataset, const fs::path& features_file, const RunConfig& cfg,
                                const fs::path& out_dir);
nlohmann::json cmd_eda(const fs::path& dataset, const std::vector<std::string>& features, const EdaConfig& cfg,
                       const fs::path& out_dir);
/// Input is a graph6 file (labels computed) or a label CSV.
nlohmann::json cmd_verify(const fs::path& in, Condition condition, WitnessFamily family, const fs::path& out, int jobs);
/// gen → label → featurize → stage 1 → saliency → stage 2 → saliency → eda →
/// verify; returns the manifest written to <out_dir>/manifest.json.
nlohmann::json cmd_run_all(const RunConfig& cfg);

std::vector<std::string> read_name_list(const fs::path& path);

}  // namespace epos
