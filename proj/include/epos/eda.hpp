#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "epos/dataset.hpp"

namespace epos {

struct Bin {
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;
  std::size_t positives = 0;
  double positive_rate = 0;  // 0 for empty bins
};

/// Equal-width bins over the observed range; integer-valued features whose
/// range spans at most num_bins values get one bin per integer.
std::vector<Bin> bin_stats(const std::vector<double>& values, const std::vector<int>& labels, int num_bins);
/// Rows: feature,bin_lo,bin_hi,count,positive_rate.
std::string bin_table_csv(const Dataset& ds, const std::vector<std::string>& features, int num_bins);

struct Clause {
  std::string feature;
  double lo = 0;
  double hi = 0;
  bool operator==(const Clause&) const = default;
};

/// Axis-aligned box. `positives` counts rows carrying the target label
/// (e-positive for the miner, e-negative for the negative scan).
struct ConjectureBox {
  std::vector<Clause> clauses;
  std::size_t support = 0;
  std::size_t positives = 0;

  double precision_on_data() const {
    return support ? static_cast<double>(positives) / static_cast<double>(support) : 0.0;
  }
  bool operator==(const ConjectureBox&) const = default;
};

struct MiningConfig {
  int max_clauses = 4;
  /// Absolute row count; see default_min_support.
  std::size_t min_support = 1;
  /// Endpoint candidates per feature during the greedy search.
  std::size_t max_cuts = 64;
  /// Boxes per seed feature in sequential covering.
  std::size_t max_boxes_per_seed = 8;
};

/// 1% of the dataset, at least 1.
std::size_t default_min_support(std::size_t dataset_size);

struct BoxCount {
  std::size_t support = 0;
  std::size_t positives = 0;
};

/// Recount a box from scratch against `target` (1 = e-positive rows are good).
BoxCount evaluate_box(const Dataset& ds, const std::vector<Clause>& clauses, int target = 1);

/// Maximal single-feature intervals with no off-target row, over all observed
/// values, plus greedy conjunctions up to max_clauses. Every result is pure,
/// maximal, and has support >= min_support; sorted by support descending.
std::vector<ConjectureBox> mine_zero_fp_boxes(const Dataset& ds, const std::vector<std::string>& candidates,
                                              const MiningConfig& cfg);
/// The same search for boxes containing only e-negative rows.
std::vector<ConjectureBox> negative_condition_scan(const Dataset& ds, const std::vector<std::string>& candidates,
                                                   const MiningConfig& cfg);
/// Exhaustive two-feature search over at most `cuts` endpoint candidates per feature.
std::vector<ConjectureBox> exhaustive_pair_boxes(const Dataset& ds, const std::string& a, const std::string& b,
                                                 std::size_t min_support, std::size_t cuts = 16, int target = 1);

struct ReportMeta {
  int n_max = 0;
  std::size_t dataset_size = 0;
};

std::string conjecture_report_text(const std::vector<ConjectureBox>& boxes, const ReportMeta& meta, bool negative);
nlohmann::json conjecture_report_json(const std::vector<ConjectureBox>& boxes, const ReportMeta& meta, bool negative);
std::string format_value(double v);

}  // namespace epos
