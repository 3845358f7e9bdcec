#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "epos/csf.hpp"
#include "epos/nn.hpp"

namespace epos {

/// Feature table: one row per graph, label 1 = e-positive.
struct Dataset {
  std::vector<std::string> graph6;
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> labels;

  std::size_t size() const { return graph6.size(); }
  /// Column index; ValidationError naming the feature if absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> column_values(std::string_view name) const;
  Matrix columns(const std::vector<std::string>& names) const;
  Dataset subset(const std::vector<std::size_t>& rows) const;
  void add_column(std::string name, const std::vector<double>& values);
};

/// Features of each graph (schema order) with the given labels.
Dataset build_dataset(const std::vector<Graph>& graphs, const std::vector<int>& labels);

/// Header: graph6, feature names..., e_positive. Values printed with 17 significant digits.
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::string_view text, const std::string& source);
Dataset load_dataset(const std::string& path);

/// Label file: graph6,e_positive,min_e_coeff,witness.
std::string label_header();
std::string label_row(const LabelRecord& r);
LabelRecord parse_label_row(std::string_view line, std::size_t line_no, const std::string& source);
std::vector<LabelRecord> labels_from_csv(std::string_view text, const std::string& source);

/// Splits on commas; no quoting (graph6 bytes never include a comma).
std::vector<std::string_view> split_csv_line(std::string_view line);
/// Lines without terminators; a trailing empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace epos
