#include "epos/dataset.hpp"

#include <charconv>
#include <cmath>

#include "epos/error.hpp"
#include "epos/invariants.hpp"
#include "epos/io.hpp"

namespace epos {

std::size_t Dataset::column(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i)
    if (feature_names[i] == name) return i;
  throw ValidationError("dataset has no feature \"" + std::string(name) + "\"");
}

std::vector<double> Dataset::column_values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out(features.rows);
  for (std::size_t r = 0; r < features.rows; ++r) out[r] = features(r, c);
  return out;
}

Matrix Dataset::columns(const std::vector<std::string>& names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(column(n));
  return features.select_cols(idx);
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.features = features.select_rows(rows);
  for (std::size_t r : rows) {
    out.graph6.push_back(graph6[r]);
    out.labels.push_back(labels[r]);
  }
  return out;
}

void Dataset::add_column(std::string name, const std::vector<double>& values) {
  if (values.size() != size()) throw ValidationError("new column length does not match the dataset");
  for (const auto& n : feature_names)
    if (n == name) throw ValidationError("dataset already has a column \"" + name + "\"");
  Matrix m(features.rows, features.cols + 1);
  for (std::size_t r = 0; r < features.rows; ++r) {
    std::copy_n(features.row(r), features.cols, m.row(r));
    m(r, features.cols) = values[r];
  }
  features = std::move(m);
  feature_names.push_back(std::move(name));
}

Dataset build_dataset(const std::vector<Graph>& graphs, const std::vector<int>& labels) {
  if (graphs.size() != labels.size()) throw ValidationError("graphs and labels differ in length");
  Dataset ds;
  ds.feature_names = feature_schema().names();
  ds.features = Matrix(graphs.size(), kFeatureCount);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const FeatureVector f = compute_features(graphs[i]);
    std::copy(f.values.begin(), f.values.end(), ds.features.row(i));
    ds.graph6.push_back(encode_graph6(graphs[i]));
  }
  ds.labels = labels;
  return ds;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = nl + 1;
  }
  return out;
}

std::string dataset_to_csv(const Dataset& ds) {
  std::string out = "graph6";
  for (const auto& n : ds.feature_names) out += "," + n;
  out += ",e_positive\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    out += ds.graph6[r];
    for (std::size_t c = 0; c < ds.features.cols; ++c) {
      out += ',';
      out += format_double(ds.features(r, c));
    }
    out += ds.labels[r] ? ",1\n" : ",0\n";
  }
  return out;
}

namespace {

[[noreturn]] void bad_line(const std::string& source, std::size_t line_no, const std::string& what) {
  throw ValidationError(source + ":" + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string_view s, const std::string& source, std::size_t line_no) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    bad_line(source, line_no, "bad number \"" + std::string(s) + "\"");
  return v;
}

int parse_flag(std::string_view s, const std::string& source, std::size_t line_no) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  bad_line(source, line_no, "expected 0 or 1, got \"" + std::string(s) + "\"");
}

}  // namespace

Dataset dataset_from_csv(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ValidationError(source + ": empty dataset file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 3 || header.front() != "graph6" || header.back() != "e_positive")
    bad_line(source, 1, "header must be graph6,<features...>,e_positive");
  Dataset ds;
  for (std::size_t i = 1; i + 1 < header.size(); ++i) ds.feature_names.emplace_back(header[i]);
  const std::size_t width = ds.feature_names.size();
  ds.features = Matrix(lines.size() - 1, width);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split_csv_line(lines[li]);
    if (cells.size() != width + 2)
      bad_line(source, li + 1, "expected " + std::to_string(width + 2) + " fields, got " + std::to_string(cells.size()));
    ds.graph6.emplace_back(cells[0]);
    for (std::size_t c = 0; c < width; ++c) ds.features(li - 1, c) = parse_number(cells[c + 1], source, li + 1);
    ds.labels.push_back(parse_flag(cells.back(), source, li + 1));
  }
  return ds;
}

Dataset load_dataset(const std::string& path) { return dataset_from_csv(read_file(path), path); }

std::string label_header() { return "graph6,e_positive,min_e_coeff,witness"; }

std::string label_row(const LabelRecord& r) {
  return r.graph6 + (r.e_positive ? ",1," : ",0,") + std::to_string(r.min_e_coeff) + "," + r.witness_partition;
}

LabelRecord parse_label_row(std::string_view line, std::size_t line_no, const std::string& source) {
  const auto cells = split_csv_line(line);
  if (cells.size() != 4) bad_line(source, line_no, "expected 4 fields, got " + std::to_string(cells.size()));
  LabelRecord r;
  r.graph6 = std::string(cells[0]);
  r.e_positive = parse_flag(cells[1], source, line_no) == 1;
  const auto [ptr, ec] = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), r.min_e_coeff);
  if (ec != std::errc() || ptr != cells[2].data() + cells[2].size())
    bad_line(source, line_no, "bad integer \"" + std::string(cells[2]) + "\"");
  r.witness_partition = std::string(cells[3]);
  return r;
}

std::vector<LabelRecord> labels_from_csv(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != label_header()) bad_line(source, 1, "header must be " + label_header());
  std::vector<LabelRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(parse_label_row(lines[i], i + 1, source));
  return out;
}

}  // namespace epos
