#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epos/graph.hpp"

namespace epos {

inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr std::size_t kFeatureCount = 44;

enum class FeatureKind { discrete, continuous };

struct FeatureSpec {
  std::string name;
  FeatureKind kind;
  std::string definition;
};

/// The 44 invariants, in dataset column order.
struct FeatureCatalog {
  int version = kFeatureSchemaVersion;
  std::vector<FeatureSpec> features;

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;
};

const FeatureCatalog& feature_schema();

struct FeatureVector {
  int schema_version = kFeatureSchemaVersion;
  std::vector<double> values;

  double operator[](std::string_view name) const;
};

/// All catalog invariants of a connected graph with 1 <= n <= 11.
FeatureVector compute_features(const Graph& g);

// Individual invariants reused elsewhere.
int chromatic_number(const Graph& g);
int matching_number(const Graph& g);
int domination_number(const Graph& g);
int vertex_connectivity(const Graph& g);
int edge_connectivity(const Graph& g);
int girth(const Graph& g);
int triangle_count(const Graph& g);
/// Spanning trees, exact via fraction-free elimination on the reduced Laplacian.
std::int64_t spanning_tree_count(const Graph& g);

}  // namespace epos
