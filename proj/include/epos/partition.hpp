#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace epos {

inline constexpr int kMaxDegree = 11;

/// Integer partition: weakly decreasing positive parts.
class IntPartition {
 public:
  IntPartition() = default;
  /// Parts are sorted into weakly decreasing order; zero parts are rejected.
  explicit IntPartition(std::vector<int> parts);
  IntPartition(std::initializer_list<int> parts) : IntPartition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const noexcept { return parts_; }
  int weight() const noexcept { return weight_; }
  std::size_t length() const noexcept { return parts_.size(); }

  IntPartition conjugate() const;
  /// Dominance order: prefix sums of *this are all <= those of other.
  bool dominated_by(const IntPartition& other) const;
  /// Multiplicity of part size i, for i = 1..weight.
  std::vector<int> multiplicities() const;

  std::string to_string() const;          // "(3,1)"
  std::string to_semicolon_string() const;  // "3;1"

  friend bool operator==(const IntPartition&, const IntPartition&) = default;
  /// Lexicographic on parts; partitions_of lists them in decreasing order.
  friend std::strong_ordering operator<=>(const IntPartition& a, const IntPartition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

/// All partitions of n in reverse-lexicographic order, e.g. (4),(3,1),(2,2),(2,1,1),(1,1,1,1).
/// Cached; 0 <= n <= 11.
const std::vector<IntPartition>& partitions_of(int n);
/// Position of `p` in partitions_of(p.weight()).
std::size_t partition_index(const IntPartition& p);

}  // namespace epos
