#include "epos/partition.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

#include "epos/error.hpp"

namespace epos {

IntPartition::IntPartition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_) {
    if (p <= 0) throw ValidationError("partition parts must be positive");
    weight_ += p;
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

IntPartition IntPartition::conjugate() const {
  std::vector<int> conj;
  if (!parts_.empty()) {
    for (int i = 1; i <= parts_.front(); ++i) {
      conj.push_back(static_cast<int>(std::count_if(parts_.begin(), parts_.end(), [i](int p) { return p >= i; })));
    }
  }
  return IntPartition(std::move(conj));
}

bool IntPartition::dominated_by(const IntPartition& other) const {
  if (weight_ != other.weight_) return false;
  int a = 0;
  int b = 0;
  const std::size_t len = std::max(parts_.size(), other.parts_.size());
  for (std::size_t i = 0; i < len; ++i) {
    a += i < parts_.size() ? parts_[i] : 0;
    b += i < other.parts_.size() ? other.parts_[i] : 0;
    if (a > b) return false;
  }
  return true;
}

std::vector<int> IntPartition::multiplicities() const {
  std::vector<int> r(static_cast<std::size_t>(weight_ + 1), 0);
  for (int p : parts_) ++r[static_cast<std::size_t>(p)];
  return r;
}

std::string IntPartition::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

std::string IntPartition::to_semicolon_string() const {
  std::string s;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(parts_[i]);
  }
  return s;
}

namespace {

void generate(int remaining, int max_part, std::vector<int>& current, std::vector<IntPartition>& out) {
  if (remaining == 0) {
    out.emplace_back(current);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    current.push_back(p);
    generate(remaining - p, p, current, out);
    current.pop_back();
  }
}

struct PartitionTables {
  std::array<std::vector<IntPartition>, kMaxDegree + 1> lists;
  std::array<std::map<std::vector<int>, std::size_t>, kMaxDegree + 1> index;

  PartitionTables() {
    for (int n = 0; n <= kMaxDegree; ++n) {
      std::vector<int> current;
      generate(n, n, current, lists[static_cast<std::size_t>(n)]);
      for (std::size_t i = 0; i < lists[static_cast<std::size_t>(n)].size(); ++i) {
        index[static_cast<std::size_t>(n)][lists[static_cast<std::size_t>(n)][i].parts()] = i;
      }
    }
  }
};

const PartitionTables& tables() {
  static const PartitionTables t;
  return t;
}

}  // namespace

const std::vector<IntPartition>& partitions_of(int n) {
  if (n < 0 || n > kMaxDegree) throw ValidationError("partitions_of supports 0 <= n <= 11, got " + std::to_string(n));
  return tables().lists[static_cast<std::size_t>(n)];
}

std::size_t partition_index(const IntPartition& p) {
  if (p.weight() > kMaxDegree) throw ValidationError("partition weight exceeds 11");
  return tables().index[static_cast<std::size_t>(p.weight())].at(p.parts());
}

}  // namespace epos
