#include "epos/symfunc.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "epos/checked.hpp"
#include "epos/error.hpp"

namespace epos {

SymFunc SymFunc::zero(int degree, Basis basis) {
  return SymFunc{degree, basis, std::vector<std::int64_t>(partitions_of(degree).size(), 0)};
}

std::int64_t SymFunc::min_coeff() const {
  return coeffs.empty() ? 0 : *std::min_element(coeffs.begin(), coeffs.end());
}

namespace {

// Column-by-column DP; rows with equal remaining sums are interchangeable, so
// the state is the sorted multiset of remaining row sums.
class BinaryMatrixCounter {
 public:
  explicit BinaryMatrixCounter(std::vector<int> col_sums) : cols_(std::move(col_sums)) {}

  std::int64_t count(std::vector<int> rows, std::size_t col) {
    std::sort(rows.begin(), rows.end(), std::greater<>());
    while (!rows.empty() && rows.back() == 0) rows.pop_back();
    if (col == cols_.size()) return rows.empty() ? 1 : 0;
    auto key = std::make_pair(col, rows);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Group rows by remaining value.
    std::vector<std::pair<int, int>> groups;  // (value, multiplicity)
    for (int r : rows) {
      if (!groups.empty() && groups.back().first == r) {
        ++groups.back().second;
      } else {
        groups.emplace_back(r, 1);
      }
    }
    std::int64_t total = 0;
    std::vector<int> take(groups.size(), 0);
    std::function<void(std::size_t, int, std::int64_t)> choose = [&](std::size_t gi, int left, std::int64_t ways) {
      if (gi == groups.size()) {
        if (left != 0) return;
        std::vector<int> next;
        for (std::size_t i = 0; i < groups.size(); ++i) {
          for (int c = 0; c < groups[i].second; ++c) next.push_back(groups[i].first - (c < take[i] ? 1 : 0));
        }
        total = checked_add(total, checked_mul(ways, count(std::move(next), col + 1)));
        return;
      }
      for (int k = 0; k <= std::min(left, groups[gi].second); ++k) {
        take[gi] = k;
        choose(gi + 1, left - k, checked_mul(ways, binomial(groups[gi].second, k)));
      }
      take[gi] = 0;
    };
    choose(0, cols_[col], 1);
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  std::vector<int> cols_;
  std::map<std::pair<std::size_t, std::vector<int>>, std::int64_t> memo_;
};

TransitionMatrix build_matrix(int n) {
  const auto& parts = partitions_of(n);
  TransitionMatrix m{n, parts.size(), std::vector<std::int64_t>(parts.size() * parts.size(), 0)};
  for (std::size_t r = 0; r < parts.size(); ++r) {
    for (std::size_t c = 0; c < parts.size(); ++c) {
      m.entries[r * m.size + c] = count_binary_matrices(parts[r].parts(), parts[c].parts());
    }
  }
  return m;
}

}  // namespace

std::int64_t count_binary_matrices(const std::vector<int>& row_sums, const std::vector<int>& col_sums) {
  BinaryMatrixCounter counter(col_sums);
  return counter.count(row_sums, 0);
}

const TransitionMatrix& e_to_m_matrix(int n) {
  if (n < 1 || n > kMaxDegree) throw ValidationError("e_to_m_matrix supports 1 <= n <= 11, got " + std::to_string(n));
  static std::array<std::once_flag, kMaxDegree + 1> flags;
  static std::array<std::unique_ptr<TransitionMatrix>, kMaxDegree + 1> cache;
  const auto idx = static_cast<std::size_t>(n);
  std::call_once(flags[idx], [n, idx] { cache[idx] = std::make_unique<TransitionMatrix>(build_matrix(n)); });
  return *cache[idx];
}

SymFunc m_to_e(const SymFunc& f) {
  if (f.basis != Basis::monomial) throw ValidationError("m_to_e expects a monomial-basis input");
  if (f.degree == 0) return SymFunc{0, Basis::elementary, f.coeffs};
  const auto& parts = partitions_of(f.degree);
  const TransitionMatrix& m = e_to_m_matrix(f.degree);
  SymFunc a = SymFunc::zero(f.degree, Basis::elementary);

  // partitions_of order is a linear extension of dominance (largest first), and
  // e_{μ'} contributes to m_ν only for ν ⊴ μ with unit coefficient at ν = μ.
  std::vector<std::int64_t> rest = f.coeffs;
  for (std::size_t col = 0; col < parts.size(); ++col) {
    const std::size_t row = partition_index(parts[col].conjugate());
    if (m.at(row, col) != 1) throw InternalError("transition matrix pivot is not 1 at " + parts[col].to_string());
    const std::int64_t coef = rest[col];
    a.coeffs[row] = coef;
    if (coef == 0) continue;
    for (std::size_t c = col; c < parts.size(); ++c) {
      rest[c] = checked_sub(rest[c], checked_mul(coef, m.at(row, c)));
    }
  }
  if (e_to_m(a) != f) throw InternalError("m_to_e residual is nonzero");
  return a;
}

SymFunc e_to_m(const SymFunc& f) {
  if (f.basis != Basis::elementary) throw ValidationError("e_to_m expects an elementary-basis input");
  if (f.degree == 0) return SymFunc{0, Basis::monomial, f.coeffs};
  const TransitionMatrix& m = e_to_m_matrix(f.degree);
  SymFunc out = SymFunc::zero(f.degree, Basis::monomial);
  for (std::size_t r = 0; r < m.size; ++r) {
    if (f.coeffs[r] == 0) continue;
    for (std::size_t c = 0; c < m.size; ++c) {
      out.coeffs[c] = checked_add(out.coeffs[c], checked_mul(f.coeffs[r], m.at(r, c)));
    }
  }
  return out;
}

std::int64_t e_eval_ones(const IntPartition& lambda, int k) {
  if (k < 0) throw ValidationError("e_eval_ones requires k >= 0");
  std::int64_t r = 1;
  for (int p : lambda.parts()) r = checked_mul(r, binomial(k, p));
  return r;
}

nlohmann::json to_json(const SymFunc& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  const auto& parts = partitions_of(f.degree);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    coeffs.push_back(nlohmann::json::array({parts[i].parts(), f.coeffs[i]}));
  }
  return {{"degree", f.degree}, {"basis", f.basis == Basis::elementary ? "e" : "m"}, {"coeffs", std::move(coeffs)}};
}

SymFunc symfunc_from_json(const nlohmann::json& j) {
  try {
    const int degree = j.at("degree").get<int>();
    const std::string basis = j.at("basis").get<std::string>();
    if (basis != "e" && basis != "m") throw ValidationError("symfunc basis must be \"e\" or \"m\"");
    SymFunc f = SymFunc::zero(degree, basis == "e" ? Basis::elementary : Basis::monomial);
    for (const auto& entry : j.at("coeffs")) {
      IntPartition p(entry.at(0).get<std::vector<int>>());
      if (p.weight() != degree) throw ValidationError("symfunc partition " + p.to_string() + " has wrong weight");
      f.set(p, entry.at(1).get<std::int64_t>());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed symfunc JSON: ") + e.what());
  }
}

}  // namespace epos
