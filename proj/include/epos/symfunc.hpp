#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "epos/partition.hpp"

namespace epos {

enum class Basis { monomial, elementary };

/// Homogeneous symmetric function of degree n with exact integer coefficients,
/// indexed by partitions_of(degree).
struct SymFunc {
  int degree = 0;
  Basis basis = Basis::monomial;
  std::vector<std::int64_t> coeffs;

  static SymFunc zero(int degree, Basis basis);
  std::int64_t coeff(const IntPartition& p) const { return coeffs.at(partition_index(p)); }
  void set(const IntPartition& p, std::int64_t value) { coeffs.at(partition_index(p)) = value; }
  std::int64_t min_coeff() const;

  friend bool operator==(const SymFunc&, const SymFunc&) = default;
};

/// entry(row, col) is the coefficient of m_{col} in e_{row}, rows and columns
/// indexed by partitions_of(degree).
struct TransitionMatrix {
  int degree = 0;
  std::size_t size = 0;
  std::vector<std::int64_t> entries;

  std::int64_t at(std::size_t row, std::size_t col) const { return entries[row * size + col]; }
};

/// Cached per degree; each entry counts 0-1 matrices with row sums λ and column sums μ.
const TransitionMatrix& e_to_m_matrix(int n);
/// Number of 0-1 matrices with the given row and column sums.
std::int64_t count_binary_matrices(const std::vector<int>& row_sums, const std::vector<int>& col_sums);

/// Exact monomial-to-elementary conversion by unitriangular back-substitution.
/// Throws InternalError if the residual is nonzero.
SymFunc m_to_e(const SymFunc& f);
/// Elementary-to-monomial conversion (matrix product).
SymFunc e_to_m(const SymFunc& f);

/// e_λ(1,...,1,0,...) with k ones: ∏ binomial(k, λ_i).
std::int64_t e_eval_ones(const IntPartition& lambda, int k);

nlohmann::json to_json(const SymFunc& f);
SymFunc symfunc_from_json(const nlohmann::json& j);

}  // namespace epos
