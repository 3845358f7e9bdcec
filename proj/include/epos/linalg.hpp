#pragma once

#include <cstddef>
#include <vector>

namespace epos {

/// Dense row-major square matrix.
struct SquareMatrix {
  std::size_t dim = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t n = 0) : dim(n), data(n * n, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted descending.
/// Iterates until the off-diagonal Frobenius norm is below 1e-12.
std::vector<double> eigenvalues_symmetric(SquareMatrix m);

}  // namespace epos
