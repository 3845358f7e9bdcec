#include "epos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "epos/error.hpp"

namespace epos {

namespace {

double off_diagonal_norm(const SquareMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> eigenvalues_symmetric(SquareMatrix a) {
  const std::size_t n = a.dim;
  constexpr double kTolerance = 1e-12;
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_diagonal_norm(a) >= kTolerance) {
    if (++sweep > kMaxSweeps) throw InternalError("Jacobi eigenvalue iteration did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q) (Rutishauser's stable form).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

}  // namespace epos
