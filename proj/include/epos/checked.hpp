#pragma once

#include <cstdint>

#include "epos/error.hpp"

namespace epos {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw InternalError("64-bit overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) throw InternalError("64-bit overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw InternalError("64-bit overflow in multiplication");
  return r;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
  return r;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, i);
  return r;
}

}  // namespace epos
