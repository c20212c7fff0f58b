// Shared basics: error types, numeric helpers, small dense linear algebra.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheb {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Input shapes disagree (row lengths, basis vs point dimension, ...).
struct DimensionError : Error {
  using Error::Error;
};
// A stated precondition does not hold for the given data.
struct PreconditionError : Error {
  using Error::Error;
};
// The algorithm could not certify its own result (stalled pivoting, bad witness).
struct NumericalError : Error {
  using Error::Error;
};
// Malformed input files; carries a human-readable location.
struct ParseError : Error {
  using Error::Error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

namespace detail {

// Gauss-Jordan with partial pivoting. Returns nullopt when the matrix is
// singular to working precision.
inline std::optional<Vec> solve_linear(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw DimensionError("solve_linear: matrix must be square");
  if (b.size() != n) throw DimensionError("solve_linear: rhs length mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const double d = a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] /= d;
    b[col] /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      b[r] -= f * b[col];
    }
  }
  return b;
}

// Row-reduces a copy of `a` and reports rank plus one unit-scaled null-space
// vector (nullopt when a has full column rank). Deterministic pivot choice.
struct NullSpaceInfo {
  std::size_t rank = 0;
  std::optional<Vec> vector;
};

inline NullSpaceInfo null_space(Mat a, double tol = 1e-10) {
  if (a.empty()) return {0, std::nullopt};
  const std::size_t rows = a.size(), cols = a[0].size();
  for (const auto& r : a)
    if (r.size() != cols) throw DimensionError("null_space: ragged matrix");
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (std::abs(a[piv][c]) <= tol) continue;
    std::swap(a[piv], a[r]);
    const double d = a[r][c];
    for (std::size_t j = 0; j < cols; ++j) a[r][j] /= d;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0.0) continue;
      const double f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  NullSpaceInfo info;
  info.rank = pivot_col.size();
  if (info.rank == cols) return info;
  // First free column yields the canonical null vector.
  std::size_t free_col = 0;
  {
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    while (free_col < cols && is_pivot[free_col]) ++free_col;
  }
  Vec v(cols, 0.0);
  v[free_col] = 1.0;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a[i][free_col];
  return {info.rank, v};
}

}  // namespace detail
}  // namespace cheb
