#pragma once

// Dense linear algebra over a finite field.

#include <optional>
#include <vector>

#include "fftower/finite_field.hpp"

namespace fftower {

using Matrix = std::vector<std::vector<FieldElement>>;

inline Matrix zero_matrix(const FiniteField& k, std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<FieldElement>(cols, k.zero()));
}

inline Matrix identity_matrix(const FiniteField& k, std::size_t n) {
  Matrix m = zero_matrix(k, n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = k.one();
  return m;
}

inline Matrix mat_mul(const FiniteField& k, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), inner = b.size();
  Matrix r = zero_matrix(k, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < inner; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] = k.add(r[i][j], k.mul(a[i][l], b[l][j]));
    }
  return r;
}

inline Matrix mat_sub(const FiniteField& k, Matrix a, const Matrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] = k.sub(a[i][j], b[i][j]);
  return a;
}

inline std::size_t mat_rank(const FiniteField& k, Matrix a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const FieldElement inv = k.inv(a[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c].is_zero()) continue;
      const FieldElement f = k.mul(a[r][c], inv);
      for (std::size_t j = c; j < cols; ++j) a[r][j] = k.sub(a[r][j], k.mul(f, a[rank][j]));
    }
    ++rank;
  }
  return rank;
}

// Some solution of a x = b, if one exists.
inline std::optional<std::vector<FieldElement>> mat_solve(const FiniteField& k, Matrix a,
                                                          std::vector<FieldElement> b) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivcol;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::swap(b[piv], b[rank]);
    const FieldElement inv = k.inv(a[rank][c]);
    for (std::size_t j = c; j < cols; ++j) a[rank][j] = k.mul(a[rank][j], inv);
    b[rank] = k.mul(b[rank], inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c].is_zero()) continue;
      const FieldElement f = a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[r][j] = k.sub(a[r][j], k.mul(f, a[rank][j]));
      b[r] = k.sub(b[r], k.mul(f, b[rank]));
    }
    pivcol.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (!b[r].is_zero()) return std::nullopt;
  std::vector<FieldElement> x(cols, k.zero());
  for (std::size_t r = 0; r < rank; ++r) x[pivcol[r]] = b[r];
  return x;
}

}  // namespace fftower
