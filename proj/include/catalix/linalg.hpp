#ifndef CATALIX_LINALG_HPP
#define CATALIX_LINALG_HPP

#include <utility>
#include <vector>

#include "catalix/upoly.hpp"

namespace catalix {

template <class K>
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<K> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  K& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const K& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n, const K& one) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one;
    return m;
  }
};

// In-place reduction to row echelon form; returns pivot columns.
template <class K>
std::vector<std::size_t> row_echelon(Matrix<K>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t sel = r;
    while (sel < m.rows && is_zero(m.at(sel, c))) ++sel;
    if (sel == m.rows) continue;
    if (sel != r)
      for (std::size_t j = c; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
    K inv = unit(m.at(r, c)) / m.at(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = inv * m.at(r, j);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || is_zero(m.at(i, c))) continue;
      K f = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class K>
std::size_t rank(Matrix<K> m) {
  return row_echelon(m).size();
}

// Kernel basis, one vector per free column, in ascending free-column order.
template <class K>
std::vector<std::vector<K>> nullspace(Matrix<K> m, const K& one) {
  auto pivots = row_echelon(m);
  std::vector<char> is_pivot(m.cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<K>> basis;
  for (std::size_t fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<K> v(m.cols);
    v[fc] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class K>
K det(Matrix<K> m) {
  if (m.rows != m.cols) throw Error("det of non-square matrix");
  if (m.rows == 0) throw Error("det of empty matrix needs a field sample");
  K d{};
  bool have_unit = false;
  for (auto& x : m.a)
    if (!is_zero(x)) {
      d = unit(x);
      have_unit = true;
      break;
    }
  if (!have_unit) return K();
  for (std::size_t c = 0; c < m.cols; ++c) {
    std::size_t sel = c;
    while (sel < m.rows && is_zero(m.at(sel, c))) ++sel;
    if (sel == m.rows) return K();
    if (sel != c) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(c, j));
      d = -d;
    }
    d = d * m.at(c, c);
    K inv = unit(m.at(c, c)) / m.at(c, c);
    for (std::size_t i = c + 1; i < m.rows; ++i) {
      if (is_zero(m.at(i, c))) continue;
      K f = m.at(i, c) * inv;
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

// Characteristic polynomial det(lambda*I - M) via Hessenberg reduction;
// exact over any field. O(n^3) field operations.
template <class K>
UPoly<K> char_poly(Matrix<K> h, const K& one) {
  if (h.rows != h.cols) throw Error("char_poly of non-square matrix");
  std::size_t n = h.rows;
  UPoly<K> unit_poly = UPoly<K>::constant(one);
  if (n == 0) return unit_poly;
  // similarity reduction to upper Hessenberg
  for (std::size_t c = 0; c + 2 < n; ++c) {
    std::size_t sel = c + 1;
    while (sel < n && is_zero(h.at(sel, c))) ++sel;
    if (sel == n) continue;
    if (sel != c + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h.at(sel, j), h.at(c + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h.at(i, sel), h.at(i, c + 1));
    }
    K pinv = one / h.at(c + 1, c);
    for (std::size_t i = c + 2; i < n; ++i) {
      if (is_zero(h.at(i, c))) continue;
      K f = h.at(i, c) * pinv;
      for (std::size_t j = 0; j < n; ++j) h.at(i, j) -= f * h.at(c + 1, j);
      for (std::size_t j = 0; j < n; ++j) h.at(j, c + 1) += f * h.at(j, i);
    }
  }
  // p_m(lambda) for leading principal m x m blocks
  std::vector<UPoly<K>> p(n + 1);
  p[0] = unit_poly;
  for (std::size_t m = 1; m <= n; ++m) {
    UPoly<K> lam_minus;  // lambda - h[m-1][m-1]
    lam_minus.c = {-h.at(m - 1, m - 1), one};
    p[m] = lam_minus * p[m - 1];
    K prod = one;
    for (std::size_t i = m - 1; i-- > 0;) {
      prod = prod * h.at(i + 1, i);
      K coeff = prod * h.at(i, m - 1);
      if (!is_zero(coeff)) p[m] -= coeff * p[i];
    }
  }
  return p[n];
}

}  // namespace catalix

#endif
