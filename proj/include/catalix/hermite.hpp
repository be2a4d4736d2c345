#ifndef CATALIX_HERMITE_HPP
#define CATALIX_HERMITE_HPP

#include <utility>
#include <vector>

#include "catalix/linalg.hpp"
#include "catalix/mpoly.hpp"
#include "catalix/upoly.hpp"

namespace catalix {

// Fraction-free determinant (Bareiss) for matrices over a polynomial ring;
// every division is exact.
template <class K>
MPoly<K> mpoly_det(std::vector<std::vector<MPoly<K>>> m, VarsPtr vars, OrderPtr ord) {
  std::size_t n = m.size();
  if (n == 0) throw Error("mpoly_det: empty matrix");
  for (auto& row : m)
    if (row.size() != n) throw Error("mpoly_det: not square");
  bool neg = false;
  MPoly<K> prev = MPoly<K>::zero(vars, ord);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero_poly()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero_poly()) ++swap_row;
      if (swap_row == n) return MPoly<K>::zero(vars, ord);
      std::swap(m[k], m[swap_row]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MPoly<K> t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = k == 0 ? std::move(t) : exact_div(t, prev);
      }
      m[i][k] = MPoly<K>::zero(vars, ord);
    }
    prev = m[k][k];
  }
  return neg ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Scaled Newton power sums of a univariate polynomial with parametric
// coefficients: S_m = s_m * lc^m is polynomial in the parameters, where s_m
// is the m-th power sum of the roots.
template <class K>
std::vector<MPoly<K>> hermite_power_sums(const std::vector<MPoly<K>>& coeffs, int upto) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d >= 0 && coeffs[static_cast<std::size_t>(d)].is_zero_poly()) --d;
  if (d < 0) throw Error("power sums of the zero polynomial");
  VarsPtr vars = coeffs[static_cast<std::size_t>(d)].vars;
  OrderPtr ord = coeffs[static_cast<std::size_t>(d)].ord;
  const MPoly<K>& lc = coeffs[static_cast<std::size_t>(d)];
  K one = unit(lc.lc());
  auto cf = [&](int i) -> const MPoly<K>& { return coeffs[static_cast<std::size_t>(i)]; };

  std::vector<MPoly<K>> lcpow(static_cast<std::size_t>(std::max(upto, 1)) + 1,
                              MPoly<K>::constant(vars, ord, one));
  for (std::size_t e = 1; e < lcpow.size(); ++e) lcpow[e] = lcpow[e - 1] * lc;

  std::vector<MPoly<K>> s;
  s.push_back(MPoly<K>::constant(vars, ord, of_int(d, one)));
  for (int m = 1; m <= upto; ++m) {
    MPoly<K> acc = MPoly<K>::zero(vars, ord);
    int top = std::min(m, d);
    for (int i = 1; i <= top; ++i) {
      if (i == m) continue;  // handled by the closed m <= d term below
      acc = acc + cf(d - i) * lcpow[static_cast<std::size_t>(i - 1)] *
                      s[static_cast<std::size_t>(m - i)];
    }
    if (m <= d)
      acc = acc + of_int(m, one) * (cf(d - m) * lcpow[static_cast<std::size_t>(m - 1)]);
    s.push_back(-acc);
  }
  return s;
}

template <class K>
struct HermiteMinor {
  MPoly<K> numerator;     // det over the scaled entries S_{r+c}
  unsigned lc_exponent;   // divide by lc^{sum rows + sum cols} to get the minor
  std::vector<int> rows, cols;
};

namespace detail {
inline void combinations(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
}
}  // namespace detail

// All i x i minors of the Hermite quadratic form of g (entries s_{r+c}),
// as scaled numerators plus the power of lc_u(g) they carry. The principal
// minor comes first.
template <class K>
std::vector<HermiteMinor<K>> hermite_minors(const std::vector<MPoly<K>>& coeffs, int i) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d >= 0 && coeffs[static_cast<std::size_t>(d)].is_zero_poly()) --d;
  if (d < 1) throw Error("hermite_minors: degree must be at least 1");
  if (i < 1 || i > d) throw Error("hermite_minors: order out of range");
  auto s = hermite_power_sums(coeffs, 2 * d - 2);
  VarsPtr vars = s[0].vars;
  OrderPtr ord = s[0].ord;

  std::vector<std::vector<int>> sets;
  detail::combinations(d, i, sets);
  std::vector<HermiteMinor<K>> out;
  for (auto& rows : sets) {
    for (auto& cols : sets) {
      HermiteMinor<K> mn;
      mn.rows = rows;
      mn.cols = cols;
      unsigned expo = 0;
      std::vector<std::vector<MPoly<K>>> sub(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        expo += static_cast<unsigned>(rows[r]);
        for (std::size_t c = 0; c < cols.size(); ++c)
          sub[r].push_back(s[static_cast<std::size_t>(rows[r] + cols[c])]);
      }
      for (int c : cols) expo += static_cast<unsigned>(c);
      mn.lc_exponent = expo;
      mn.numerator = mpoly_det(std::move(sub), vars, ord);
      out.push_back(std::move(mn));
    }
  }
  return out;
}

// Rank of the Hermite form of a univariate polynomial over a field: equals
// the number of distinct roots over the algebraic closure.
template <class K>
int hermite_rank(const UPoly<K>& g) {
  int d = g.deg();
  if (d <= 0) throw Error("hermite_rank: degree must be at least 1");
  K lc = g.lc();
  std::vector<K> s;
  s.push_back(of_int(d, lc));
  for (int m = 1; m <= 2 * d - 2; ++m) {
    K acc{};
    int top = std::min(m, d);
    for (int i = 1; i <= top; ++i) {
      if (i == m) continue;
      acc = acc + g[static_cast<std::size_t>(d - i)] * s[static_cast<std::size_t>(m - i)];
    }
    if (m <= d) acc = acc + of_int(m, lc) * g[static_cast<std::size_t>(d - m)];
    s.push_back((K() - acc) / lc);
  }
  Matrix<K> h(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) h.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
        s[static_cast<std::size_t>(r + c)];
  return static_cast<int>(rank(h));
}

}  // namespace catalix

#endif
