#ifndef CATALIX_UPOLY_HPP
#define CATALIX_UPOLY_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "catalix/numeric.hpp"

namespace catalix {

// Dense univariate polynomial over a field K, coefficients stored lowest
// degree first. The zero polynomial is the empty vector; deg() is -1 there.
template <class K>
struct UPoly {
  std::vector<K> c;

  UPoly() = default;
  explicit UPoly(std::vector<K> coeffs) : c(std::move(coeffs)) { trim(); }
  static UPoly constant(const K& k) {
    UPoly r;
    if (!is_zero(k)) r.c.push_back(k);
    return r;
  }
  static UPoly monomial(int d, const K& k) {
    UPoly r;
    if (!is_zero(k)) {
      r.c.assign(d + 1, K());
      r.c[d] = k;
    }
    return r;
  }

  void trim() {
    while (!c.empty() && is_zero(c.back())) c.pop_back();
  }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool zero() const { return c.empty(); }
  const K& lc() const {
    if (c.empty()) throw Error("lc of zero polynomial");
    return c.back();
  }
  const K& operator[](std::size_t i) const {
    static const K kzero{};
    return i < c.size() ? c[i] : kzero;
  }

  void set(std::size_t i, const K& k) {
    if (i >= c.size()) c.resize(i + 1, K());
    c[i] = k;
    trim();
  }

  K eval(const K& x) const {
    K r{};
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }

  UPoly derivative() const {
    UPoly r;
    if (c.size() < 2) return r;
    r.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
      r.c[i - 1] = is_zero(c[i]) ? K() : of_int(static_cast<long>(i), c[i]) * c[i];
    r.trim();
    return r;
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      if (i < a.c.size()) r.c[i] += a.c[i];
      if (i < b.c.size()) r.c[i] += b.c[i];
    }
    r.trim();
    return r;
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      K x = i < a.c.size() ? a.c[i] : K();
      K y = i < b.c.size() ? b.c[i] : K();
      r.c[i] = x - y;
    }
    r.trim();
    return r;
  }
  friend UPoly operator-(const UPoly& a) {
    UPoly r = a;
    for (auto& k : r.c) k = -k;
    return r;
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.zero() || b.zero()) return UPoly();
    UPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, K());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (is_zero(a.c[i])) continue;
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
  }
  friend UPoly operator*(const K& k, const UPoly& a) {
    UPoly r = a;
    for (auto& x : r.c) x = k * x;
    r.trim();
    return r;
  }
  UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
  UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  friend bool operator==(const UPoly& a, const UPoly& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
      if (!(a.c[i] == b.c[i])) return false;
    return true;
  }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  UPoly pow(unsigned e) const {
    if (zero()) {
      if (e == 0) throw Error("0^0 for polynomials");
      return UPoly();
    }
    UPoly r = constant(unit_of());
    UPoly b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  // A coefficient-field unit taken from this polynomial (needs a term).
  K unit_of() const {
    if (c.empty()) throw Error("unit_of on zero polynomial");
    return unit(lc());
  }

  UPoly monic() const {
    if (zero()) return *this;
    K inv = unit(lc()) / lc();
    return inv * *this;
  }

  // Truncated product / truncation helpers for power series use.
  UPoly truncated(std::size_t n) const {
    UPoly r = *this;
    if (r.c.size() > n) r.c.resize(n);
    r.trim();
    return r;
  }
};

template <class K>
bool is_zero(const UPoly<K>& f) {
  return f.zero();
}

template <class K>
std::pair<UPoly<K>, UPoly<K>> divrem(const UPoly<K>& a, const UPoly<K>& b) {
  if (b.zero()) throw Error("division by zero polynomial");
  UPoly<K> q, r = a;
  if (a.deg() < b.deg()) return {q, r};
  q.c.assign(a.deg() - b.deg() + 1, K());
  K binv = unit(b.lc()) / b.lc();
  while (!r.zero() && r.deg() >= b.deg()) {
    int d = r.deg() - b.deg();
    K f = r.lc() * binv;
    q.c[d] = f;
    for (int i = 0; i <= b.deg(); ++i) r.c[i + d] -= f * b.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

template <class K>
UPoly<K> operator/(const UPoly<K>& a, const UPoly<K>& b) {
  return divrem(a, b).first;
}
template <class K>
UPoly<K> operator%(const UPoly<K>& a, const UPoly<K>& b) {
  return divrem(a, b).second;
}

// Monic gcd via Euclid.
template <class K>
UPoly<K> gcd(UPoly<K> a, UPoly<K> b) {
  while (!b.zero()) {
    UPoly<K> r = a % b;
    a = b;
    b = r;
  }
  return a.monic();
}

// Monic squarefree part f / gcd(f, f').
template <class K>
UPoly<K> upoly_squarefree_part(const UPoly<K>& f) {
  if (f.zero()) return f;
  if (f.deg() == 0) return f.monic();
  UPoly<K> g = gcd(f, f.derivative());
  if (g.deg() <= 0) return f.monic();
  return (f / g).monic();
}

// Resultant by Euclidean PRS; sign convention matches the Sylvester
// determinant. Res of two nonzero constants is 1 (empty matrix).
template <class K>
K upoly_resultant(UPoly<K> a, UPoly<K> b) {
  if (a.zero() || b.zero()) {
    if (a.zero() && b.deg() == 0) return unit(b.lc());
    if (b.zero() && a.deg() == 0) return unit(a.lc());
    return K();
  }
  K sign = unit(a.lc());
  K acc = sign;
  if (a.deg() < b.deg()) {
    if ((a.deg() & 1) && (b.deg() & 1)) sign = -sign;
    std::swap(a, b);
  }
  for (;;) {
    int m = a.deg(), n = b.deg();
    if (m == 0) return sign * acc;                  // both constants by now
    if (n == 0) {
      K l = b.lc(), pw = unit(l);
      for (int i = 0; i < m; ++i) pw = pw * l;
      return sign * acc * pw;
    }
    UPoly<K> r = a % b;
    if (r.zero()) return K();
    int rd = r.deg();
    if ((m & 1) && (n & 1)) sign = -sign;
    K l = b.lc(), pw = unit(l);
    for (int i = 0; i < m - rd; ++i) pw = pw * l;
    acc = acc * pw;
    a = b;
    b = r;
  }
}

// Newton interpolation through distinct nodes.
template <class K>
UPoly<K> upoly_interpolate(const std::vector<K>& xs, const std::vector<K>& ys) {
  if (xs.size() != ys.size()) throw Error("interpolation size mismatch");
  if (xs.empty()) return UPoly<K>();
  std::size_t n = xs.size();
  K one = unit(xs[0]);
  std::vector<K> dd = ys;  // divided differences, in place
  for (std::size_t lvl = 1; lvl < n; ++lvl) {
    for (std::size_t i = n - 1; i >= lvl; --i) {
      K den = xs[i] - xs[i - lvl];
      if (is_zero(den)) throw Error("repeated interpolation nodes");
      dd[i] = (dd[i] - dd[i - 1]) / den;
    }
  }
  UPoly<K> p;
  for (std::size_t i = n; i-- > 0;) {
    UPoly<K> lin;  // x - xs[i]
    lin.c = {-xs[i], one};
    p = p * lin + UPoly<K>::constant(dd[i]);
  }
  return p;
}

// Cauchy rational interpolation: find num/den with deg num <= dn,
// deg den <= dd, dn + dd <= n - 1, den monic, matching all samples.
// Returns nullopt when no admissible fraction exists (e.g. pole at a node).
template <class K>
std::optional<std::pair<UPoly<K>, UPoly<K>>> rat_interp(const std::vector<K>& xs,
                                                        const std::vector<K>& ys,
                                                        int dn, int dd) {
  std::size_t n = xs.size();
  if (n == 0 || dn < 0 || dd < 0 || dn + dd > static_cast<int>(n) - 1) return std::nullopt;
  K one = unit(xs[0]);
  UPoly<K> M = UPoly<K>::constant(one);
  for (auto& x : xs) {
    UPoly<K> lin;
    lin.c.assign(2, K());
    lin.c[0] = -x;
    lin.c[1] = one;
    M *= lin;
  }
  UPoly<K> L = upoly_interpolate(xs, ys);
  // Extended Euclid on (M, L), tracking the L-cofactor only:
  // invariant r = s*M + t*L, so r(x_i) = t(x_i) * y_i at every node.
  UPoly<K> r0 = M, r1 = L, t0, t1 = UPoly<K>::constant(one);
  while (!r1.zero() && r1.deg() > dn) {
    auto [q, r2] = divrem(r0, r1);
    UPoly<K> t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  UPoly<K> num = r1, den = t1;
  if (den.zero() || den.deg() > dd) return std::nullopt;
  if (!num.zero()) {
    UPoly<K> g = gcd(num, den);
    if (g.deg() > 0) {
      num = num / g;
      den = den / g;
    }
  }
  for (auto& x : xs)
    if (is_zero(den.eval(x))) return std::nullopt;
  K dinv = one / den.lc();
  num = dinv * num;
  den = dinv * den;
  return std::make_pair(num, den);
}

// ---------------------------------------------------------------------------
// Integer-level helpers for the Q paths.

inline Int upoly_content_z(const std::vector<Int>& c) {
  Int g = 0;
  for (auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

// Scale a rational polynomial to a primitive integer one; returns the
// integer coefficients and the rational factor s with f = s * pp(f).
inline std::pair<std::vector<Int>, Rat> upoly_primitive(const UPoly<Rat>& f) {
  if (f.zero()) return {{}, Rat(0)};
  Int den = 1;
  for (auto& q : f.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<Int> z(f.c.size());
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    Rat scaled = f.c[i] * Rat(den);
    z[i] = scaled.get_num();
  }
  Int cont = upoly_content_z(z);
  if (z.back() < 0) cont = -cont;
  for (auto& x : z) x /= cont;
  Rat s(cont, den);
  s.canonicalize();
  return {z, s};
}

inline std::pair<std::vector<Int>, std::vector<Int>> upoly_pseudo_rem_z(
    const std::vector<Int>& a, const std::vector<Int>& b) {
  // lc(b)^(da-db+1) * a = q*b + r; returns (q unused, r)
  std::vector<Int> r = a;
  int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
  Int lb = b.back();
  for (int k = da; k >= db; --k) {
    Int f = r[k];  // pre-scaling coefficient
    for (auto& x : r) x *= lb;
    for (int i = 0; i <= db; ++i) r[k - db + i] -= f * b[i];
    // r[k] is now zero
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return {{}, r};
}

// Resultant of integer polynomials by the subresultant PRS (fraction-free).
inline Int upoly_resultant_z(std::vector<Int> A, std::vector<Int> B) {
  auto degof = [](const std::vector<Int>& v) { return static_cast<int>(v.size()) - 1; };
  if (A.empty() || B.empty()) {
    if (A.empty() && degof(B) == 0) return 1;
    if (B.empty() && degof(A) == 0) return 1;
    return 0;
  }
  int s = 1;
  if (degof(A) < degof(B)) {
    if ((degof(A) & 1) && (degof(B) & 1)) s = -s;
    std::swap(A, B);
  }
  Int g = 1, h = 1;
  for (;;) {
    int dA = degof(A), dB = degof(B);
    if (dB == 0) {
      // res = s * B^dA / h^(dA-1)  (exact when using subresultant PRS)
      Int num = pow_int(B[0], dA);
      if (dA >= 1) {
        Int den = pow_int(h, dA - 1);
        if (den != 0) num /= den;
      }
      return s * num;
    }
    int delta = dA - dB;
    if ((dA & 1) && (dB & 1)) s = -s;
    auto [q, R] = upoly_pseudo_rem_z(A, B);
    if (R.empty()) return 0;
    A = B;
    Int div = g * pow_int(h, delta);
    for (auto& x : R) x /= div;
    B = R;
    g = A.back();
    if (delta > 0) {
      Int num = pow_int(g, delta);
      Int den = pow_int(h, delta - 1);
      h = num / den;
    }
  }
}

// Q resultant through the fraction-free integer PRS.
inline Rat upoly_resultant(const UPoly<Rat>& a, const UPoly<Rat>& b) {
  if (a.zero() || b.zero()) {
    if (a.zero() && b.deg() == 0) return Rat(1);
    if (b.zero() && a.deg() == 0) return Rat(1);
    return Rat(0);
  }
  auto [az, as] = upoly_primitive(a);
  auto [bz, bs] = upoly_primitive(b);
  Rat scale = 1;
  for (int i = 0; i < b.deg(); ++i) scale *= as;
  for (int i = 0; i < a.deg(); ++i) scale *= bs;
  Int rz = upoly_resultant_z(az, bz);
  return scale * Rat(rz);
}

template <class K>
std::string to_string(const UPoly<K>& f, const std::string& var = "x") {
  if (f.zero()) return "0";
  std::string out;
  for (int i = f.deg(); i >= 0; --i) {
    if (is_zero(f[i])) continue;
    std::string cs = to_string(f[i]);
    bool neg = !cs.empty() && cs[0] == '-';
    if (out.empty()) {
      if (neg) out += "-", cs = cs.substr(1);
    } else {
      out += neg ? " - " : " + ";
      if (neg) cs = cs.substr(1);
    }
    bool coeff_is_one = (cs == "1");
    if (i == 0) {
      out += cs;
    } else {
      if (!coeff_is_one) out += cs + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace catalix

#endif
