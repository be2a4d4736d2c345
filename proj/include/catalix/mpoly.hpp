#ifndef CATALIX_MPOLY_HPP
#define CATALIX_MPOLY_HPP

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "catalix/numeric.hpp"
#include "catalix/upoly.hpp"
#include "catalix/vars.hpp"

namespace catalix {

template <class K>
K pow_scalar(K base, unsigned e) {
  K r = of_int(1, base);
  while (e) {
    if (e & 1u) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

// Sparse multivariate polynomial. Terms are kept sorted strictly descending
// under the attached order; no zero coefficients are stored.
template <class K>
struct MPoly {
  VarsPtr vars;
  OrderPtr ord;
  std::vector<std::pair<Monomial, K>> ts;

  MPoly() = default;
  MPoly(VarsPtr v, OrderPtr o) : vars(std::move(v)), ord(std::move(o)) {}

  static MPoly zero(VarsPtr v, OrderPtr o) { return MPoly(std::move(v), std::move(o)); }
  static MPoly constant(VarsPtr v, OrderPtr o, K c) {
    MPoly r(std::move(v), std::move(o));
    if (!is_zero(c)) r.ts.emplace_back(Monomial(r.vars->size()), std::move(c));
    return r;
  }
  static MPoly var(VarsPtr v, OrderPtr o, int idx, unsigned exp, K c) {
    MPoly r(std::move(v), std::move(o));
    if (!is_zero(c)) r.ts.emplace_back(Monomial::var(r.vars->size(), idx, exp), std::move(c));
    return r;
  }

  bool is_zero_poly() const { return ts.empty(); }
  std::size_t nterms() const { return ts.size(); }
  const Monomial& lm() const {
    if (ts.empty()) throw Error("leading monomial of zero");
    return ts.front().first;
  }
  const K& lc() const {
    if (ts.empty()) throw Error("leading coefficient of zero");
    return ts.front().second;
  }

  int total_deg() const {
    int d = -1;
    for (auto& t : ts) d = std::max(d, static_cast<int>(t.first.deg));
    return d;
  }
  int deg_in(int v) const {
    int d = -1;
    for (auto& t : ts) d = std::max(d, static_cast<int>(t.first.e[v]));
    return d;
  }
  bool uses(int v) const {
    for (auto& t : ts)
      if (t.first.e[v]) return true;
    return false;
  }

  K coeff_of(const Monomial& m) const {
    for (auto& t : ts)
      if (t.first == m) return t.second;
    return K();
  }
  K constant_term() const { return coeff_of(Monomial(vars->size())); }

  void check_same_ring(const MPoly& o) const {
    if (vars != o.vars || ord != o.ord) throw Error("mixed polynomial rings");
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    a.check_same_ring(b);
    MPoly r(a.vars, a.ord);
    r.ts.reserve(a.ts.size() + b.ts.size());
    std::size_t i = 0, j = 0;
    while (i < a.ts.size() && j < b.ts.size()) {
      int c = a.ord->cmp(a.ts[i].first, b.ts[j].first);
      if (c > 0)
        r.ts.push_back(a.ts[i++]);
      else if (c < 0)
        r.ts.push_back(b.ts[j++]);
      else {
        K s = a.ts[i].second + b.ts[j].second;
        if (!is_zero(s)) r.ts.emplace_back(a.ts[i].first, std::move(s));
        ++i, ++j;
      }
    }
    for (; i < a.ts.size(); ++i) r.ts.push_back(a.ts[i]);
    for (; j < b.ts.size(); ++j) r.ts.push_back(b.ts[j]);
    return r;
  }
  friend MPoly operator-(const MPoly& a) {
    MPoly r = a;
    for (auto& t : r.ts) t.second = K() - t.second;
    return r;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

  // this += c * m * g, the inner loop of polynomial reduction
  void axpy(const K& c, const Monomial& m, const MPoly& g) {
    check_same_ring(g);
    if (is_zero(c) || g.ts.empty()) return;
    std::vector<std::pair<Monomial, K>> shifted;
    shifted.reserve(g.ts.size());
    for (auto& t : g.ts) {
      K v = c * t.second;
      if (!is_zero(v)) shifted.emplace_back(t.first * m, std::move(v));
    }
    std::vector<std::pair<Monomial, K>> merged;
    merged.reserve(ts.size() + shifted.size());
    std::size_t i = 0, j = 0;
    while (i < ts.size() && j < shifted.size()) {
      int cc = ord->cmp(ts[i].first, shifted[j].first);
      if (cc > 0)
        merged.push_back(std::move(ts[i++]));
      else if (cc < 0)
        merged.push_back(std::move(shifted[j++]));
      else {
        K s = ts[i].second + shifted[j].second;
        if (!is_zero(s)) merged.emplace_back(ts[i].first, std::move(s));
        ++i, ++j;
      }
    }
    for (; i < ts.size(); ++i) merged.push_back(std::move(ts[i]));
    for (; j < shifted.size(); ++j) merged.push_back(std::move(shifted[j]));
    ts = std::move(merged);
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check_same_ring(b);
    MPoly r(a.vars, a.ord);
    if (a.ts.empty() || b.ts.empty()) return r;
    const MPoly& outer = a.ts.size() <= b.ts.size() ? a : b;
    const MPoly& inner = a.ts.size() <= b.ts.size() ? b : a;
    for (auto& t : outer.ts) r.axpy(t.second, t.first, inner);
    return r;
  }
  friend MPoly operator*(const K& c, const MPoly& a) {
    MPoly r = a;
    if (is_zero(c)) return MPoly(a.vars, a.ord);
    for (auto& t : r.ts) t.second = c * t.second;
    r.ts.erase(std::remove_if(r.ts.begin(), r.ts.end(),
                              [](auto& t) { return is_zero(t.second); }),
               r.ts.end());
    return r;
  }

  MPoly pow(unsigned e) const {
    if (ts.empty()) {
      if (e == 0) throw Error("0^0 for polynomials");
      return MPoly(vars, ord);
    }
    MPoly r = constant(vars, ord, unit(ts.front().second));
    MPoly b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  // Differentiation multiplies by a positive exponent, which keeps relative
  // order of surviving terms, so no re-sort is needed.
  MPoly derive(int v) const {
    MPoly r(vars, ord);
    for (auto& t : ts) {
      if (!t.first.e[v]) continue;
      Monomial m = t.first;
      K c = of_int(static_cast<long>(m.e[v]), t.second) * t.second;
      m.e[v] -= 1;
      m.deg -= 1;
      if (!is_zero(c)) r.ts.emplace_back(std::move(m), std::move(c));
    }
    return r;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (a.ts.size() != b.ts.size()) return false;
    for (std::size_t i = 0; i < a.ts.size(); ++i)
      if (!(a.ts[i].first == b.ts[i].first) || !(a.ts[i].second == b.ts[i].second)) return false;
    return true;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
};

// Rebuild the term list after arbitrary edits (sorting + combining equals).
template <class K>
MPoly<K> mpoly_from_terms(VarsPtr vars, OrderPtr ord,
                          std::vector<std::pair<Monomial, K>> raw) {
  std::sort(raw.begin(), raw.end(),
            [&](auto& x, auto& y) { return ord->cmp(x.first, y.first) > 0; });
  MPoly<K> r(std::move(vars), std::move(ord));
  for (auto& t : raw) {
    if (!r.ts.empty() && r.ts.back().first == t.first)
      r.ts.back().second = r.ts.back().second + t.second;
    else
      r.ts.push_back(std::move(t));
  }
  r.ts.erase(std::remove_if(r.ts.begin(), r.ts.end(),
                            [](auto& t) { return is_zero(t.second); }),
             r.ts.end());
  return r;
}

// Re-sort the same terms under a different order on the same variable table.
template <class K>
MPoly<K> reorder(const MPoly<K>& f, OrderPtr ord) {
  return mpoly_from_terms(f.vars, std::move(ord), f.ts);
}

// Map every variable of f through var_image (source index -> target poly).
// Entries may be full polynomials; every variable actually used must be set.
template <class K>
MPoly<K> map_vars(const MPoly<K>& f, VarsPtr tvars, OrderPtr tord,
                  const std::vector<std::optional<MPoly<K>>>& var_image) {
  MPoly<K> acc = MPoly<K>::zero(tvars, tord);
  // powers[v][i] holds image(v)^(i+1)
  std::vector<std::vector<MPoly<K>>> powers(f.vars->size());
  auto power = [&](int v, unsigned e) -> const MPoly<K>& {
    auto& tab = powers[v];
    if (tab.empty()) {
      if (static_cast<std::size_t>(v) >= var_image.size() || !var_image[v])
        throw Error("map_vars: unmapped variable " + f.vars->names[v]);
      tab.push_back(*var_image[v]);
    }
    while (tab.size() < e) tab.push_back(tab.back() * *var_image[v]);
    return tab[e - 1];
  };
  for (auto& t : f.ts) {
    MPoly<K> term = MPoly<K>::constant(tvars, tord, t.second);
    for (std::size_t v = 0; v < t.first.e.size(); ++v)
      if (t.first.e[v]) term = term * power(static_cast<int>(v), t.first.e[v]);
    acc = acc + term;
  }
  return acc;
}

// Identity-by-name transport into a (usually larger) ring.
template <class K>
MPoly<K> transport(const MPoly<K>& f, VarsPtr tvars, OrderPtr tord) {
  std::vector<std::optional<MPoly<K>>> img(f.vars->size());
  for (std::size_t v = 0; v < f.vars->size(); ++v) {
    if (!f.uses(static_cast<int>(v))) continue;
    int tv = tvars->index(f.vars->names[v]);
    if (tv < 0) throw Error("transport: missing variable " + f.vars->names[v]);
    K one = unit(f.ts.front().second);
    img[v] = MPoly<K>::var(tvars, tord, tv, 1, one);
  }
  return map_vars(f, std::move(tvars), std::move(tord), img);
}

// Substitute constants for a subset of variables, staying in the same ring.
template <class K>
MPoly<K> subst_consts(const MPoly<K>& f, const std::vector<std::optional<K>>& vals) {
  std::vector<std::pair<Monomial, K>> raw;
  for (auto& t : f.ts) {
    Monomial m = t.first;
    K c = t.second;
    for (std::size_t v = 0; v < vals.size(); ++v) {
      if (!vals[v] || !m.e[v]) continue;
      c = c * pow_scalar(*vals[v], m.e[v]);
      m.deg -= m.e[v];
      m.e[v] = 0;
    }
    if (!is_zero(c)) raw.emplace_back(std::move(m), std::move(c));
  }
  return mpoly_from_terms(f.vars, f.ord, std::move(raw));
}

// Full evaluation at a point (one value per table variable).
template <class K>
K mpoly_eval(const MPoly<K>& f, const std::vector<K>& point) {
  if (point.size() != f.vars->size()) throw Error("mpoly_eval: point size mismatch");
  K acc{};
  for (auto& t : f.ts) {
    K c = t.second;
    for (std::size_t v = 0; v < point.size(); ++v)
      if (t.first.e[v]) c = c * pow_scalar(point[v], t.first.e[v]);
    acc = acc + c;
  }
  return acc;
}

// Coefficient-of-v^i decomposition; the returned polynomials do not use v.
template <class K>
std::vector<MPoly<K>> coeffs_in(const MPoly<K>& f, int v) {
  int d = f.deg_in(v);
  std::vector<std::vector<std::pair<Monomial, K>>> buckets(static_cast<std::size_t>(d + 1));
  for (auto& t : f.ts) {
    Monomial m = t.first;
    unsigned i = m.e[v];
    m.deg -= i;
    m.e[v] = 0;
    buckets[i].emplace_back(std::move(m), t.second);
  }
  std::vector<MPoly<K>> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(mpoly_from_terms(f.vars, f.ord, std::move(b)));
  if (out.empty()) out.push_back(MPoly<K>::zero(f.vars, f.ord));
  return out;
}

template <class K>
MPoly<K> from_coeffs_in(const std::vector<MPoly<K>>& cs, int v, VarsPtr vars, OrderPtr ord) {
  std::vector<std::pair<Monomial, K>> raw;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (auto& t : cs[i].ts) {
      Monomial m = t.first;
      std::uint32_t e = static_cast<std::uint32_t>(m.e[v]) + static_cast<std::uint32_t>(i);
      if (e > 0xffff) throw Error("monomial exponent overflow");
      m.e[v] = static_cast<std::uint16_t>(e);
      m.deg += static_cast<std::uint32_t>(i);
      raw.emplace_back(std::move(m), t.second);
    }
  }
  return mpoly_from_terms(std::move(vars), std::move(ord), std::move(raw));
}

// View as univariate in v; requires every other variable absent.
template <class K>
UPoly<K> to_upoly(const MPoly<K>& f, int v) {
  UPoly<K> r;
  for (auto& t : f.ts) {
    if (t.first.deg != t.first.e[v])
      throw Error("to_upoly: polynomial is not univariate in " + f.vars->names[v]);
    r.set(t.first.e[v], t.second);
  }
  return r;
}

template <class K>
MPoly<K> from_upoly(const UPoly<K>& u, VarsPtr vars, OrderPtr ord, int v) {
  std::vector<std::pair<Monomial, K>> raw;
  for (int i = 0; i <= u.deg(); ++i)
    if (!is_zero(u[i]))
      raw.emplace_back(Monomial::var(vars->size(), v, static_cast<unsigned>(i)), u[i]);
  return mpoly_from_terms(std::move(vars), std::move(ord), std::move(raw));
}

// Coefficient-wise scalar conversion; nullopt if any coefficient fails
// (e.g. a denominator divisible by the target prime).
template <class K1, class K2, class Fn>
std::optional<MPoly<K2>> convert_coeffs(const MPoly<K1>& f, OrderPtr ord, Fn&& fn) {
  std::vector<std::pair<Monomial, K2>> raw;
  for (auto& t : f.ts) {
    std::optional<K2> c = fn(t.second);
    if (!c) return std::nullopt;
    if (!is_zero(*c)) raw.emplace_back(t.first, std::move(*c));
  }
  return mpoly_from_terms(f.vars, ord ? std::move(ord) : f.ord, std::move(raw));
}

inline std::optional<MPoly<Fp>> mpoly_mod_p(const MPoly<Rat>& f, std::uint32_t p) {
  return convert_coeffs<Rat, Fp>(f, nullptr, [&](const Rat& c) { return fp_of(c, p); });
}

// Division by a polynomial expected to divide f exactly; nullopt when it
// leaves a remainder. (Leading-term division suffices: for an exact quotient
// the leading monomial of the running remainder is always a multiple of
// lm(g).)
template <class K>
std::optional<MPoly<K>> try_exact_div(const MPoly<K>& f, const MPoly<K>& g) {
  f.check_same_ring(g);
  if (g.is_zero_poly()) throw Error("division by zero polynomial");
  MPoly<K> r = f;
  std::vector<std::pair<Monomial, K>> qts;
  while (!r.ts.empty()) {
    if (!g.lm().divides(r.lm())) return std::nullopt;
    Monomial m = g.lm().quotient_of(r.lm());
    K c = r.lc() / g.lc();
    qts.emplace_back(m, c);
    r.axpy(K() - c, m, g);
  }
  return mpoly_from_terms(f.vars, f.ord, std::move(qts));
}

template <class K>
MPoly<K> exact_div(const MPoly<K>& f, const MPoly<K>& g) {
  auto q = try_exact_div(f, g);
  if (!q) throw Error("exact_div: not divisible");
  return *q;
}

// Integer content and primitive part tools for rational-coefficient input.
inline std::pair<MPoly<Rat>, Rat> mpoly_primitive(const MPoly<Rat>& f) {
  if (f.ts.empty()) return {f, Rat(0)};
  Int num_g = 0, den_l = 1;
  for (auto& t : f.ts) {
    num_g = gcd(num_g, Int(t.second.get_num()));
    den_l = lcm(den_l, Int(t.second.get_den()));
  }
  Rat scale(num_g, den_l);
  scale.canonicalize();
  if (sgn(f.ts.front().second) < 0) scale = -scale;
  MPoly<Rat> r = f;
  for (auto& t : r.ts) t.second /= scale;
  return {r, scale};
}

// largest e with (div)^e | f, plus the cofactor f / div^e
template <class K>
std::pair<int, MPoly<K>> remove_factor(MPoly<K> f, const MPoly<K>& div, int max_e = 1 << 20) {
  int e = 0;
  while (!f.is_zero_poly() && e < max_e) {
    auto q = try_exact_div(f, div);
    if (!q) break;
    f = std::move(*q);
    ++e;
  }
  return {e, f};
}

// Newton interpolation in one variable with polynomial values; nodes live in
// K, values must not use variable w.
template <class K>
MPoly<K> interp_in_var(int w, const std::vector<K>& xs, std::vector<MPoly<K>> ys) {
  if (xs.empty() || xs.size() != ys.size()) throw Error("interp_in_var: bad node set");
  std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      K dx = xs[i] - xs[i - j];
      if (is_zero(dx)) throw Error("repeated interpolation nodes");
      K inv = unit(dx) / dx;
      ys[i] = inv * (ys[i] - ys[i - 1]);
    }
  }
  VarsPtr vars = ys[0].vars;
  OrderPtr ord = ys[0].ord;
  MPoly<K> acc = ys[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    MPoly<K> lin = MPoly<K>::var(vars, ord, w, 1, unit(xs[i])) -
                   MPoly<K>::constant(vars, ord, xs[i]);
    acc = acc * lin + ys[i];
  }
  return acc;
}

// Resultant with respect to variable u, by recursive evaluation and
// interpolation in the remaining variables. Assumes K is a field with enough
// elements; throws when a prime field runs out of good evaluation points.
template <class K>
MPoly<K> mpoly_resultant(const MPoly<K>& f, const MPoly<K>& g, int u) {
  f.check_same_ring(g);
  if (f.is_zero_poly() || g.is_zero_poly()) return MPoly<K>::zero(f.vars, f.ord);
  int w = -1;
  for (std::size_t v = 0; v < f.vars->size(); ++v) {
    if (static_cast<int>(v) == u) continue;
    if (f.uses(static_cast<int>(v)) || g.uses(static_cast<int>(v))) {
      w = static_cast<int>(v);
      break;
    }
  }
  if (w < 0) {
    K r = upoly_resultant(to_upoly(f, u), to_upoly(g, u));
    return MPoly<K>::constant(f.vars, f.ord, r);
  }
  int df = std::max(f.deg_in(u), 0), dg = std::max(g.deg_in(u), 0);
  std::size_t need = static_cast<std::size_t>(df) * g.deg_in(w) +
                     static_cast<std::size_t>(dg) * f.deg_in(w) + 1;
  MPoly<K> lcf = coeffs_in(f, u)[df], lcg = coeffs_in(g, u)[dg];
  K sample = f.ts.front().second;
  std::vector<K> xs;
  std::vector<MPoly<K>> ys;
  long limit = 1L << 40;
  if constexpr (std::is_same_v<K, Fp>) limit = static_cast<long>(sample.p);
  for (long j = 0; j < limit && xs.size() < need; ++j) {
    K c = of_int(j, sample);
    std::vector<std::optional<K>> bind(f.vars->size());
    bind[w] = c;
    if (subst_consts(lcf, bind).is_zero_poly()) continue;
    if (subst_consts(lcg, bind).is_zero_poly()) continue;
    xs.push_back(c);
    ys.push_back(mpoly_resultant(subst_consts(f, bind), subst_consts(g, bind), u));
  }
  if (xs.size() < need) throw Error("mpoly_resultant: not enough evaluation points");
  return interp_in_var(w, xs, std::move(ys));
}

// --- canonical text form -------------------------------------------------

inline std::string coeff_text(const Rat& c) { return to_string(c); }
inline std::string coeff_text(const Fp& c) { return std::to_string(c.v); }

template <class K>
std::string to_canonical_string(const MPoly<K>& f) {
  if (f.ts.empty()) return "0";
  std::ostringstream o;
  bool first = true;
  for (auto& t : f.ts) {
    std::string c = coeff_text(t.second);
    bool neg = !c.empty() && c[0] == '-';
    if (first) {
      if (neg) o << "-", c = c.substr(1);
    } else {
      o << (neg ? " - " : " + ");
      if (neg) c = c.substr(1);
    }
    first = false;
    std::vector<std::string> factors;
    if (c != "1" || t.first.is_one()) factors.push_back(c);
    for (std::size_t v = 0; v < t.first.e.size(); ++v) {
      if (!t.first.e[v]) continue;
      std::string piece = f.vars->names[v];
      if (t.first.e[v] > 1) piece += "^" + std::to_string(t.first.e[v]);
      factors.push_back(piece);
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) o << "*";
      o << factors[i];
    }
  }
  return o.str();
}

}  // namespace catalix

#endif
