#ifndef CATALIX_RATFUN_HPP
#define CATALIX_RATFUN_HPP

#include <utility>

#include "catalix/mpoly.hpp"
#include "catalix/upoly.hpp"

namespace catalix {

// Field of fractions of K[x]: reduced, denominator monic, zero is 0/1.
// A default-constructed value is the zero of an unspecified base field (same
// convention as Fp) and only becomes attached through arithmetic.
template <class K>
struct RatFn {
  UPoly<K> num, den;  // den monic unless both empty (unattached zero)

  RatFn() = default;
  explicit RatFn(UPoly<K> n) : num(std::move(n)) {
    if (!num.zero()) den = UPoly<K>::constant(unit(num.lc()));
  }
  RatFn(UPoly<K> n, UPoly<K> d) : num(std::move(n)), den(std::move(d)) { reduce(); }

  bool attached() const { return !den.zero(); }

  void reduce() {
    if (den.zero()) throw Error("zero denominator in rational function");
    if (num.zero()) {
      den = UPoly<K>::constant(unit(den.lc()));
      return;
    }
    UPoly<K> g = gcd(num, den);
    if (g.deg() > 0) {
      num = num / g;
      den = den / g;
    }
    K l = den.lc();
    if (!(l == unit(l))) {
      K inv = unit(l) / l;
      num = inv * num;
      den = inv * den;
    }
  }

  static RatFn merged_zero(const RatFn& a, const RatFn& b) {
    RatFn z;
    if (a.attached())
      z.den = UPoly<K>::constant(unit(a.den.lc()));
    else if (b.attached())
      z.den = UPoly<K>::constant(unit(b.den.lc()));
    return z;
  }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    if (!a.attached()) return b;
    if (!b.attached()) return a;
    return RatFn(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RatFn operator-(const RatFn& a) {
    RatFn r = a;
    r.num = -r.num;
    return r;
  }
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    if (!a.attached() || !b.attached()) return merged_zero(a, b);
    return RatFn(a.num * b.num, a.den * b.den);
  }
  friend RatFn operator/(const RatFn& a, const RatFn& b) {
    if (!b.attached() || b.num.zero()) throw Error("division by zero rational function");
    if (!a.attached()) {
      RatFn z;
      z.den = UPoly<K>::constant(unit(b.den.lc()));
      return z;
    }
    return RatFn(a.num * b.den, a.den * b.num);
  }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn& operator/=(const RatFn& o) { return *this = *this / o; }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num == b.num && (a.num.zero() || a.den == b.den);
  }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }
};

template <class K>
bool is_zero(const RatFn<K>& a) {
  return a.num.zero();
}
template <class K>
RatFn<K> unit(const RatFn<K>& sample) {
  if (!sample.attached()) throw Error("unit() needs an attached rational function");
  K one = unit(sample.den.lc());
  return RatFn<K>(UPoly<K>::constant(one));
}
template <class K>
RatFn<K> of_int(long n, const RatFn<K>& sample) {
  if (!sample.attached()) throw Error("of_int() needs an attached rational function");
  K one = unit(sample.den.lc());
  return RatFn<K>(UPoly<K>::constant(of_int(n, one)));
}

// --- bivariate bridge ------------------------------------------------------
// View f in K[param][main] as a univariate polynomial in `main` over the
// fraction field K(param). All denominators are 1 on the way in.

template <class K>
UPoly<RatFn<K>> over_ratfn(const MPoly<K>& f, int main, int param) {
  UPoly<RatFn<K>> r;
  for (auto& t : f.ts) {
    if (t.first.deg != t.first.e[main] + t.first.e[param])
      throw Error("over_ratfn: polynomial uses extra variables");
    UPoly<K> mono = UPoly<K>::monomial(t.first.e[param], t.second);
    RatFn<K> cur = r[t.first.e[main]];
    r.set(t.first.e[main], cur + RatFn<K>(mono));
  }
  return r;
}

// Inverse direction: clear denominators (multiply by their lcm) and return
// the resulting polynomial together with the common denominator used.
template <class K>
std::pair<MPoly<K>, UPoly<K>> from_ratfn(const UPoly<RatFn<K>>& f, VarsPtr vars,
                                         OrderPtr ord, int main, int param) {
  UPoly<K> den;
  bool have = false;
  for (int i = 0; i <= f.deg(); ++i) {
    if (is_zero(f[i])) continue;
    if (!have) {
      den = f[i].den;
      have = true;
    } else {
      UPoly<K> g = gcd(den, f[i].den);
      den = den * (f[i].den / g);
    }
  }
  if (!have) return {MPoly<K>::zero(vars, ord), UPoly<K>::constant(K())};
  std::vector<std::pair<Monomial, K>> raw;
  for (int i = 0; i <= f.deg(); ++i) {
    if (is_zero(f[i])) continue;
    UPoly<K> coef = f[i].num * (den / f[i].den);
    for (int j = 0; j <= coef.deg(); ++j) {
      if (is_zero(coef[j])) continue;
      Monomial m(vars->size());
      m.e[main] = static_cast<std::uint16_t>(i);
      m.e[param] = static_cast<std::uint16_t>(j);
      m.deg = static_cast<std::uint32_t>(i + j);
      raw.emplace_back(std::move(m), coef[j]);
    }
  }
  return {mpoly_from_terms(std::move(vars), std::move(ord), std::move(raw)), den};
}

// Squarefree part in `main` of a bivariate polynomial, computed over the
// fraction field in `param`, then denominator-cleared.
template <class K>
MPoly<K> bivariate_squarefree_in(const MPoly<K>& f, int main, int param) {
  if (f.is_zero_poly() || f.deg_in(main) == 0) return f;
  UPoly<RatFn<K>> u = over_ratfn(f, main, param);
  UPoly<RatFn<K>> sf = upoly_squarefree_part(u);
  return from_ratfn(sf, f.vars, f.ord, main, param).first;
}

}  // namespace catalix

#endif
