#ifndef CATALIX_SERIES_HPP
#define CATALIX_SERIES_HPP

#include <vector>

#include "catalix/mpoly.hpp"
#include "catalix/upoly.hpp"

namespace catalix {

// Truncated power series in t with polynomial coefficients in u: index n
// holds the t^n coefficient. All operations truncate at the common sigma.
template <class K>
struct TSeries {
  std::vector<UPoly<K>> c;

  TSeries() = default;
  explicit TSeries(std::size_t sigma) : c(sigma) {}

  std::size_t sigma() const { return c.size(); }

  static TSeries constant_poly(std::size_t sigma, UPoly<K> p) {
    TSeries s(sigma);
    if (sigma) s.c[0] = std::move(p);
    return s;
  }
  // the series "t"
  static TSeries t_gen(std::size_t sigma, const K& one) {
    TSeries s(sigma);
    if (sigma > 1) s.c[1] = UPoly<K>::constant(one);
    return s;
  }

  void check_same(const TSeries& o) const {
    if (c.size() != o.c.size()) throw Error("series truncation mismatch");
  }

  friend TSeries operator+(const TSeries& a, const TSeries& b) {
    a.check_same(b);
    TSeries r(a.sigma());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend TSeries operator-(const TSeries& a, const TSeries& b) {
    a.check_same(b);
    TSeries r(a.sigma());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend TSeries operator*(const TSeries& a, const TSeries& b) {
    a.check_same(b);
    TSeries r(a.sigma());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i].zero()) continue;
      for (std::size_t j = 0; i + j < b.c.size(); ++j) {
        if (b.c[j].zero()) continue;
        r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
      }
    }
    return r;
  }
  friend TSeries operator*(const UPoly<K>& p, const TSeries& a) {
    TSeries r(a.sigma());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = p * a.c[i];
    return r;
  }

  // multiplication by t (drops the top coefficient)
  TSeries shifted() const {
    TSeries r(sigma());
    for (std::size_t i = 1; i < c.size(); ++i) r.c[i] = c[i - 1];
    return r;
  }

  bool is_zero_series() const {
    for (auto& p : c)
      if (!p.zero()) return false;
    return true;
  }

  friend bool operator==(const TSeries& a, const TSeries& b) { return a.c == b.c; }
  friend bool operator!=(const TSeries& a, const TSeries& b) { return !(a == b); }
};

// Quotient of f by (u - a); the caller provides the value f(a) to subtract,
// making the division exact.
template <class K>
UPoly<K> divide_linear_exact(const UPoly<K>& f, const K& a) {
  if (f.zero()) return f;
  std::vector<K> q(static_cast<std::size_t>(f.deg()), K());
  K carry{};  // running value b_i with f = (u-a) q + f(a)
  for (int i = f.deg(); i >= 1; --i) {
    carry = f[static_cast<std::size_t>(i)] + a * carry;
    q[static_cast<std::size_t>(i - 1)] = carry;
  }
  return UPoly<K>(std::move(q));
}

// One divided difference: (F - F(t,a)) / (u - a), coefficient by coefficient.
template <class K>
TSeries<K> divided_difference(const TSeries<K>& f, const K& a) {
  TSeries<K> r(f.sigma());
  for (std::size_t n = 0; n < f.c.size(); ++n) r.c[n] = divide_linear_exact(f.c[n], a);
  return r;
}

template <class K>
TSeries<K> divided_difference(const TSeries<K>& f, const K& a, int i) {
  if (i < 1) throw Error("divided_difference: order must be >= 1");
  TSeries<K> r = divided_difference(f, a);
  for (int j = 1; j < i; ++j) r = divided_difference(r, a);
  return r;
}

// Coefficient-wise evaluation at u = point.
template <class K>
std::vector<K> specialize_series(const TSeries<K>& f, const K& point) {
  std::vector<K> out;
  out.reserve(f.c.size());
  for (auto& p : f.c) out.push_back(p.eval(point));
  return out;
}

// Derivative in u, coefficient by coefficient.
template <class K>
TSeries<K> derive_u(const TSeries<K>& f) {
  TSeries<K> r(f.sigma());
  for (std::size_t n = 0; n < f.c.size(); ++n) r.c[n] = f.c[n].derivative();
  return r;
}

// Evaluate a multivariate polynomial with one series argument per variable.
template <class K>
TSeries<K> eval_mpoly_series(const MPoly<K>& q, const std::vector<TSeries<K>>& args,
                             std::size_t sigma) {
  if (args.size() != q.vars->size()) throw Error("eval_mpoly_series: argument count");
  TSeries<K> acc(sigma);
  // powers[v][e-1] caches args[v]^e
  std::vector<std::vector<TSeries<K>>> powers(args.size());
  auto power = [&](std::size_t v, unsigned e) -> const TSeries<K>& {
    auto& tab = powers[v];
    if (tab.empty()) tab.push_back(args[v]);
    while (tab.size() < e) tab.push_back(tab.back() * args[v]);
    return tab[e - 1];
  };
  for (auto& t : q.ts) {
    TSeries<K> term =
        TSeries<K>::constant_poly(sigma, UPoly<K>::constant(t.second));
    for (std::size_t v = 0; v < args.size(); ++v)
      if (t.first.e[v]) term = term * power(v, t.first.e[v]);
    acc = acc + term;
  }
  return acc;
}

}  // namespace catalix

#endif
