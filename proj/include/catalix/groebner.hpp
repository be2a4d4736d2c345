#ifndef CATALIX_GROEBNER_HPP
#define CATALIX_GROEBNER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "catalix/linalg.hpp"
#include "catalix/mpoly.hpp"
#include "catalix/upoly.hpp"

namespace catalix {

struct GroebnerStats {
  int d_cp = 0;                  // max total degree of a processed critical pair's lcm
  std::size_t max_reducers = 0;  // largest basis size used while reducing one element
  std::size_t pairs_processed = 0;
};

template <class K>
struct GroebnerBasis {
  VarsPtr vars;
  OrderPtr ord;
  std::vector<MPoly<K>> gens;  // reduced, monic, leading monomials descending
  GroebnerStats stats;
};

// Full normal form: every term of the result is irreducible modulo gb.
template <class K>
MPoly<K> normal_form(const MPoly<K>& f, const std::vector<MPoly<K>>& gb) {
  if (gb.empty() || f.is_zero_poly()) return f;
  MPoly<K> work = f;
  MPoly<K> out(f.vars, f.ord);
  while (!work.is_zero_poly()) {
    const Monomial& m = work.lm();
    const MPoly<K>* red = nullptr;
    for (auto& g : gb) {
      if (!g.is_zero_poly() && g.lm().divides(m)) {
        red = &g;
        break;
      }
    }
    if (red) {
      K c = work.lc() / red->lc();
      work.axpy(K() - c, red->lm().quotient_of(m), *red);
    } else {
      // irreducible leading term: terms are peeled in strictly descending
      // order, so appending keeps `out` sorted
      out.ts.push_back(work.ts.front());
      work.ts.erase(work.ts.begin());
    }
  }
  return out;
}

namespace detail {

template <class K>
struct Pair {
  std::size_t i, j;
  Monomial lcm_m;
  unsigned sugar;
};

template <class K>
unsigned sugar_of(const MPoly<K>& f) {
  return static_cast<unsigned>(std::max(f.total_deg(), 0));
}

}  // namespace detail

// Buchberger with the Gebauer-Moller pair updates and sugar selection.
template <class K>
GroebnerBasis<K> buchberger(const std::vector<MPoly<K>>& input, VarsPtr vars, OrderPtr ord) {
  using detail::Pair;
  GroebnerBasis<K> out;
  out.vars = vars;
  out.ord = ord;

  std::vector<MPoly<K>> g;       // current basis, monic
  std::vector<unsigned> sug;     // sugar degrees
  std::vector<Pair<K>> pairs;
  GroebnerStats stats;

  auto make_monic = [](MPoly<K> f) {
    K inv = unit(f.lc()) / f.lc();
    return inv * f;
  };

  // Gebauer-Moller update when appending f as index t
  auto update = [&](const MPoly<K>& f, unsigned fsugar) {
    std::size_t t = g.size();
    const Monomial& lf = f.lm();
    std::vector<Pair<K>> fresh;
    for (std::size_t i = 0; i < t; ++i) {
      if (g[i].is_zero_poly()) continue;
      Pair<K> p;
      p.i = i;
      p.j = t;
      p.lcm_m = lcm(g[i].lm(), lf);
      unsigned di = p.lcm_m.deg - g[i].lm().deg + sug[i];
      unsigned dj = p.lcm_m.deg - lf.deg + fsugar;
      p.sugar = std::max(di, dj);
      fresh.push_back(std::move(p));
    }
    // M criterion: drop (i,t) whose lcm is a proper multiple of another's
    std::vector<char> keep(fresh.size(), 1);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = 0; b < fresh.size(); ++b) {
        if (a == b || !keep[a] || !keep[b]) continue;
        if (fresh[b].lcm_m.divides(fresh[a].lcm_m) && !(fresh[b].lcm_m == fresh[a].lcm_m))
          keep[a] = 0;
      }
    // F criterion: among equal lcms keep only the first
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = a + 1; b < fresh.size(); ++b) {
        if (!keep[a] || !keep[b]) continue;
        if (fresh[a].lcm_m == fresh[b].lcm_m) keep[b] = 0;
      }
    // B criterion first: prune old pairs strictly dominated by lf
    std::vector<Pair<K>> kept_old;
    for (auto& p : pairs) {
      bool drop = lf.divides(p.lcm_m) &&
                  !(lcm(g[p.i].lm(), lf) == p.lcm_m) &&
                  !(lcm(g[p.j].lm(), lf) == p.lcm_m);
      if (!drop) kept_old.push_back(std::move(p));
    }
    pairs = std::move(kept_old);
    // Buchberger's coprimality criterion
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      if (!keep[a]) continue;
      if (g[fresh[a].i].lm().coprime(lf)) continue;
      pairs.push_back(std::move(fresh[a]));
    }
    g.push_back(f);
    sug.push_back(fsugar);
  };

  for (auto& f : input) {
    if (f.is_zero_poly()) continue;
    MPoly<K> nf = normal_form(f, g);
    if (nf.is_zero_poly()) continue;
    update(make_monic(std::move(nf)), detail::sugar_of(f));
  }

  while (!pairs.empty()) {
    // sugar selection with lcm-order tiebreak (deterministic)
    std::size_t best = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      if (pairs[i].sugar < pairs[best].sugar ||
          (pairs[i].sugar == pairs[best].sugar &&
           ord->cmp(pairs[i].lcm_m, pairs[best].lcm_m) < 0))
        best = i;
    }
    Pair<K> p = pairs[best];
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
    ++stats.pairs_processed;
    stats.d_cp = std::max(stats.d_cp, static_cast<int>(p.lcm_m.deg));

    const MPoly<K>&A = g[p.i], &B = g[p.j];
    MPoly<K> s = MPoly<K>::zero(vars, ord);
    s.axpy(unit(A.lc()), A.lm().quotient_of(p.lcm_m), A);
    s.axpy(K() - unit(B.lc()), B.lm().quotient_of(p.lcm_m), B);
    stats.max_reducers = std::max(stats.max_reducers, g.size());
    MPoly<K> nf = normal_form(s, g);
    if (nf.is_zero_poly()) continue;
    unsigned nsugar = std::max(p.sugar, detail::sugar_of(nf));
    update(make_monic(std::move(nf)), nsugar);
    // early exit on the unit ideal
    if (g.back().total_deg() == 0) {
      pairs.clear();
      break;
    }
  }

  // minimalize: drop generators whose lm is divisible by another's
  std::vector<char> alive(g.size(), 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!alive[i] || g[i].is_zero_poly()) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j || !alive[j] || g[j].is_zero_poly()) continue;
      if (g[j].lm().divides(g[i].lm()) &&
          (!(g[i].lm() == g[j].lm()) || j < i)) {
        alive[i] = 0;
        break;
      }
    }
  }
  std::vector<MPoly<K>> minimal;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (alive[i] && !g[i].is_zero_poly()) minimal.push_back(g[i]);

  // tail-reduce each generator against the rest
  std::vector<MPoly<K>> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<MPoly<K>> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    MPoly<K> nf = normal_form(minimal[i], others);
    if (!nf.is_zero_poly()) reduced.push_back(make_monic(std::move(nf)));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const MPoly<K>& a, const MPoly<K>& b) {
    return ord->cmp(a.lm(), b.lm()) > 0;
  });
  out.gens = std::move(reduced);
  out.stats = stats;
  return out;
}

// Ideal membership-by-reduction against a reduced basis.
template <class K>
bool reduces_to_zero(const MPoly<K>& f, const GroebnerBasis<K>& gb) {
  return normal_form(f, gb.gens).is_zero_poly();
}

// Saturation (gens) : h^infty via a Rabinowitsch variable in front.
template <class K>
std::vector<MPoly<K>> saturate(const std::vector<MPoly<K>>& gens, const MPoly<K>& h,
                               VarsPtr vars, OrderPtr ord, GroebnerStats* stats = nullptr) {
  if (h.is_zero_poly()) throw Error("saturate by zero");
  VarsPtr xvars = extend_vars(vars, {"_w"});
  int wi = static_cast<int>(vars->size());
  OrderPtr xord = make_order(ord->with_front({wi}));
  std::vector<MPoly<K>> xgens;
  for (auto& f : gens)
    if (!f.is_zero_poly()) xgens.push_back(transport(f, xvars, xord));
  MPoly<K> hx = transport(h, xvars, xord);
  K one = unit(h.lc());
  MPoly<K> wpoly = MPoly<K>::var(xvars, xord, wi, 1, one);
  xgens.push_back(wpoly * hx - MPoly<K>::constant(xvars, xord, one));
  GroebnerBasis<K> gb = buchberger(xgens, xvars, xord);
  if (stats) {
    stats->d_cp = std::max(stats->d_cp, gb.stats.d_cp);
    stats->max_reducers = std::max(stats->max_reducers, gb.stats.max_reducers);
    stats->pairs_processed += gb.stats.pairs_processed;
  }
  std::vector<MPoly<K>> out;
  for (auto& f : gb.gens)
    if (!f.uses(wi)) out.push_back(transport(f, vars, ord));
  return out;
}

// Saturation by a product, factor by factor (keeps intermediate degrees low).
template <class K>
std::vector<MPoly<K>> saturate_many(std::vector<MPoly<K>> gens,
                                    const std::vector<MPoly<K>>& factors, VarsPtr vars,
                                    OrderPtr ord, GroebnerStats* stats = nullptr) {
  for (auto& h : factors) gens = saturate(gens, h, vars, ord, stats);
  return gens;
}

// G cap K[keep]; requires the basis order to eliminate the complement.
template <class K>
std::vector<MPoly<K>> elimination_ideal(const GroebnerBasis<K>& gb,
                                        const std::vector<char>& keep) {
  if (!gb.ord->eliminates(keep)) throw Error("order does not eliminate the complement");
  std::vector<MPoly<K>> out;
  for (auto& f : gb.gens) {
    bool ok = true;
    for (std::size_t v = 0; v < keep.size() && ok; ++v)
      if (!keep[v] && f.uses(static_cast<int>(v))) ok = false;
    if (ok) out.push_back(f);
  }
  return out;
}

struct QuotientBasis {
  std::vector<Monomial> monomials;  // ascending under the basis order
  std::size_t dim() const { return monomials.size(); }
};

// Zero-dimensionality: every variable shows up as a pure power among the
// leading terms. Returns the standard monomial basis when true.
template <class K>
std::optional<QuotientBasis> is_zero_dim(const GroebnerBasis<K>& gb) {
  std::size_t n = gb.vars->size();
  // unit ideal: empty variety, empty basis
  for (auto& f : gb.gens)
    if (f.lm().is_one()) return QuotientBasis{};
  if (gb.gens.empty()) {
    if (n == 0) return QuotientBasis{{Monomial(0)}};
    return std::nullopt;
  }
  std::vector<unsigned> cap(n, 0);
  for (auto& f : gb.gens) {
    const Monomial& m = f.lm();
    for (std::size_t v = 0; v < n; ++v) {
      if (m.e[v] && m.e[v] == m.deg) {
        if (!cap[v] || m.e[v] < cap[v]) cap[v] = m.e[v];
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!cap[v]) return std::nullopt;

  // enumerate the staircase below the caps
  std::vector<Monomial> lts;
  for (auto& f : gb.gens) lts.push_back(f.lm());
  QuotientBasis qb;
  Monomial cur(n);
  // odometer over the box prod [0, cap_v)
  for (;;) {
    bool standard = true;
    for (auto& l : lts)
      if (l.divides(cur)) {
        standard = false;
        break;
      }
    if (standard) qb.monomials.push_back(cur);
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (cur.e[v] + 1u < cap[v]) {
        cur.e[v] += 1;
        cur.deg += 1;
        break;
      }
      cur.deg -= cur.e[v];
      cur.e[v] = 0;
    }
    if (v == n) break;
  }
  std::sort(qb.monomials.begin(), qb.monomials.end(),
            [&](const Monomial& a, const Monomial& b) { return gb.ord->cmp(a, b) < 0; });
  return qb;
}

// Matrix of multiplication by f on the quotient algebra, in the standard
// monomial basis.
template <class K>
Matrix<K> mult_matrix(const GroebnerBasis<K>& gb, const QuotientBasis& qb,
                      const MPoly<K>& f) {
  std::size_t d = qb.dim();
  Matrix<K> m(d, d);
  std::map<std::vector<std::uint16_t>, std::size_t> index;
  for (std::size_t i = 0; i < d; ++i) index[qb.monomials[i].e] = i;
  for (std::size_t j = 0; j < d; ++j) {
    MPoly<K> fb(f.vars, f.ord);
    if (!f.is_zero_poly()) fb.axpy(unit(f.lc()), qb.monomials[j], f);
    MPoly<K> nf = normal_form(fb, gb.gens);
    for (auto& t : nf.ts) {
      auto it = index.find(t.first.e);
      if (it == index.end()) throw Error("normal form left the quotient basis");
      m.at(it->second, j) = t.second;
    }
  }
  return m;
}

}  // namespace catalix

#endif
