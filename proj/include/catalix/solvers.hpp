#ifndef CATALIX_SOLVERS_HPP
#define CATALIX_SOLVERS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catalix/common.hpp"
#include "catalix/dde.hpp"
#include "catalix/groebner.hpp"
#include "catalix/guess.hpp"
#include "catalix/hermite.hpp"

namespace catalix {

// A structural hypothesis of the input equation fails (or looks violated at
// many sample points). CLI exit code 4.
struct SolveDiagnostic : Error {
  explicit SolveDiagnostic(const std::string& m) : Error(m) {}
};

// A configured time or evaluation budget ran out. CLI exit code 5.
struct ResourceLimit : Error {
  explicit ResourceLimit(const std::string& m) : Error(m) {}
};

struct SolveOptions {
  std::string method = "direct";  // direct | hgp | elim | geom
  std::string ev_var = "t";       // sampled variable: t | z0
  int max_primes = 8;
  int max_points = 2048;  // evaluation points per prime
  std::uint32_t prime_lo = (1u << 27) + 1;
  std::uint32_t prime_hi = (1u << 29);
  bool certify = false;
  bool force = false;  // keep going when the degree gate fails
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  double budget_seconds = 0.0;  // 0 disables the ceiling
};

struct ModularProbe {
  std::uint32_t p = 0;
  std::uint64_t theta = 0;
  long d_t = -1;
  long d_z0 = -1;
};

struct AnnihilatorResult {
  MPoly<Rat> r;  // lives in the [t, z0] ring of ann_ring()
  long deg_t = 0;
  long deg_z0 = 0;
  std::optional<Certificate> certificate;
  std::string method;
  std::vector<std::uint32_t> primes;
  std::size_t points = 0;  // evaluation points consumed, all primes together
  GroebnerStats gstats;
  std::string staircase;  // shape of the winning modular runs
  long d_chi = -1;        // geom: degree of the interpolated char. polynomial
  double seconds = 0.0;
  std::vector<std::string> notes;
};

// The 3k duplicated polynomials {P, d_x P, d_u P} at (x_i, u_i), plus the
// factors whose product cuts away the diagonal and the section u = a.
struct DuplicatedSystem {
  VarsPtr vars;  // x1, u1, ..., xk, uk, z0..z_{k-1}, t
  OrderPtr ord;
  std::vector<MPoly<Rat>> polys;         // grouped per copy
  std::vector<MPoly<Rat>> diag_factors;  // u_i - u_j (i < j), then u_i - a
  std::vector<int> xi, ui, zi;
  int ti = -1;
};

inline DuplicatedSystem build_duplicated(const DdeSpec& s) {
  MPoly<Rat> P = get_p(s);
  MPoly<Rat> Px = P.derive(s.ix());
  MPoly<Rat> Pu = P.derive(s.iu());

  DuplicatedSystem d;
  std::vector<std::string> names;
  for (int i = 1; i <= s.k; ++i) {
    names.push_back("x" + std::to_string(i));
    names.push_back("u" + std::to_string(i));
  }
  for (int j = 0; j < s.k; ++j) names.push_back(z_name(j));
  names.push_back("t");
  int n = static_cast<int>(names.size());
  d.vars = make_vars(names);
  d.ord = make_order(MonomialOrder::grevlex(n));
  for (int i = 0; i < s.k; ++i) {
    d.xi.push_back(2 * i);
    d.ui.push_back(2 * i + 1);
  }
  for (int j = 0; j < s.k; ++j) d.zi.push_back(2 * s.k + j);
  d.ti = n - 1;

  auto slot = [&](int idx) {
    return MPoly<Rat>::var(d.vars, d.ord, idx, 1, Rat(1));
  };
  for (int i = 0; i < s.k; ++i) {
    std::vector<std::optional<MPoly<Rat>>> img(s.pvars->size());
    img[s.ix()] = slot(d.xi[i]);
    img[s.iu()] = slot(d.ui[i]);
    img[s.it()] = slot(d.ti);
    for (int j = 0; j < s.k; ++j) img[s.iz(j)] = slot(d.zi[j]);
    d.polys.push_back(map_vars(P, d.vars, d.ord, img));
    d.polys.push_back(map_vars(Px, d.vars, d.ord, img));
    d.polys.push_back(map_vars(Pu, d.vars, d.ord, img));
  }
  for (int i = 0; i < s.k; ++i)
    for (int j = i + 1; j < s.k; ++j)
      d.diag_factors.push_back(slot(d.ui[i]) - slot(d.ui[j]));
  for (int i = 0; i < s.k; ++i)
    d.diag_factors.push_back(slot(d.ui[i]) -
                             MPoly<Rat>::constant(d.vars, d.ord, s.a));
  return d;
}

namespace detail {

inline void merge_stats(GroebnerStats& into, const GroebnerStats& s) {
  into.d_cp = std::max(into.d_cp, s.d_cp);
  into.max_reducers = std::max(into.max_reducers, s.max_reducers);
  into.pairs_processed += s.pairs_processed;
}

inline void enforce_budget(const Stopwatch& sw, const SolveOptions& o) {
  if (o.budget_seconds > 0 && sw.seconds() > o.budget_seconds)
    throw ResourceLimit(cat("time budget of ", o.budget_seconds, "s exceeded"));
}

inline std::string staircase_string(const QuotientBasis& qb) {
  std::string s;
  for (auto& m : qb.monomials) {
    s += '[';
    for (std::size_t v = 0; v < m.e.size(); ++v) {
      if (v) s += ' ';
      s += std::to_string(m.e[v]);
    }
    s += ']';
  }
  return s;
}

// One successful modular evaluation: the (monic, squarefree) annihilator of
// the specialized curve, plus bookkeeping for quorum voting.
struct TaskOut {
  UPoly<Fp> poly;
  std::string shape;
  GroebnerStats stats;
  long d_chi = -1;
};

// Coefficient table of a monic family after clearing denominators:
// carrier[d] is the monic common denominator D, carrier[j] = n_j * (D / d_j).
struct FamilyFit {
  std::vector<UPoly<Fp>> carrier;
  int d = 0;
};

inline UPoly<Fp> upoly_lcm(const UPoly<Fp>& a, const UPoly<Fp>& b) {
  if (a.zero() || b.zero()) return UPoly<Fp>();
  UPoly<Fp> g = gcd(a, b);
  return ((a * b) / g).monic();
}

// Reconstruct the coefficients of a monic degree-d family as rational
// functions of the sample variable. The last two samples are held out to
// validate; nullopt asks the caller for more points.
inline std::optional<FamilyFit> fit_family(const std::vector<Fp>& xs,
                                           const std::vector<UPoly<Fp>>& ys) {
  std::size_t n = xs.size();
  if (n < 5 || ys.size() != n) return std::nullopt;
  int d = ys[0].deg();
  std::size_t nfit = n - 2;
  std::vector<Fp> fx(xs.begin(), xs.begin() + nfit);
  int dn = (static_cast<int>(nfit) - 1) / 2, dd = dn;

  std::vector<UPoly<Fp>> num(d), den(d);
  for (int j = 0; j < d; ++j) {
    std::vector<Fp> fy;
    for (std::size_t i = 0; i < nfit; ++i) fy.push_back(ys[i][j]);
    auto fr = rat_interp(fx, fy, dn, dd);
    if (!fr) return std::nullopt;
    num[j] = fr->first;
    den[j] = fr->second;
  }
  for (std::size_t v = nfit; v < n; ++v) {
    for (int j = 0; j < d; ++j) {
      Fp dv = den[j].eval(xs[v]);
      if (dv.v == 0) return std::nullopt;
      if (!(num[j].eval(xs[v]) / dv == ys[v][j])) return std::nullopt;
    }
  }
  FamilyFit out;
  out.d = d;
  UPoly<Fp> one = UPoly<Fp>::constant(Fp(1, xs[0].p));
  UPoly<Fp> D = one;
  for (int j = 0; j < d; ++j) D = upoly_lcm(D, den[j]);
  out.carrier.resize(d + 1);
  for (int j = 0; j < d; ++j) out.carrier[j] = num[j] * (D / den[j]);
  out.carrier[d] = D;
  return out;
}

// Sample a monic polynomial family at random points of F_p until its
// coefficients interpolate and validate. `sample` returns the family member
// at one point together with a shape label; members whose label disagrees
// with the early majority are discarded as unlucky.
template <class Fn>
std::optional<FamilyFit> sample_family(std::uint32_t p, Rng& rng, int max_attempts,
                                       Fn&& sample, std::string* shape_out) {
  std::set<std::uint64_t> used;
  std::vector<std::pair<Fp, UPoly<Fp>>> got;
  std::vector<std::string> labels;
  std::map<std::string, int> votes;
  std::string fixed;
  int attempts = 0, consec = 0, target = 8;
  while (attempts < max_attempts) {
    std::uint64_t c = 1 + rng.below(p - 1);
    if (!used.insert(c).second) continue;
    ++attempts;
    auto r = sample(Fp(static_cast<std::int64_t>(c), p));
    if (!r) {
      if (++consec >= 64) return std::nullopt;
      continue;
    }
    consec = 0;
    ++votes[r->first];
    labels.push_back(r->first);
    got.emplace_back(Fp(static_cast<std::int64_t>(c), p), std::move(r->second));
    if (fixed.empty()) {
      int total = 0;
      for (auto& kv : votes) total += kv.second;
      if (total < 5) continue;
      for (auto& kv : votes)
        if (fixed.empty() || kv.second > votes[fixed]) fixed = kv.first;
    }
    std::vector<Fp> xs;
    std::vector<UPoly<Fp>> ys;
    for (std::size_t i = 0; i < got.size(); ++i)
      if (labels[i] == fixed) {
        xs.push_back(got[i].first);
        ys.push_back(got[i].second);
      }
    if (static_cast<int>(xs.size()) < target) continue;
    auto fit = fit_family(xs, ys);
    if (!fit) {
      target *= 2;
      continue;
    }
    if (shape_out) *shape_out = fixed;
    return fit;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-method modular backends. Each owns the rational-side preparation, turns
// one prime into immutable mod-p state, and evaluates one sample point.

struct DirectBackend {
  DuplicatedSystem dup;
  bool ev_is_t;
  int ev_idx;  // in the duplicated ring
  VarsPtr rvars;
  OrderPtr rord;
  int rem_idx;  // multiplication variable in the reduced ring
  std::uint32_t p = 0;
  std::vector<MPoly<Fp>> polys_p;  // duplicated ring mod p
  std::vector<MPoly<Fp>> diag_p;   // reduced ring mod p

  DirectBackend(const DdeSpec& s, bool ev_t) : dup(build_duplicated(s)), ev_is_t(ev_t) {
    ev_idx = ev_is_t ? dup.ti : dup.zi[0];
    std::vector<std::string> rn;
    for (std::size_t v = 0; v < dup.vars->size(); ++v)
      if (static_cast<int>(v) != ev_idx) rn.push_back(dup.vars->names[v]);
    rvars = make_vars(rn);
    rord = make_order(MonomialOrder::grevlex(static_cast<int>(rn.size())));
    rem_idx = rvars->require(ev_is_t ? z_name(0) : "t");
  }

  const char* fail_message() const {
    return "direct: the saturated evaluated system is rarely zero-dimensional";
  }

  bool start_prime(std::uint32_t pp) {
    p = pp;
    polys_p.clear();
    diag_p.clear();
    for (auto& f : dup.polys) {
      auto m = mpoly_mod_p(f, p);
      if (!m) return false;
      polys_p.push_back(std::move(*m));
    }
    for (auto& f : dup.diag_factors) {
      auto m = mpoly_mod_p(f, p);
      if (!m) return false;
      diag_p.push_back(transport(*m, rvars, rord));
    }
    return true;
  }

  std::optional<TaskOut> point(std::uint64_t tau) const {
    std::vector<std::optional<Fp>> vals(dup.vars->size());
    vals[ev_idx] = Fp(static_cast<std::int64_t>(tau), p);
    std::vector<MPoly<Fp>> gens;
    for (auto& f : polys_p)
      gens.push_back(transport(subst_consts(f, vals), rvars, rord));
    TaskOut out;
    gens = saturate_many(std::move(gens), diag_p, rvars, rord, &out.stats);
    GroebnerBasis<Fp> gb = buchberger(gens, rvars, rord);
    merge_stats(out.stats, gb.stats);
    auto qb = is_zero_dim(gb);
    if (!qb || qb->dim() == 0) return std::nullopt;
    Fp one(1, p);
    Matrix<Fp> m = mult_matrix(gb, *qb, MPoly<Fp>::var(rvars, rord, rem_idx, 1, one));
    UPoly<Fp> chi = upoly_squarefree_part(char_poly(m, one));
    if (chi.deg() < 1) return std::nullopt;
    out.poly = chi;
    out.shape = cat(staircase_string(*qb), ":", chi.deg());
    return out;
  }
};

struct ElimBackend {
  int k;
  MPoly<Rat> P, Px, Pu;  // in the source P-ring
  int ev_src;            // sampled variable, source-ring index
  VarsPtr evars;
  OrderPtr eord;
  int ix = 0, iu = 1, rem;
  MPoly<Rat> ua_q;  // u - a in the elimination ring
  std::uint32_t p = 0;
  std::vector<MPoly<Fp>> gens_p;  // P, Px, Pu mod p, source ring
  MPoly<Fp> ua_p;

  ElimBackend(const DdeSpec& s, bool ev_t)
      : P(get_p(s)),
        Px(P.derive(s.ix())),
        Pu(P.derive(s.iu())),
        ua_p(nullptr, nullptr) {
    k = s.k;
    ev_src = ev_t ? s.it() : s.iz(0);
    std::vector<std::string> en{"x", "u"};
    for (int j = s.k - 1; j >= 1; --j) en.push_back(z_name(j));
    en.push_back(ev_t ? z_name(0) : "t");
    evars = make_vars(en);
    eord = make_order(MonomialOrder::lex(static_cast<int>(en.size())));
    rem = static_cast<int>(en.size()) - 1;
    ua_q = MPoly<Rat>::var(evars, eord, iu, 1, Rat(1)) -
           MPoly<Rat>::constant(evars, eord, s.a);
  }

  const char* fail_message() const {
    return "elim: no conjunction yields a nonzero eliminant at the sampled points";
  }

  bool start_prime(std::uint32_t pp) {
    p = pp;
    gens_p.clear();
    for (auto* f : {&P, &Px, &Pu}) {
      auto m = mpoly_mod_p(*f, p);
      if (!m) return false;
      gens_p.push_back(std::move(*m));
    }
    auto m = mpoly_mod_p(ua_q, p);
    if (!m) return false;
    ua_p = std::move(*m);
    return true;
  }

  std::optional<TaskOut> point(std::uint64_t tau) const {
    std::vector<std::optional<Fp>> vals(gens_p[0].vars->size());
    vals[ev_src] = Fp(static_cast<std::int64_t>(tau), p);
    std::vector<MPoly<Fp>> gens;
    for (auto& f : gens_p)
      gens.push_back(transport(subst_consts(f, vals), evars, eord));
    TaskOut out;
    gens = saturate(gens, ua_p, evars, eord, &out.stats);
    GroebnerBasis<Fp> gb = buchberger(gens, evars, eord);
    merge_stats(out.stats, gb.stats);
    for (auto& g : gb.gens)
      if (g.total_deg() == 0) return std::nullopt;

    // Split the basis along x, collect the pieces of the branch conditions.
    std::vector<MPoly<Fp>> xfree, lead_x;
    bool lx_const = false;
    std::set<std::string> seen;
    for (auto& g : gb.gens) {
      if (g.deg_in(ix) == 0) {
        xfree.push_back(g);
        continue;
      }
      MPoly<Fp> l = coeffs_in(g, ix).back();
      if (l.total_deg() == 0) {
        lx_const = true;
        continue;
      }
      if (seen.insert(to_canonical_string(l)).second) lead_x.push_back(l);
    }
    if (xfree.empty() || (lead_x.empty() && !lx_const)) return std::nullopt;

    std::vector<MPoly<Fp>> eqs = xfree;
    for (auto& g : xfree)
      if (g.deg_in(iu) <= k - 1 && g.deg_in(iu) > 0)
        for (auto& c : coeffs_in(g, iu)) eqs.push_back(c);

    std::vector<const MPoly<Fp>*> cand;
    for (auto& g : xfree)
      if (g.deg_in(iu) >= k) cand.push_back(&g);
    std::sort(cand.begin(), cand.end(), [&](const MPoly<Fp>* a, const MPoly<Fp>* b) {
      if (a->deg_in(iu) != b->deg_in(iu)) return a->deg_in(iu) < b->deg_in(iu);
      return eord->cmp(a->lm(), b->lm()) < 0;
    });
    if (cand.empty()) return std::nullopt;

    std::vector<char> keep(evars->size(), 0);
    keep[rem] = 1;
    int conj = 0;
    for (auto* g : cand) {
      std::vector<MPoly<Fp>> cs = coeffs_in(*g, iu);
      std::vector<HermiteMinor<Fp>> minors = hermite_minors(cs, k);
      MPoly<Fp> lu = cs.back();
      for (auto& mi : minors) {
        for (std::size_t li = 0; li < (lx_const ? 1 : lead_x.size()); ++li) {
          int my = conj++;
          if (my > 96) return std::nullopt;
          if (mi.numerator.is_zero_poly()) continue;
          std::vector<MPoly<Fp>> factors;
          std::set<std::string> fseen;
          auto add = [&](const MPoly<Fp>& h) {
            if (h.total_deg() == 0) return;
            if (fseen.insert(to_canonical_string(h)).second) factors.push_back(h);
          };
          add(lu);
          add(mi.numerator);
          if (!lx_const) add(lead_x[li]);
          TaskOut branch;
          branch.stats = out.stats;
          std::vector<MPoly<Fp>> ideal =
              saturate_many(eqs, factors, evars, eord, &branch.stats);
          GroebnerBasis<Fp> g2 = buchberger(ideal, evars, eord);
          merge_stats(branch.stats, g2.stats);
          bool unit = false;
          for (auto& h : g2.gens)
            if (h.total_deg() == 0) unit = true;
          if (unit) continue;
          std::vector<MPoly<Fp>> us = elimination_ideal(g2, keep);
          if (us.empty()) continue;
          UPoly<Fp> h = to_upoly(us[0], rem);
          for (std::size_t i = 1; i < us.size(); ++i)
            h = gcd(h, to_upoly(us[i], rem));
          if (h.deg() < 1) continue;
          branch.poly = upoly_squarefree_part(h);
          branch.shape = cat("c", my, ":", branch.poly.deg());
          return branch;
        }
      }
    }
    return std::nullopt;
  }
};

// Incidence-variety backend; implemented for order 2, where exactly one
// parameter variable survives next to z1.
struct GeomBackend {
  MPoly<Rat> P, Px, Pu;
  int ev_src;
  VarsPtr v4, v3;
  OrderPtr o4, oA, oB, o3;
  int ix = 0, iu = 1, iz1 = 2, ipv = 3;
  MPoly<Rat> ua_q;
  std::uint64_t seed = 1;
  std::uint32_t p = 0;
  std::vector<MPoly<Fp>> gens_p;
  MPoly<Fp> ua_p;

  GeomBackend(const DdeSpec& s, bool ev_t, std::uint64_t sd)
      : P(get_p(s)),
        Px(P.derive(s.ix())),
        Pu(P.derive(s.iu())),
        ua_p(nullptr, nullptr) {
    if (s.k != 2) throw Error("geom backend expects order 2");
    seed = sd;
    ev_src = ev_t ? s.it() : s.iz(0);
    v4 = make_vars({"x", "u", "z1", ev_t ? z_name(0) : "t"});
    o4 = make_order(MonomialOrder::grevlex(4));
    oA = make_order(MonomialOrder::grevlex(4).with_front({ix, iu}));
    oB = make_order(MonomialOrder::grevlex(4).with_front({ix, iu, iz1}));
    v3 = make_vars({"x", "u", "z1"});
    o3 = make_order(MonomialOrder::grevlex(3));
    ua_q = MPoly<Rat>::var(v4, o4, iu, 1, Rat(1)) -
           MPoly<Rat>::constant(v4, o4, s.a);
  }

  const char* fail_message() const {
    return "geom: the incidence fibers fail to be zero-dimensional or to eliminate";
  }

  bool start_prime(std::uint32_t pp) {
    p = pp;
    gens_p.clear();
    for (auto* f : {&P, &Px, &Pu}) {
      auto m = mpoly_mod_p(*f, p);
      if (!m) return false;
      gens_p.push_back(std::move(*m));
    }
    auto m = mpoly_mod_p(ua_q, p);
    if (!m) return false;
    ua_p = std::move(*m);
    return true;
  }

  std::optional<TaskOut> point(std::uint64_t tau) const {
    std::vector<std::optional<Fp>> vals(gens_p[0].vars->size());
    vals[ev_src] = Fp(static_cast<std::int64_t>(tau), p);
    std::vector<MPoly<Fp>> gens;
    for (auto& f : gens_p)
      gens.push_back(transport(subst_consts(f, vals), v4, o4));
    TaskOut out;
    std::vector<MPoly<Fp>> J = saturate(gens, ua_p, v4, o4, &out.stats);

    std::vector<MPoly<Fp>> JA;
    for (auto& f : J) JA.push_back(transport(f, v4, oA));
    GroebnerBasis<Fp> gbA = buchberger(JA, v4, oA);
    merge_stats(out.stats, gbA.stats);
    std::vector<char> keepA(4, 0);
    keepA[iz1] = 1;
    keepA[ipv] = 1;
    std::vector<MPoly<Fp>> A = elimination_ideal(gbA, keepA);

    Fp one(1, p);
    Rng srng(seed ^ (static_cast<std::uint64_t>(p) * 0x100000001b3ULL + tau));
    long dim_seen = -1;
    auto sample = [&](Fp c) -> std::optional<std::pair<std::string, UPoly<Fp>>> {
      std::vector<std::optional<Fp>> sub(4);
      sub[ipv] = c;
      std::vector<MPoly<Fp>> gc;
      for (auto& f : J) gc.push_back(transport(subst_consts(f, sub), v3, o3));
      GroebnerBasis<Fp> gb3 = buchberger(gc, v3, o3);
      auto qb = is_zero_dim(gb3);
      if (!qb || qb->dim() == 0) return std::nullopt;
      Matrix<Fp> m = mult_matrix(gb3, *qb, MPoly<Fp>::var(v3, o3, iz1, 1, one));
      UPoly<Fp> chi = char_poly(m, one);
      dim_seen = chi.deg();
      return std::make_pair(staircase_string(*qb), std::move(chi));
    };
    std::string inner_shape;
    auto fit = sample_family(p, srng, 512, sample, &inner_shape);
    if (!fit) return std::nullopt;
    out.d_chi = fit->d;

    std::vector<MPoly<Fp>> B;
    for (auto& f : A) B.push_back(transport(f, v4, oB));
    MPoly<Fp> chi4 = MPoly<Fp>::zero(v4, oB);
    for (int j = 0; j <= fit->d; ++j) {
      if (fit->carrier[j].zero()) continue;
      MPoly<Fp> cj = from_upoly(fit->carrier[j], v4, oB, ipv);
      if (j > 0)
        cj = cj * MPoly<Fp>::var(v4, oB, iz1, static_cast<unsigned>(j), one);
      chi4 = chi4 + cj;
    }
    B.push_back(chi4);
    B.push_back(chi4.derive(iz1));
    if (fit->carrier[fit->d].deg() >= 1) {
      MPoly<Fp> D4 = from_upoly(fit->carrier[fit->d], v4, oB, ipv);
      B = saturate(B, D4, v4, oB, &out.stats);
    }
    GroebnerBasis<Fp> gbB = buchberger(B, v4, oB);
    merge_stats(out.stats, gbB.stats);
    std::vector<char> keepB(4, 0);
    keepB[ipv] = 1;
    std::vector<MPoly<Fp>> us = elimination_ideal(gbB, keepB);
    if (us.empty()) return std::nullopt;
    UPoly<Fp> h = to_upoly(us[0], ipv);
    for (std::size_t i = 1; i < us.size(); ++i) h = gcd(h, to_upoly(us[i], ipv));
    if (h.deg() < 1) return std::nullopt;
    out.poly = upoly_squarefree_part(h);
    out.shape = cat("x", fit->d, ":", inner_shape, ":", out.poly.deg());
    (void)dim_seen;
    return out;
  }
};

// ---------------------------------------------------------------------------
// Prime-by-prime evaluation, interpolation, and CRT stabilization.

struct PrimeImage {
  std::uint32_t p = 0;
  std::vector<UPoly<Fp>> carrier;
  int d = 0;
  std::string shape;
};

template <class Backend>
std::optional<PrimeImage> run_prime(const SolveOptions& opts, Backend& bk,
                                    std::uint32_t p, AnnihilatorResult& res,
                                    const Stopwatch& clock) {
  if (!bk.start_prime(p)) return std::nullopt;
  Rng trng(opts.seed ^ (static_cast<std::uint64_t>(p) * 0x9e3779b97f4a7c15ULL));
  std::set<std::uint64_t> used;
  std::vector<std::pair<Fp, TaskOut>> got;
  std::map<std::string, int> votes;
  std::string fixed;
  int attempts = 0, consec = 0, target = 8;
  while (true) {
    enforce_budget(clock, opts);
    int good = 0;
    if (!fixed.empty())
      for (auto& g : got)
        if (g.second.shape == fixed) ++good;
    int need = fixed.empty() ? std::max(5 - static_cast<int>(got.size()), 1)
                             : std::max(target - good, 1);
    int batch = std::min(need, 32);
    if (attempts + batch > opts.max_points) batch = opts.max_points - attempts;
    if (batch <= 0)
      throw ResourceLimit(cat("evaluation point budget (", opts.max_points,
                              " per prime) exhausted"));
    std::vector<std::uint64_t> taus;
    while (static_cast<int>(taus.size()) < batch) {
      std::uint64_t tau = 1 + trng.below(p - 1);
      if (used.insert(tau).second) taus.push_back(tau);
    }
    std::vector<std::optional<TaskOut>> slots(taus.size());
    parallel_for(taus.size(), opts.jobs,
                 [&](std::size_t i) { slots[i] = bk.point(taus[i]); });
    for (std::size_t i = 0; i < slots.size(); ++i) {
      ++attempts;
      ++res.points;
      if (!slots[i]) {
        if (++consec >= 64) throw SolveDiagnostic(bk.fail_message());
        continue;
      }
      consec = 0;
      merge_stats(res.gstats, slots[i]->stats);
      if (slots[i]->d_chi >= 0) res.d_chi = slots[i]->d_chi;
      ++votes[slots[i]->shape];
      got.emplace_back(Fp(static_cast<std::int64_t>(taus[i]), p),
                       std::move(*slots[i]));
    }
    if (fixed.empty()) {
      int total = 0;
      for (auto& kv : votes) total += kv.second;
      if (total < 5) continue;
      for (auto& kv : votes)
        if (fixed.empty() || kv.second > votes[fixed]) fixed = kv.first;
    }
    std::vector<Fp> xs;
    std::vector<UPoly<Fp>> ys;
    for (auto& g : got)
      if (g.second.shape == fixed) {
        xs.push_back(g.first);
        ys.push_back(g.second.poly);
      }
    if (static_cast<int>(xs.size()) < target) continue;
    auto fit = fit_family(xs, ys);
    if (!fit) {
      target *= 2;
      continue;
    }
    res.staircase = fixed;
    PrimeImage img;
    img.p = p;
    img.carrier = std::move(fit->carrier);
    img.d = fit->d;
    img.shape = fixed;
    return img;
  }
}

inline std::optional<MPoly<Rat>> crt_reconstruct(const std::vector<const PrimeImage*>& imgs,
                                                 const AnnRing& ar, bool ev_is_t) {
  std::set<std::pair<int, int>> sup;  // (kept degree, sampled degree)
  for (auto* im : imgs)
    for (int j = 0; j <= im->d; ++j)
      for (int i = 0; i <= im->carrier[j].deg(); ++i)
        if (im->carrier[j][i].v != 0) sup.insert({j, i});
  std::vector<std::pair<Monomial, Rat>> raw;
  for (auto& ji : sup) {
    CrtAccumulator acc;
    for (auto* im : imgs) {
      std::uint64_t r = 0;
      if (ji.first <= im->d) r = im->carrier[ji.first][ji.second].v;
      acc.add(im->p, r);
    }
    auto q = rational_reconstruct(acc.value, acc.modulus);
    if (!q) return std::nullopt;
    if (*q == 0) continue;
    Monomial m(ar.vars->size());
    m.e[ar.iz0] = static_cast<std::uint16_t>(ev_is_t ? ji.first : ji.second);
    m.e[ar.it] = static_cast<std::uint16_t>(ev_is_t ? ji.second : ji.first);
    m.deg = m.e[ar.iz0] + m.e[ar.it];
    raw.emplace_back(m, *q);
  }
  if (raw.empty()) return std::nullopt;
  return mpoly_from_terms(ar.vars, ar.ord, std::move(raw));
}

template <class Backend>
MPoly<Rat> modular_merge(const SolveOptions& opts, Backend& bk, const AnnRing& ar,
                         bool ev_is_t, AnnihilatorResult& res, const Stopwatch& clock) {
  Rng prng(opts.seed);
  std::set<std::uint32_t> tried;
  std::vector<PrimeImage> images;
  std::optional<std::string> prev_sig;
  std::optional<MPoly<Rat>> prev;
  int attempts = 0;
  while (static_cast<int>(images.size()) < opts.max_primes &&
         attempts < 3 * opts.max_primes + 8) {
    enforce_budget(clock, opts);
    ++attempts;
    std::uint32_t p = random_prime(prng, opts.prime_lo, opts.prime_hi);
    if (!tried.insert(p).second) continue;
    auto img = run_prime(opts, bk, p, res, clock);
    if (!img) continue;  // the prime hits a denominator
    res.primes.push_back(p);
    images.push_back(std::move(*img));
    if (images.size() < 2) continue;

    // majority degree/shape profile across primes
    std::map<std::string, int> profile;
    for (auto& im : images) ++profile[cat(im.d, "|", im.shape)];
    std::string best;
    for (auto& kv : profile)
      if (best.empty() || kv.second > profile[best]) best = kv.first;
    std::vector<const PrimeImage*> usable;
    for (auto& im : images)
      if (cat(im.d, "|", im.shape) == best) usable.push_back(&im);
    if (usable.size() < 2) continue;

    auto candidate = crt_reconstruct(usable, ar, ev_is_t);
    if (!candidate) continue;
    std::string sig = to_canonical_string(*candidate);
    if (prev_sig && *prev_sig == sig) return *candidate;
    prev_sig = sig;
    prev = candidate;
  }
  throw ResourceLimit("modular reconstruction did not stabilize within the prime budget");
}

// Monte Carlo squarefreeness test of P: a repeated factor shows up as a
// nonconstant gcd(p, p') along any variable it involves.
inline bool precheck_squarefree(const DdeSpec& s, Rng& rng) {
  MPoly<Rat> P = get_p(s);
  std::optional<MPoly<Fp>> Pm;
  std::uint32_t p = 0;
  for (int tries = 0; tries < 5 && !Pm; ++tries) {
    p = random_prime(rng);
    Pm = mpoly_mod_p(P, p);
  }
  if (!Pm) return true;
  std::size_t n = Pm->vars->size();
  for (std::size_t v = 0; v < n; ++v) {
    int dv = Pm->deg_in(static_cast<int>(v));
    if (dv < 2) continue;
    int bad = 0;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::optional<Fp>> vals(n);
      for (std::size_t w = 0; w < n; ++w)
        if (w != v) vals[w] = Fp(static_cast<std::int64_t>(rng.below(p)), p);
      MPoly<Fp> pv = subst_consts(*Pm, vals);
      if (pv.deg_in(static_cast<int>(v)) != dv) {
        --trial;  // degree dropped: resample
        continue;
      }
      UPoly<Fp> u = to_upoly(pv, static_cast<int>(v));
      if (gcd(u, u.derivative()).deg() >= 1) ++bad;
    }
    if (bad >= 2) return false;
  }
  return true;
}

// The eliminated variety can carry extra branches (Puiseux solutions of the
// critical system that never meet K[[t]]), so the reconstructed polynomial is
// in general a proper multiple of the minimal annihilator of F(t,a). Sweep
// the degree box from below and keep the first guess whose residual vanishes
// to order box_t*dz + dt*box_z: with the box degrees known to bound a true
// annihilator, matching that many terms is already a proof. The series is
// grown lazily because expansion over Q dominates everything else.
inline std::optional<MPoly<Rat>> minimal_annihilator_in_box(const DdeSpec& spec,
                                                            int box_t, int box_z,
                                                            const SolveOptions& opts,
                                                            const Stopwatch& clock,
                                                            Rng& rng) {
  if (spec.mode != DdeSpec::Mode::FixedPoint || box_t < 0 || box_z < 1)
    return std::nullopt;
  std::vector<Rat> series;
  auto ensure = [&](std::size_t want, bool exact) {
    if (!exact) want = (want + 15) / 16 * 16;
    if (want <= series.size()) return;
    enforce_budget(clock, opts);
    series = specialize_series(expand_series(spec, want), spec.a);
  };
  // Visit the degree pairs by guessing-matrix size: the series then grows no
  // further than the answer requires, and the first pair that can hold an
  // annihilator is exactly the minimal one, where the nullspace has dimension
  // one. Strictly larger caps would admit spurious multiples.
  std::vector<std::pair<int, int>> order;
  for (int dz = 1; dz <= box_z; ++dz)
    for (int dt = 0; dt <= box_t; ++dt) order.emplace_back(dt, dz);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return (a.first + 1) * (a.second + 1) < (b.first + 1) * (b.second + 1);
  });
  GuessProblem pb;
  for (auto [dt, dz] : order) {
    enforce_budget(clock, opts);
    ensure(static_cast<std::size_t>(dt + 1) * static_cast<std::size_t>(dz + 1) + 4, false);
    pb.series = series;
    pb.deg_t_max = dt;
    pb.deg_z0_max = dz;
    auto r = guess_algebraic(pb, rng);
    if (!r) continue;
    int rt = r->deg_in(r->vars->require("t"));
    int rz = r->deg_in(r->vars->require("z0"));
    std::size_t proof = static_cast<std::size_t>(box_t) * rz +
                        static_cast<std::size_t>(rt) * box_z + 1;
    if (series.size() < proof) {
      ensure(proof, true);
      if (residual_valuation(annihilator_residual(*r, series)) >= 0) continue;
    }
    return r;
  }
  return std::nullopt;
}

}  // namespace detail

// Degrees of the specialized annihilator at one random modular point:
// d_z0 from fixing t, d_t from fixing z0. The backend follows opts.method
// (direct by default); the raw eliminant degrees are then sharpened to the
// degrees of the minimal annihilator inside that box when a series is
// available.
inline ModularProbe run_modular_probe(const DdeSpec& spec, const SolveOptions& opts) {
  if (spec.mode == DdeSpec::Mode::FixedPoint && spec.q.is_zero_poly())
    return ModularProbe{0, 0, 0, 1};
  Rng rng(opts.seed * 0x9e3779b97f4a7c15ULL + 1);
  auto raw = [&](auto& bt, auto& bz) -> std::optional<ModularProbe> {
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::uint32_t p = random_prime(rng, opts.prime_lo, opts.prime_hi);
      if (!bt.start_prime(p) || !bz.start_prime(p)) continue;
      std::uint64_t theta = 1 + rng.below(p - 1);
      auto rt = bt.point(theta);
      auto rz = bz.point(theta);
      if (!rt || !rz) continue;
      ModularProbe pr;
      pr.p = p;
      pr.theta = theta;
      pr.d_z0 = rt->poly.deg();
      pr.d_t = rz->poly.deg();
      return pr;
    }
    return std::nullopt;
  };
  std::optional<ModularProbe> pr;
  if (opts.method == "elim") {
    detail::ElimBackend bt(spec, true), bz(spec, false);
    pr = raw(bt, bz);
  } else if (opts.method == "geom" && spec.k == 2) {
    detail::GeomBackend bt(spec, true, opts.seed), bz(spec, false, opts.seed);
    pr = raw(bt, bz);
  } else {
    detail::DirectBackend bt(spec, true), bz(spec, false);
    pr = raw(bt, bz);
  }
  if (!pr) throw SolveDiagnostic("probe failed: no usable evaluation point found");
  if (spec.mode == DdeSpec::Mode::FixedPoint && pr->d_t >= 0 && pr->d_z0 >= 1) {
    Stopwatch clock;
    Rng mrng(opts.seed ^ 0x27220a95fe2bae5ULL);
    auto m = detail::minimal_annihilator_in_box(spec, static_cast<int>(pr->d_t),
                                                static_cast<int>(pr->d_z0), opts,
                                                clock, mrng);
    if (m) {
      AnnRing ar = ann_ring();
      pr->d_t = m->deg_in(ar.it);
      pr->d_z0 = m->deg_in(ar.iz0);
    }
  }
  return *pr;
}

// Necessary-condition check: the Jacobian of the duplicated system in the
// (x_i, u_i, z_j) directions is nonsingular somewhere. A `true` only means no
// contradiction was found.
inline bool check_h4(const DdeSpec& spec, int samples, Rng& rng) {
  DuplicatedSystem d = build_duplicated(spec);
  std::vector<int> cols;
  for (int i = 0; i < spec.k; ++i) {
    cols.push_back(d.xi[i]);
    cols.push_back(d.ui[i]);
  }
  for (int j = 0; j < spec.k; ++j) cols.push_back(d.zi[j]);
  std::size_t m = d.polys.size();
  std::vector<std::vector<MPoly<Rat>>> jac(m);
  for (std::size_t r = 0; r < m; ++r)
    for (int c : cols) jac[r].push_back(d.polys[r].derive(c));

  for (int trial = 0; trial < samples; ++trial) {
    std::uint32_t p = random_prime(rng);
    std::vector<Fp> pt;
    for (std::size_t v = 0; v < d.vars->size(); ++v)
      pt.push_back(Fp(static_cast<std::int64_t>(rng.below(p)), p));
    Matrix<Fp> J(m, m);
    bool ok = true;
    for (std::size_t r = 0; r < m && ok; ++r)
      for (std::size_t c = 0; c < m && ok; ++c) {
        auto e = mpoly_mod_p(jac[r][c], p);
        if (!e) {
          ok = false;
          break;
        }
        J.at(r, c) = mpoly_eval(*e, pt);
      }
    if (!ok) continue;
    if (det(J).v != 0) return true;
  }
  return false;
}

namespace detail {

inline AnnihilatorResult solve_hgp(const DdeSpec& spec, const SolveOptions& opts,
                                   bool h1_ok, AnnihilatorResult res,
                                   const Stopwatch& clock) {
  if (spec.mode != DdeSpec::Mode::FixedPoint)
    throw Error("hgp needs a fixed-point input (f and Q)");
  Rng rng(opts.seed);
  long dt = 1, dz = 1;
  bool heuristic = !h1_ok;
  if (!heuristic) {
    ModularProbe pr = run_modular_probe(spec, opts);
    dt = std::max(pr.d_t, 0L);
    dz = std::max(pr.d_z0, 1L);
    if (pr.p) res.primes.push_back(pr.p);
    res.notes.push_back(cat("probe at p=", pr.p, ": d_t=", pr.d_t, ", d_z0=", pr.d_z0));
  } else {
    res.notes.push_back("H1 not established; guessing heuristically from small degrees");
  }
  for (int round = 0;; ++round) {
    enforce_budget(clock, opts);
    std::size_t sigma =
        2 * static_cast<std::size_t>(dt + 1) * static_cast<std::size_t>(dz + 1) + 8;
    std::vector<Rat> series = specialize_series(expand_series(spec, sigma), spec.a);
    GuessProblem pb;
    pb.series = series;
    pb.deg_t_max = dt;
    pb.deg_z0_max = dz;
    std::optional<MPoly<Rat>> r = guess_algebraic(pb, rng);
    bool grow = !r;
    if (r) {
      res.r = *r;
      if (heuristic) {
        Certificate c;
        c.order_checked = static_cast<long>(sigma) - 1;
        c.bound_used = "heuristic";
        c.status = "inconclusive-heuristic";
        res.certificate = c;
      } else {
        res.certificate = certify(*r, spec, CertifyMode::probe(dt, dz));
        if (res.certificate->status == "refuted") grow = true;
      }
    }
    if (!grow) {
      res.staircase = cat("caps(", dt, ",", dz, ")");
      return res;
    }
    if (round >= 6)
      throw SolveDiagnostic(cat("no annihilator found with deg_t <= ", dt,
                                ", deg_z0 <= ", dz, " (guess ceiling)"));
    if (round % 2 == 0)
      dz = 2 * dz + 1;
    else
      dt = 2 * dt + 1;
  }
}

}  // namespace detail

inline AnnihilatorResult solve_annihilator(const DdeSpec& spec, const SolveOptions& opts) {
  Stopwatch clock;
  AnnRing ar = ann_ring();
  AnnihilatorResult res;
  res.r = MPoly<Rat>::zero(ar.vars, ar.ord);
  res.method = opts.method;

  if (opts.method != "direct" && opts.method != "hgp" && opts.method != "elim" &&
      opts.method != "geom")
    throw Error("unknown method " + opts.method);
  if (opts.ev_var != "t" && opts.ev_var != "z0")
    throw Error("ev-var must be t or z0");
  bool ev_is_t = opts.ev_var == "t";

  // Q = 0: the series is the constant f(a), no hypotheses needed.
  if (spec.mode == DdeSpec::Mode::FixedPoint && spec.q.is_zero_poly()) {
    Rat v(0);
    std::vector<std::optional<Rat>> vals(spec.qvars->size());
    vals[spec.iu()] = spec.a;
    MPoly<Rat> fa = subst_consts(spec.f, vals);
    if (!fa.is_zero_poly()) v = fa.lc();
    MPoly<Rat> r = MPoly<Rat>::var(ar.vars, ar.ord, ar.iz0, 1, Rat(v.get_den())) -
                   MPoly<Rat>::constant(ar.vars, ar.ord, Rat(v.get_num()));
    res.r = normalize_annihilator(r);
    res.deg_t = 0;
    res.deg_z0 = 1;
    res.staircase = "constant";
    res.notes.push_back("Q is zero, so F(t,a) = f(a)");
    if (opts.certify || opts.method == "hgp")
      res.certificate = certify_at(res.r, spec, 1, 1, "probe(0,1)");
    res.seconds = clock.seconds();
    return res;
  }

  H1Report h1 = check_h1(spec);
  bool h1_ok = h1.degree_ok && (!h1.derivative_known || h1.derivative_ok);
  if (!h1.degree_ok && opts.method != "hgp") {
    std::string msg = cat("H1 violated: deg_u of d_x P at t=0 is ", h1.degree,
                          ", need at least k = ", spec.k);
    if (!opts.force) throw SolveDiagnostic(msg);
    res.notes.push_back(msg + " (--force)");
  }
  if (h1.degree_ok && h1.derivative_known && !h1.derivative_ok)
    res.notes.push_back("H1 warning: the Q-derivative vanishes at the base point");

  if (opts.method == "hgp") {
    res = detail::solve_hgp(spec, opts, h1_ok, std::move(res), clock);
  } else {
    std::string method = opts.method;
    if (method == "geom" && spec.k < 2) {
      res.notes.push_back("geom needs order >= 2; falling back to elim");
      method = "elim";
    }
    if (method == "geom" && spec.k > 2)
      throw SolveDiagnostic("geom backend handles order 2 exactly; use direct or elim");
    if (method == "elim" || method == "geom") {
      Rng rng(opts.seed + 17);
      if (!detail::precheck_squarefree(spec, rng))
        throw SolveDiagnostic("P has a repeated factor; elim and geom need P squarefree");
    }
    MPoly<Rat> cand = MPoly<Rat>::zero(ar.vars, ar.ord);
    if (method == "direct") {
      detail::DirectBackend bk(spec, ev_is_t);
      cand = detail::modular_merge(opts, bk, ar, ev_is_t, res, clock);
    } else if (method == "elim") {
      detail::ElimBackend bk(spec, ev_is_t);
      cand = detail::modular_merge(opts, bk, ar, ev_is_t, res, clock);
    } else {
      detail::GeomBackend bk(spec, ev_is_t, opts.seed);
      cand = detail::modular_merge(opts, bk, ar, ev_is_t, res, clock);
    }
    if (cand.deg_in(ar.iz0) == 0)
      throw SolveDiagnostic("reconstructed polynomial does not involve z0");
    // Minimize before normalizing: the raw eliminant can be large, and the
    // squarefree pass over Q(t) is far costlier than re-guessing the small
    // minimal factor inside the box the eliminant certifies.
    int box_t = cand.deg_in(ar.it);
    int box_z = cand.deg_in(ar.iz0);
    std::optional<MPoly<Rat>> minimal;
    if (spec.mode == DdeSpec::Mode::FixedPoint) {
      Rng mrng(opts.seed ^ 0x27220a95fe2bae5ULL);
      minimal = detail::minimal_annihilator_in_box(spec, box_t, box_z, opts, clock, mrng);
    }
    if (minimal) {
      res.r = normalize_annihilator(std::move(*minimal));
      if (res.r.deg_in(ar.it) != box_t || res.r.deg_in(ar.iz0) != box_z)
        res.notes.push_back(cat("eliminant of degrees (", box_t, ",", box_z,
                                ") reduced to its minimal annihilating factor"));
    } else {
      res.r = normalize_annihilator(cand);
    }
    if (opts.certify) {
      if (spec.mode == DdeSpec::Mode::FixedPoint)
        res.certificate = certify(res.r, spec, CertifyMode::probe(box_t, box_z));
      else
        res.notes.push_back("certification needs a fixed-point input; skipped");
    }
  }

  res.deg_t = res.r.deg_in(ar.it);
  res.deg_z0 = res.r.deg_in(ar.iz0);
  res.seconds = clock.seconds();
  return res;
}

}  // namespace catalix

#endif
