#ifndef CATALIX_GUESS_HPP
#define CATALIX_GUESS_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catalix/dde.hpp"
#include "catalix/linalg.hpp"
#include "catalix/mpoly.hpp"
#include "catalix/numeric.hpp"
#include "catalix/ratfun.hpp"

namespace catalix {

// The ring every annihilator lives in: [t, z0] ordered lexicographically
// with z0 most significant, which also fixes the sign convention.
struct AnnRing {
  VarsPtr vars;
  OrderPtr ord;
  int it = 0, iz0 = 1;
};

inline AnnRing ann_ring() {
  AnnRing r;
  r.vars = make_vars({"t", "z0"});
  r.ord = make_order(MonomialOrder::lex_ranked({1, 0}));
  return r;
}

// R(t, S(t)) mod t^sigma for a truncated series S.
inline std::vector<Rat> annihilator_residual(const MPoly<Rat>& r,
                                             const std::vector<Rat>& series) {
  int it = r.vars->require("t");
  int iz0 = r.vars->require("z0");
  std::size_t sigma = series.size();
  std::vector<Rat> out(sigma, Rat(0));
  if (sigma == 0) return out;
  int dz = r.deg_in(iz0);
  std::vector<std::vector<Rat>> pw(static_cast<std::size_t>(dz) + 1,
                                   std::vector<Rat>(sigma, Rat(0)));
  pw[0][0] = Rat(1);
  for (int j = 1; j <= dz; ++j)
    for (std::size_t n = 0; n < sigma; ++n)
      for (std::size_t m = 0; m <= n; ++m)
        pw[static_cast<std::size_t>(j)][n] +=
            pw[static_cast<std::size_t>(j - 1)][m] * series[n - m];
  for (auto& term : r.ts) {
    unsigned i = term.first.e[static_cast<std::size_t>(it)];
    unsigned j = term.first.e[static_cast<std::size_t>(iz0)];
    if (term.first.deg != i + j) throw Error("annihilator uses a foreign variable");
    for (std::size_t n = i; n < sigma; ++n) out[n] += term.second * pw[j][n - i];
  }
  return out;
}

inline long residual_valuation(const std::vector<Rat>& res) {
  for (std::size_t i = 0; i < res.size(); ++i)
    if (!is_zero(res[i])) return static_cast<long>(i);
  return -1;
}

// Canonical output form: squarefree in z0 over Q(t), integer primitive,
// positive leading coefficient in the z0-major lex order. The ring of the
// input is preserved; only the sign convention refers to z0-major lex.
inline MPoly<Rat> normalize_annihilator(MPoly<Rat> r) {
  if (r.is_zero_poly()) throw Error("cannot normalize the zero annihilator");
  int it = r.vars->require("t");
  int iz0 = r.vars->require("z0");
  if (r.deg_in(iz0) > 0) r = bivariate_squarefree_in(r, iz0, it);
  r = mpoly_primitive(r).first;
  MonomialOrder sign_ord = MonomialOrder::lex_ranked({iz0, it});
  const std::pair<Monomial, Rat>* lead = &r.ts.front();
  for (auto& t : r.ts)
    if (sign_ord.cmp(t.first, lead->first) > 0) lead = &t;
  if (lead->second < 0) r = -r;
  return r;
}

struct GuessProblem {
  std::vector<Rat> series;  // F(t, a) mod t^sigma
  int deg_t_max = 1;
  int deg_z0_max = 1;
};

// Hermite-Pade style guess: the nullspace of the truncation constraints is
// computed modulo probe primes, reconstructed over Q, and gated by an exact
// residual check. Returns nothing when only the zero solution exists.
inline std::optional<MPoly<Rat>> guess_algebraic(const GuessProblem& pb, Rng& rng) {
  std::size_t sigma = pb.series.size();
  std::size_t nct = static_cast<std::size_t>(pb.deg_t_max) + 1;
  std::size_t ncz = static_cast<std::size_t>(pb.deg_z0_max) + 1;
  std::size_t ncols = nct * ncz;
  if (sigma + 1 < ncols) throw Error("insufficient precision");
  AnnRing ring = ann_ring();

  auto kernel_mod = [&](std::uint32_t p) -> std::optional<std::vector<std::vector<Fp>>> {
    std::vector<Fp> s;
    for (auto& c : pb.series) {
      auto img = fp_of(c, p);
      if (!img) return std::nullopt;
      s.push_back(*img);
    }
    std::vector<std::vector<Fp>> pw(ncz, std::vector<Fp>(sigma, Fp(0, p)));
    pw[0][0] = Fp(1, p);
    for (std::size_t j = 1; j < ncz; ++j)
      for (std::size_t n = 0; n < sigma; ++n)
        for (std::size_t m = 0; m <= n; ++m) pw[j][n] += pw[j - 1][m] * s[n - m];
    Matrix<Fp> a(sigma, ncols);
    for (std::size_t j = 0; j < ncz; ++j)
      for (std::size_t i = 0; i < nct; ++i)
        for (std::size_t n = i; n < sigma; ++n)
          a.at(n, j * nct + i) = pw[j][n - i];
    return nullspace(a, Fp(1, p));
  };

  auto build_candidate = [&](const std::vector<Rat>& coef) {
    std::vector<std::pair<Monomial, Rat>> ts;
    for (std::size_t j = 0; j < ncz; ++j)
      for (std::size_t i = 0; i < nct; ++i) {
        const Rat& c = coef[j * nct + i];
        if (is_zero(c)) continue;
        Monomial m(2);
        m.e[static_cast<std::size_t>(ring.it)] = static_cast<std::uint16_t>(i);
        m.e[static_cast<std::size_t>(ring.iz0)] = static_cast<std::uint16_t>(j);
        m.deg = static_cast<std::uint32_t>(i + j);
        ts.emplace_back(m, c);
      }
    return mpoly_from_terms(ring.vars, ring.ord, std::move(ts));
  };

  std::vector<std::pair<std::uint32_t, std::vector<std::vector<Fp>>>> kers;
  std::set<std::uint32_t> used;
  int misses = 0;
  while (kers.size() < 6 && misses < 16) {
    std::uint32_t p = random_prime(rng);
    if (!used.insert(p).second) continue;
    auto k = kernel_mod(p);
    if (!k) {
      ++misses;
      continue;
    }
    // full rank modulo any clean prime proves full rank over Q
    if (k->empty()) return std::nullopt;
    if (!kers.empty()) {
      std::size_t cur = kers.front().second.size();
      if (k->size() > cur) {
        ++misses;  // rank dropped: unlucky prime
        continue;
      }
      if (k->size() < cur) kers.clear();  // previous primes were the unlucky ones
    }
    kers.emplace_back(p, std::move(*k));
    if (kers.size() < 2) continue;

    for (std::size_t idx = 0; idx < kers.front().second.size(); ++idx) {
      std::vector<Rat> coef(ncols);
      bool ok = true;
      for (std::size_t c = 0; c < ncols && ok; ++c) {
        CrtAccumulator acc;
        for (auto& [p_i, basis] : kers) acc.add(p_i, basis[idx][c].v);
        auto rec = rational_reconstruct(acc.value, acc.modulus);
        if (!rec)
          ok = false;
        else
          coef[c] = *rec;
      }
      if (!ok) continue;
      MPoly<Rat> r = build_candidate(coef);
      if (r.is_zero_poly() || r.deg_in(ring.iz0) == 0) continue;
      if (residual_valuation(annihilator_residual(r, pb.series)) >= 0) continue;
      return normalize_annihilator(std::move(r));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Certification.

struct CertifyMode {
  bool is_probe = false;
  Int b;             // bound mode
  long d_t = 0, d_z0 = 0;  // probe mode
  static CertifyMode bound(Int bb) {
    CertifyMode m;
    m.b = std::move(bb);
    return m;
  }
  static CertifyMode probe(long dt, long dz) {
    CertifyMode m;
    m.is_probe = true;
    m.d_t = dt;
    m.d_z0 = dz;
    return m;
  }
};

struct Certificate {
  long order_checked = 0;
  std::string bound_used;
  std::string status;  // certified | refuted | inconclusive
  long valuation = -1;  // of the residual, when refuted
};

// Degree bound on both partial degrees of the annihilator.
inline Int bound_b(const DdeSpec& spec) {
  MPoly<Rat> p = get_p(spec);
  long delta = static_cast<long>(p.total_deg());
  unsigned k = static_cast<unsigned>(spec.k);
  Int num = pow_int(Int(delta), k) * pow_int(Int(delta - 1), 2 * k);
  Int den = 1;
  for (unsigned i = 2; i <= k; ++i) den *= i;
  return (num + den - 1) / den;
}

// Evaluate the residual of R on the expanded series and classify against a
// required order. `order` is how far we check, `threshold` what the active
// rule demands for a proof.
inline Certificate certify_at(const MPoly<Rat>& r, const DdeSpec& spec, long order,
                              long threshold, std::string bound_desc) {
  if (r.is_zero_poly()) throw Error("cannot certify the zero polynomial");
  if (order < 0) throw Error("negative certification order");
  Certificate cert;
  cert.order_checked = order;
  cert.bound_used = std::move(bound_desc);
  TSeries<Rat> f = expand_series(spec, static_cast<std::size_t>(order) + 1);
  std::vector<Rat> s = specialize_series(f, spec.a);
  long val = residual_valuation(annihilator_residual(r, s));
  if (val >= 0) {
    cert.status = "refuted";
    cert.valuation = val;
  } else {
    cert.status = order >= threshold ? "certified" : "inconclusive";
  }
  return cert;
}

inline Certificate certify(const MPoly<Rat>& r, const DdeSpec& spec, const CertifyMode& mode) {
  int it = r.vars->require("t");
  int iz0 = r.vars->require("z0");
  Int n;
  std::string desc;
  if (mode.is_probe) {
    n = Int(mode.d_t) * r.deg_in(iz0) + Int(r.deg_in(it)) * mode.d_z0;
    desc = cat("probe(", mode.d_t, ",", mode.d_z0, ")");
  } else {
    n = mode.b * static_cast<long>(r.total_deg());
    desc = cat("b=", mode.b.get_str());
  }
  if (!n.fits_slong_p()) throw Error("certification order too large");
  long order = n.get_si();
  return certify_at(r, spec, order, order, desc);
}

}  // namespace catalix

#endif
