#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "catalix/groebner.hpp"
#include "catalix/numeric.hpp"
#include "catalix/parse.hpp"
#include "catalix/ratfun.hpp"

using namespace catalix;

namespace {

struct Ring {
  VarsPtr vars;
  OrderPtr ord;
};

Ring lex_ring(std::vector<std::string> names) {
  Ring r;
  r.vars = make_vars(names);
  r.ord = make_order(MonomialOrder::lex(static_cast<int>(names.size())));
  return r;
}

Ring grevlex_ring(std::vector<std::string> names) {
  Ring r;
  r.vars = make_vars(names);
  r.ord = make_order(MonomialOrder::grevlex(static_cast<int>(names.size())));
  return r;
}

MPoly<Rat> pp(const std::string& s, const Ring& r) { return parse_poly(s, r.vars, r.ord); }

std::vector<std::string> basis_strings(const GroebnerBasis<Rat>& gb) {
  std::vector<std::string> out;
  for (auto& f : gb.gens) out.push_back(to_canonical_string(f));
  return out;
}

MPoly<Fp> random_fp_mpoly(Rng& rng, const Ring& r, std::uint32_t p, int maxdeg, int nterms) {
  std::vector<std::pair<Monomial, Fp>> ts;
  std::size_t n = r.vars->size();
  for (int t = 0; t < nterms; ++t) {
    Monomial m(n);
    int budget = static_cast<int>(rng.below(static_cast<std::uint64_t>(maxdeg) + 1));
    for (int rep = 0; rep < budget; ++rep) {
      std::size_t v = static_cast<std::size_t>(rng.below(n));
      m.e[v] += 1;
      m.deg += 1;
    }
    ts.emplace_back(m, Fp(static_cast<std::int64_t>(rng.below(p)), p));
  }
  return mpoly_from_terms(r.vars, r.ord, std::move(ts));
}

// vanishing ideal of one rational point
std::vector<MPoly<Fp>> point_ideal(const Ring& r, const std::vector<Fp>& pt) {
  std::vector<MPoly<Fp>> out;
  Fp one = unit(pt.at(0));
  for (std::size_t v = 0; v < r.vars->size(); ++v)
    out.push_back(MPoly<Fp>::var(r.vars, r.ord, static_cast<int>(v), 1, one) -
                  MPoly<Fp>::constant(r.vars, r.ord, pt[v]));
  return out;
}

// I cap J through the classic tag-variable trick: eliminate w from w*I + (1-w)*J.
std::vector<MPoly<Fp>> intersect_ideals(const std::vector<MPoly<Fp>>& a,
                                        const std::vector<MPoly<Fp>>& b, const Ring& r,
                                        const Fp& one) {
  VarsPtr xvars = extend_vars(r.vars, {"_m"});
  int wi = static_cast<int>(r.vars->size());
  OrderPtr xord = make_order(r.ord->with_front({wi}));
  MPoly<Fp> w = MPoly<Fp>::var(xvars, xord, wi, 1, one);
  MPoly<Fp> wc = MPoly<Fp>::constant(xvars, xord, one) - w;
  std::vector<MPoly<Fp>> gens;
  for (auto& f : a) gens.push_back(w * transport(f, xvars, xord));
  for (auto& g : b) gens.push_back(wc * transport(g, xvars, xord));
  GroebnerBasis<Fp> gb = buchberger(gens, xvars, xord);
  std::vector<MPoly<Fp>> out;
  for (auto& f : gb.gens)
    if (!f.uses(wi)) out.push_back(transport(f, r.vars, r.ord));
  return out;
}

std::vector<MPoly<Fp>> vanishing_ideal(const Ring& r, const std::vector<std::vector<Fp>>& pts) {
  Fp one = unit(pts.at(0).at(0));
  std::vector<MPoly<Fp>> acc = point_ideal(r, pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i)
    acc = intersect_ideals(acc, point_ideal(r, pts[i]), r, one);
  return acc;
}

bool vanishes_at(const std::vector<MPoly<Fp>>& gens, const std::vector<Fp>& pt) {
  for (auto& g : gens)
    if (!is_zero(mpoly_eval(g, pt))) return false;
  return true;
}

}  // namespace

TEST_CASE("reduced lex basis, frozen") {
  Ring r = lex_ring({"x", "y"});
  auto gb = buchberger<Rat>({pp("x^2 - 1", r), pp("y - x", r)}, r.vars, r.ord);
  REQUIRE(basis_strings(gb) == std::vector<std::string>{"x - y", "y^2 - 1"});
  REQUIRE(reduces_to_zero(pp("x^2 - 1", r), gb));
  REQUIRE(reduces_to_zero(pp("(y - x)*(x + y + 3)", r), gb));
  REQUIRE(!reduces_to_zero(pp("x - 1", r), gb));
}

TEST_CASE("unit ideal collapses to 1") {
  Ring r = lex_ring({"x", "y"});
  auto gb = buchberger<Rat>({pp("x", r), pp("x + 1", r)}, r.vars, r.ord);
  REQUIRE(basis_strings(gb) == std::vector<std::string>{"1"});
  auto gb2 = buchberger<Rat>({pp("3", r)}, r.vars, r.ord);
  REQUIRE(basis_strings(gb2) == std::vector<std::string>{"1"});
}

TEST_CASE("principal ideals come back monic and primitive") {
  Ring r = grevlex_ring({"x", "y"});
  auto gb = buchberger<Rat>({pp("3*x^2*y", r)}, r.vars, r.ord);
  REQUIRE(basis_strings(gb) == std::vector<std::string>{"x^2*y"});
  auto gb2 = buchberger<Rat>({pp("2*x + 4*y", r)}, r.vars, r.ord);
  REQUIRE(basis_strings(gb2) == std::vector<std::string>{"x + 2*y"});
}

TEST_CASE("groebner property: S-polynomials and inputs reduce to zero") {
  const std::uint32_t p = 10007;
  Ring r = grevlex_ring({"x", "y", "z"});
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<MPoly<Fp>> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_fp_mpoly(rng, r, p, 2, 3));
    auto gb = buchberger(gens, r.vars, r.ord);
    for (auto& f : gens) REQUIRE(normal_form(f, gb.gens).is_zero_poly());
    for (std::size_t i = 0; i < gb.gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gb.gens.size(); ++j) {
        const auto &A = gb.gens[i], &B = gb.gens[j];
        Monomial l = lcm(A.lm(), B.lm());
        MPoly<Fp> s = MPoly<Fp>::zero(r.vars, r.ord);
        s.axpy(unit(A.lc()) / A.lc(), A.lm().quotient_of(l), A);
        s.axpy(Fp() - unit(B.lc()) / B.lc(), B.lm().quotient_of(l), B);
        REQUIRE(normal_form(s, gb.gens).is_zero_poly());
      }
    }
  }
}

TEST_CASE("normal form is linear and idempotent") {
  const std::uint32_t p = 10007;
  Ring r = grevlex_ring({"x", "y", "z"});
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MPoly<Fp>> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_fp_mpoly(rng, r, p, 3, 3));
    auto gb = buchberger(gens, r.vars, r.ord);
    MPoly<Fp> f = random_fp_mpoly(rng, r, p, 4, 5);
    MPoly<Fp> h = random_fp_mpoly(rng, r, p, 4, 5);
    MPoly<Fp> nf = normal_form(f, gb.gens);
    MPoly<Fp> nh = normal_form(h, gb.gens);
    REQUIRE(normal_form(f + h, gb.gens) == nf + nh);
    REQUIRE(normal_form(nf, gb.gens) == nf);
    if (!gb.gens.empty()) {
      MPoly<Fp> shifted = f + random_fp_mpoly(rng, r, p, 2, 2) * gb.gens[0];
      REQUIRE(normal_form(shifted, gb.gens) == nf);
    }
  }
}

TEST_CASE("saturation, frozen cases") {
  Ring r = grevlex_ring({"x", "y"});
  auto to_strings = [&](const std::vector<MPoly<Rat>>& v) {
    std::vector<std::string> s;
    for (auto& f : v) s.push_back(to_canonical_string(f));
    std::sort(s.begin(), s.end());
    return s;
  };
  auto s1 = saturate<Rat>({pp("x*y", r)}, pp("y", r), r.vars, r.ord);
  REQUIRE(to_strings(s1) == std::vector<std::string>{"x"});
  auto s2 = saturate<Rat>({pp("x^2", r)}, pp("x", r), r.vars, r.ord);
  REQUIRE(to_strings(s2) == std::vector<std::string>{"1"});
  auto s3 = saturate<Rat>({pp("x^2*y", r), pp("x*y^2", r)}, pp("y", r), r.vars, r.ord);
  REQUIRE(to_strings(s3) == std::vector<std::string>{"x"});
  auto s4 = saturate_many<Rat>({pp("x^2*y^2", r)}, {pp("x", r), pp("y", r)}, r.vars, r.ord);
  REQUIRE(to_strings(s4) == std::vector<std::string>{"1"});
}

TEST_CASE("saturation property: multiples fall back into the ideal") {
  const std::uint32_t p = 101;
  Ring r = grevlex_ring({"x", "y", "z"});
  Rng rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<MPoly<Fp>> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(random_fp_mpoly(rng, r, p, 2, 3));
    MPoly<Fp> h = random_fp_mpoly(rng, r, p, 1, 2);
    if (h.is_zero_poly()) continue;
    auto gb = buchberger(gens, r.vars, r.ord);
    GroebnerStats st;
    auto sat = saturate(gens, h, r.vars, r.ord, &st);
    for (auto& g : sat) {
      MPoly<Fp> acc = g;
      bool found = false;
      for (int m = 0; m <= 20; ++m) {
        if (normal_form(acc, gb.gens).is_zero_poly()) {
          found = true;
          break;
        }
        acc = acc * h;
      }
      REQUIRE(found);
    }
    // containment: the ideal itself sits inside its saturation
    auto gbsat = buchberger(sat, r.vars, r.ord);
    for (auto& f : gens) REQUIRE(normal_form(f, gbsat.gens).is_zero_poly());
  }
}

TEST_CASE("elimination matches coordinate projection") {
  const std::uint32_t p = 13;
  Ring r = lex_ring({"x", "y"});
  Fp one(1, p);
  std::vector<std::vector<Fp>> pts = {{Fp(1, p), Fp(2, p)}, {Fp(3, p), Fp(5, p)}, {Fp(7, p), Fp(2, p)}};
  auto gens = vanishing_ideal(r, pts);
  auto gb = buchberger(gens, r.vars, r.ord);
  auto el = elimination_ideal(gb, {0, 1});
  REQUIRE(el.size() == 1);
  // projection of the points to the y axis is {2, 5}
  MPoly<Fp> expect = (MPoly<Fp>::var(r.vars, r.ord, 1, 1, one) -
                      MPoly<Fp>::constant(r.vars, r.ord, Fp(2, p))) *
                     (MPoly<Fp>::var(r.vars, r.ord, 1, 1, one) -
                      MPoly<Fp>::constant(r.vars, r.ord, Fp(5, p)));
  REQUIRE(el[0] == expect);

  Ring g3 = grevlex_ring({"x", "y"});
  REQUIRE_THROWS_AS(elimination_ideal(buchberger<Rat>({parse_poly("x", g3.vars, g3.ord)}, g3.vars, g3.ord),
                                      std::vector<char>{0, 1}),
                    Error);
}

TEST_CASE("multiplication matrices realize evaluation at the variety") {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.below(3));
    std::uint32_t p = n == 1 ? 97 : (n == 2 ? 31 : 7);
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v) names.push_back(std::string(1, static_cast<char>('x' + v)));
    Ring r = grevlex_ring(names);
    Fp one(1, p);

    std::size_t npts = 1 + rng.below(n == 3 ? 5 : 8);
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::vector<Fp>> pts;
    while (pts.size() < npts) {
      std::vector<Fp> pt;
      std::vector<std::uint32_t> key;
      for (int v = 0; v < n; ++v) {
        Fp c(static_cast<std::int64_t>(rng.below(p)), p);
        pt.push_back(c);
        key.push_back(c.v);
      }
      if (seen.insert(key).second) pts.push_back(pt);
    }

    auto gens = vanishing_ideal(r, pts);
    auto gb = buchberger(gens, r.vars, r.ord);
    auto qb = is_zero_dim(gb);
    REQUIRE(qb.has_value());
    REQUIRE(qb->dim() == pts.size());

    // exhaustive variety scan agrees with the construction
    std::vector<std::uint32_t> cur(static_cast<std::size_t>(n), 0);
    std::size_t hits = 0;
    for (;;) {
      std::vector<Fp> pt;
      for (int v = 0; v < n; ++v) pt.emplace_back(static_cast<std::int64_t>(cur[static_cast<std::size_t>(v)]), p);
      if (vanishes_at(gb.gens, pt)) {
        ++hits;
        std::vector<std::uint32_t> key;
        for (auto& c : pt) key.push_back(c.v);
        REQUIRE(seen.count(key) == 1);
      }
      int v = 0;
      for (; v < n; ++v) {
        if (++cur[static_cast<std::size_t>(v)] < p) break;
        cur[static_cast<std::size_t>(v)] = 0;
      }
      if (v == n) break;
    }
    REQUIRE(hits == pts.size());

    MPoly<Fp> f = random_fp_mpoly(rng, r, p, 2, 4);
    Matrix<Fp> mf = mult_matrix(gb, *qb, f);
    UPoly<Fp> chi = char_poly(mf, one);
    UPoly<Fp> expect = UPoly<Fp>::constant(one);
    for (auto& pt : pts) {
      UPoly<Fp> lin;
      lin.set(1, one);
      lin.set(0, Fp() - mpoly_eval(f, pt));
      expect = expect * lin;
    }
    REQUIRE(chi.deg() == expect.deg());
    for (int i = 0; i <= chi.deg(); ++i)
      REQUIRE(chi[static_cast<std::size_t>(i)] == expect[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("staircase quotient basis, frozen") {
  Ring r = lex_ring({"x", "y"});
  auto gb = buchberger<Rat>({pp("x^2 - 1", r), pp("y - x", r)}, r.vars, r.ord);
  auto qb = is_zero_dim(gb);
  REQUIRE(qb.has_value());
  REQUIRE(qb->dim() == 2);
  REQUIRE(qb->monomials[0].e == std::vector<std::uint16_t>{0, 0});
  REQUIRE(qb->monomials[1].e == std::vector<std::uint16_t>{0, 1});

  auto unit_gb = buchberger<Rat>({pp("1", r)}, r.vars, r.ord);
  auto unit_qb = is_zero_dim(unit_gb);
  REQUIRE(unit_qb.has_value());
  REQUIRE(unit_qb->dim() == 0);

  auto line = buchberger<Rat>({pp("x", r)}, r.vars, r.ord);
  REQUIRE(!is_zero_dim(line).has_value());
}

TEST_CASE("multiplication matrix, frozen") {
  Ring r = lex_ring({"x", "y"});
  auto gb = buchberger<Rat>({pp("x^2 - 1", r), pp("y - x", r)}, r.vars, r.ord);
  auto qb = is_zero_dim(gb);
  REQUIRE(qb.has_value());

  Matrix<Rat> my = mult_matrix(gb, *qb, pp("y", r));
  REQUIRE(my.at(0, 0) == 0);
  REQUIRE(my.at(0, 1) == 1);
  REQUIRE(my.at(1, 0) == 1);
  REQUIRE(my.at(1, 1) == 0);
  UPoly<Rat> chi = char_poly(my, Rat(1));
  REQUIRE(to_string(chi, "T") == "T^2 - 1");

  Matrix<Rat> mone = mult_matrix(gb, *qb, pp("1", r));
  REQUIRE(mone.at(0, 0) == 1);
  REQUIRE(mone.at(0, 1) == 0);
  REQUIRE(mone.at(1, 0) == 0);
  REQUIRE(mone.at(1, 1) == 1);

  Matrix<Rat> mzero = mult_matrix(gb, *qb, pp("x - y", r));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) REQUIRE(mzero.at(i, j) == 0);
}

TEST_CASE("quotient arithmetic over a rational function field") {
  const std::uint32_t p = 101;
  using KF = RatFn<Fp>;
  KF one(UPoly<Fp>::constant(Fp(1, p)));
  KF z0(UPoly<Fp>::monomial(1, Fp(1, p)));  // the coefficient-field parameter

  Ring r = grevlex_ring({"x", "u", "z1"});
  VarsPtr vars = r.vars;
  OrderPtr ord = r.ord;
  auto v = [&](int idx) { return MPoly<KF>::var(vars, ord, idx, 1, one); };
  MPoly<KF> g1 = v(0) - v(2);
  MPoly<KF> g2 = v(1) - v(2);
  MPoly<KF> g3 = v(2) * v(2) - MPoly<KF>::constant(vars, ord, z0);

  auto gb = buchberger<KF>({g1, g2, g3}, vars, ord);
  auto qb = is_zero_dim(gb);
  REQUIRE(qb.has_value());
  REQUIRE(qb->dim() == 2);

  Matrix<KF> m = mult_matrix(gb, *qb, v(2));
  UPoly<KF> chi = char_poly(m, one);
  REQUIRE(chi.deg() == 2);
  REQUIRE(chi[2] == one);
  REQUIRE(is_zero(chi[1]));
  REQUIRE(chi[0] == -z0);
}

TEST_CASE("statistics are collected") {
  Ring r = grevlex_ring({"x", "y", "z"});
  auto gb = buchberger<Rat>({pp("x^2 + y*z - 1", r), pp("y^2 - x*z", r), pp("z^2 + x*y + 2", r)},
                       r.vars, r.ord);
  REQUIRE(gb.stats.pairs_processed > 0);
  REQUIRE(gb.stats.d_cp > 0);
  REQUIRE(gb.stats.max_reducers > 0);
}
