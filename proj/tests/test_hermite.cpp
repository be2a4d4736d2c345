#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "catalix/hermite.hpp"
#include "catalix/numeric.hpp"
#include "catalix/parse.hpp"

using namespace catalix;

namespace {

struct Ring {
  VarsPtr vars;
  OrderPtr ord;
};

Ring one_var_ring(const std::string& name) {
  Ring r;
  r.vars = make_vars({name});
  r.ord = make_order(MonomialOrder::grevlex(1));
  return r;
}

// wrap numeric coefficients a_0..a_d as constant polynomials of a dummy ring
std::vector<MPoly<Rat>> lift(const UPoly<Rat>& g, const Ring& r) {
  std::vector<MPoly<Rat>> out;
  for (int i = 0; i <= g.deg(); ++i)
    out.push_back(MPoly<Rat>::constant(r.vars, r.ord, g[static_cast<std::size_t>(i)]));
  return out;
}

UPoly<Rat> random_rat_upoly(Rng& rng, int deg) {
  UPoly<Rat> g;
  for (int i = 0; i < deg; ++i) g.set(static_cast<std::size_t>(i), Rat(rng.in(-5, 5)));
  Rat lc(rng.in(1, 5));
  g.set(static_cast<std::size_t>(deg), lc);
  return g;
}

Rat rat_pow(const Rat& b, int e) {
  Rat r(1);
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

UPoly<Rat> linear_factor_product(Rng& rng, int nroots, int& distinct_out) {
  std::vector<long> roots;
  UPoly<Rat> g = UPoly<Rat>::constant(Rat(rng.in(1, 4)));
  for (int i = 0; i < nroots; ++i) {
    long root = rng.in(-4, 4);
    long mult = rng.in(1, 3);
    bool fresh = true;
    for (long r : roots)
      if (r == root) fresh = false;
    if (fresh) roots.push_back(root);
    UPoly<Rat> lin;
    lin.set(1, Rat(1));
    lin.set(0, Rat(-root));
    for (long m = 0; m < mult; ++m) g = g * lin;
  }
  distinct_out = static_cast<int>(roots.size());
  return g;
}

}  // namespace

TEST_CASE("power sums, frozen") {
  Ring r = one_var_ring("w");
  // (u - 1)(u - 2): power sums 2, 3, 5, 9, 17
  UPoly<Rat> g;
  g.set(0, Rat(2));
  g.set(1, Rat(-3));
  g.set(2, Rat(1));
  auto s = hermite_power_sums(lift(g, r), 4);
  std::vector<long> expect = {2, 3, 5, 9, 17};
  REQUIRE(s.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    REQUIRE(s[i].constant_term() == Rat(expect[i]));

  // non-monic scaling: 2u - 6 has S_m = 3^m * 2^m
  UPoly<Rat> h;
  h.set(0, Rat(-6));
  h.set(1, Rat(2));
  auto sh = hermite_power_sums(lift(h, r), 2);
  REQUIRE(sh[0].constant_term() == Rat(1));
  REQUIRE(sh[1].constant_term() == Rat(6));
  REQUIRE(sh[2].constant_term() == Rat(36));
}

TEST_CASE("rank counts distinct roots, frozen") {
  // (u - 1)^2 (u - 2) = u^3 - 4u^2 + 5u - 2
  UPoly<Rat> g;
  g.set(0, Rat(-2));
  g.set(1, Rat(5));
  g.set(2, Rat(-4));
  g.set(3, Rat(1));
  REQUIRE(hermite_rank(g) == 2);

  Ring r = one_var_ring("w");
  auto m2 = hermite_minors(lift(g, r), 2);
  REQUIRE(m2.size() == 9);
  REQUIRE(m2[0].rows == std::vector<int>{0, 1});
  REQUIRE(m2[0].cols == std::vector<int>{0, 1});
  REQUIRE(m2[0].lc_exponent == 2);
  REQUIRE(m2[0].numerator.constant_term() == Rat(2));
  bool some_nonzero = false;
  for (auto& mn : m2) some_nonzero = some_nonzero || !mn.numerator.is_zero_poly();
  REQUIRE(some_nonzero);

  auto m3 = hermite_minors(lift(g, r), 3);
  REQUIRE(m3.size() == 1);
  REQUIRE(m3[0].numerator.is_zero_poly());

  UPoly<Rat> c = UPoly<Rat>::constant(Rat(5));
  REQUIRE_THROWS_AS(hermite_rank(c), Error);
}

TEST_CASE("rank counts distinct roots, random") {
  Rng rng(45);
  int done = 0;
  while (done < 100) {
    UPoly<Rat> g;
    int oracle = -1;
    if (done % 2 == 0) {
      int deg = static_cast<int>(1 + rng.below(6));
      g = random_rat_upoly(rng, deg);
    } else {
      int nroots = static_cast<int>(1 + rng.below(3));
      g = linear_factor_product(rng, nroots, oracle);
    }
    if (g.deg() < 1) continue;
    if (oracle < 0) oracle = upoly_squarefree_part(g).deg();
    REQUIRE(hermite_rank(g) == oracle);
    ++done;
  }
}

TEST_CASE("rank over a prime field") {
  const std::uint32_t p = 10007;
  Rng rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    int deg = static_cast<int>(1 + rng.below(6));
    UPoly<Fp> g;
    for (int i = 0; i < deg; ++i)
      g.set(static_cast<std::size_t>(i), Fp(static_cast<std::int64_t>(rng.below(p)), p));
    g.set(static_cast<std::size_t>(deg), Fp(static_cast<std::int64_t>(1 + rng.below(p - 1)), p));
    REQUIRE(hermite_rank(g) == upoly_squarefree_part(g).deg());
  }
}

TEST_CASE("parametric minor detects the double root") {
  Ring r = one_var_ring("z1");
  // u^2 - z1
  std::vector<MPoly<Rat>> coeffs = {parse_poly("-z1", r.vars, r.ord),
                                    MPoly<Rat>::zero(r.vars, r.ord),
                                    parse_poly("1", r.vars, r.ord)};
  auto m1 = hermite_minors(coeffs, 1);
  REQUIRE(m1[0].numerator == parse_poly("2", r.vars, r.ord));
  REQUIRE(m1[0].lc_exponent == 0);
  auto m2 = hermite_minors(coeffs, 2);
  REQUIRE(m2.size() == 1);
  REQUIRE(m2[0].numerator == parse_poly("4*z1", r.vars, r.ord));
  REQUIRE(m2[0].lc_exponent == 2);
}

TEST_CASE("full minor matches the discriminant") {
  Rng rng(47);
  Ring r = one_var_ring("w");
  int done = 0;
  while (done < 30) {
    int deg = static_cast<int>(2 + rng.below(4));
    UPoly<Rat> g = random_rat_upoly(rng, deg);
    if (g.deg() != deg) continue;
    if (gcd(g, g.derivative()).deg() != 0) continue;
    auto full = hermite_minors(lift(g, r), deg);
    REQUIRE(full.size() == 1);
    Rat numer = full[0].numerator.constant_term();
    Rat res = upoly_resultant(g, g.derivative());
    Rat lcg = g.lc();
    int sign = (deg * (deg - 1) / 2) % 2 == 0 ? 1 : -1;
    Rat lhs = numer * lcg;
    Rat rhs = Rat(sign) * rat_pow(lcg, (deg - 1) * (deg - 2)) * res;
    REQUIRE(lhs == rhs);
    REQUIRE(!is_zero(numer));
    ++done;
  }
}

TEST_CASE("fraction-free determinant") {
  Ring r = one_var_ring("w");

  VarsPtr v4 = make_vars({"a", "b", "c", "d"});
  OrderPtr o4 = make_order(MonomialOrder::grevlex(4));
  auto sym = [&](const std::string& s) { return parse_poly(s, v4, o4); };
  std::vector<std::vector<MPoly<Rat>>> m2 = {{sym("a"), sym("b")}, {sym("c"), sym("d")}};
  REQUIRE(mpoly_det(m2, v4, o4) == sym("a*d - b*c"));

  std::vector<std::vector<MPoly<Rat>>> swp = {{sym("0"), sym("1")}, {sym("1"), sym("0")}};
  REQUIRE(mpoly_det(swp, v4, o4) == sym("-1"));

  std::vector<std::vector<MPoly<Rat>>> sing = {{sym("a"), sym("b")}, {sym("a"), sym("b")}};
  REQUIRE(mpoly_det(sing, v4, o4).is_zero_poly());

  Rng rng(48);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 3;
    std::vector<std::vector<MPoly<Rat>>> m(n);
    Matrix<Rat> plain(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rat c(rng.in(-9, 9));
        plain.at(i, j) = c;
        m[i].push_back(MPoly<Rat>::constant(r.vars, r.ord, c));
      }
    REQUIRE(mpoly_det(m, r.vars, r.ord).constant_term() == det(plain));
  }
}
