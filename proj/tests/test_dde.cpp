#include <catch2/catch_amalgamated.hpp>

#include "catalix/dde.hpp"

using namespace catalix;

namespace {

const char* kThreeConst =
    "name: 3-constellations\n"
    "order: 2\n"
    "point: 1\n"
    "f: 1\n"
    "Q: u*(3*x - (u-1)*y1)*y1 + u*x^3 + u*y2\n";

const char* kCatalan =
    "order: 1\n"
    "point: 1\n"
    "f: 1\n"
    "Q: u*x^2\n";

const char* kTutte =
    "order: 1\n"
    "point: 1\n"
    "f: 1\n"
    "Q: u^2*x^2 + u*x + u*y1\n";

std::vector<Rat> series_at_a(const DdeSpec& s, std::size_t sigma) {
  return specialize_series(expand_series(s, sigma), s.a);
}

// z_j slots take the j-th u-derivative of F at u=a, exactly as build_p's
// contract states; the residual must vanish identically mod t^sigma.
TSeries<Rat> p_residual(const DdeSpec& s, const MPoly<Rat>& p, const TSeries<Rat>& f) {
  std::size_t sigma = f.sigma();
  std::vector<TSeries<Rat>> args(s.pvars->size(), TSeries<Rat>(sigma));
  args[static_cast<std::size_t>(s.ix())] = f;
  TSeries<Rat> d = f;
  for (int j = 0; j < s.k; ++j) {
    std::vector<Rat> vals = specialize_series(d, s.a);
    TSeries<Rat> z(sigma);
    for (std::size_t n = 0; n < sigma; ++n) z.c[n] = UPoly<Rat>::constant(vals[n]);
    args[static_cast<std::size_t>(s.iz(j))] = z;
    d = derive_u(d);
  }
  args[static_cast<std::size_t>(s.it())] = TSeries<Rat>::t_gen(sigma, Rat(1));
  args[static_cast<std::size_t>(s.iu())] =
      TSeries<Rat>::constant_poly(sigma, UPoly<Rat>::monomial(1, Rat(1)));
  return eval_mpoly_series(p, args, sigma);
}

}  // namespace

TEST_CASE("parse_dde: canonical and terse forms") {
  DdeSpec s = parse_dde(kThreeConst);
  CHECK(s.name == "3-constellations");
  CHECK(s.k == 2);
  CHECK(s.a == Rat(1));
  CHECK(s.mode == DdeSpec::Mode::FixedPoint);
  CHECK(s.qvars->names == std::vector<std::string>{"x", "y1", "y2", "t", "u"});
  CHECK(s.pvars->names == std::vector<std::string>{"x", "z0", "z1", "t", "u"});
  CHECK(s.f == MPoly<Rat>::constant(s.qvars, s.qord, Rat(1)));
  CHECK(s.q.deg_in(s.ix()) == 3);

  DdeSpec terse = parse_dde("order 1; point 1; f = 1; Q = x^2*u", "terse");
  CHECK(terse.k == 1);
  CHECK(terse.a == Rat(1));
  CHECK(terse.name == "terse");
  CHECK(terse.q == parse_poly("u*x^2", terse.qvars, terse.qord));

  DdeSpec pf = parse_dde("order: 1\nP: u*(x-u) - t*(x-z0)\npoint: 0\n");
  CHECK(pf.mode == DdeSpec::Mode::PolynomialForm);
  CHECK(pf.p_given.uses(pf.ix()));

  // a defaults to 1, comments and blank lines are ignored
  DdeSpec def = parse_dde("# comment\norder: 1\n\nf: 1  # trailing\nQ: x\n");
  CHECK(def.a == Rat(1));
}

TEST_CASE("parse_dde: malformed inputs") {
  CHECK_THROWS_AS(parse_dde("order: 1\nf: 1\nQ: x +\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("f: 1\nQ: x\n"), ParseError);            // missing order
  CHECK_THROWS_AS(parse_dde("order: 0\nf: 1\nQ: x\n"), ParseError);  // k <= 0
  CHECK_THROWS_AS(parse_dde("order: -2\nf: 1\nQ: x\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("order: 1\npoint: u\nf: 1\nQ: x\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("order: 1\nritual: 3\nf: 1\nQ: x\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("order: 1\norder: 2\nf: 1\nQ: x\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("order: 1\nf: 1\n"), ParseError);  // Q missing
  CHECK_THROWS_AS(parse_dde("order: 1\nf: 1\nQ: x\nP: x\n"), ParseError);
  CHECK_THROWS_AS(parse_dde("order: 1\nf: y1\nQ: x\n"), ParseError);  // f in u only
  CHECK_THROWS_AS(parse_dde("order: 1\nf: 1\nQ: y2\n"), ParseError);  // y2 needs k>=2
  CHECK_THROWS_AS(parse_dde("order: 1\nP: z0 - 1\n"), ParseError);    // P without x
  CHECK_THROWS_AS(parse_dde("order: 1\nP: 0\n"), ParseError);
  try {
    parse_dde("order: 1\nf: 1\nQ: x +\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("build_p: frozen small cases") {
  // no divided differences: the (u-a) factor cancels entirely
  DdeSpec s1 = parse_dde("order: 1\npoint: 1\nf: 1\nQ: x\n");
  MPoly<Rat> p1 = build_p(s1);
  CHECK(p1 == parse_poly("x - 1 - t*x", s1.pvars, s1.pord));

  // one divided difference at a = 0
  DdeSpec s2 = parse_dde("order: 1\npoint: 0\nf: u\nQ: y1\n");
  MPoly<Rat> p2 = build_p(s2);
  CHECK(p2 == parse_poly("u*(x-u) - t*(x-z0)", s2.pvars, s2.pord));

  // weight above k: Q = y1^2 forces W = 2
  DdeSpec s3 = parse_dde("order: 1\npoint: 0\nf: 1\nQ: y1^2\n");
  MPoly<Rat> p3 = build_p(s3);
  CHECK(p3 == parse_poly("u^2*(x-1) - t*(x-z0)^2", s3.pvars, s3.pord));

  // the catalytic factor hides inside Q's coefficients and cancels:
  // F = 1 + t*u*F*F(t,1) has Q = u*x^2 - u*(u-1)*x*y1
  DdeSpec s4 = parse_dde("order: 1\npoint: 1\nf: 1\nQ: u*x^2 - u*(u-1)*x*y1\n");
  MPoly<Rat> p4 = build_p(s4);
  CHECK(p4 == parse_poly("x - 1 - t*u*x*z0", s4.pvars, s4.pord));
}

TEST_CASE("build_p: 3-constellations shape") {
  DdeSpec s = parse_dde(kThreeConst);
  MPoly<Rat> p = build_p(s);
  CHECK(p.deg_in(s.ix()) == 3);
  // the u*x^3 term of Q enters multiplied by (u-1)^2
  auto cx = coeffs_in(p, s.ix());
  REQUIRE(cx.size() == 4);
  CHECK(cx[3] == parse_poly("-t*u*(u-1)^2", s.pvars, s.pord));
  // z1 appears with the 1/1! normalization, so P stays integer here
  for (auto& t : p.ts) CHECK(t.second.get_den() == 1);
}

TEST_CASE("check_h1: frozen verdicts") {
  H1Report r3 = check_h1(parse_dde(kThreeConst));
  CHECK(r3.degree_ok);
  CHECK(r3.degree == 2);
  CHECK(r3.derivative_known);
  CHECK(r3.derivative_ok);
  CHECK(r3.derivative_value == Rat(1));

  H1Report rc = check_h1(parse_dde(kCatalan));
  CHECK_FALSE(rc.degree_ok);
  CHECK(rc.degree == 0);

  // the hidden-cancellation variant also fails the degree test
  H1Report rh = check_h1(parse_dde("order: 1\npoint: 1\nf: 1\nQ: u*x^2 - u*(u-1)*x*y1\n"));
  CHECK_FALSE(rh.degree_ok);
  CHECK(rh.degree == 0);

  // f = u^k, Q = y_k at a = 0: derivative value exactly 1
  H1Report rt = check_h1(parse_dde("order: 2\npoint: 0\nf: u^2\nQ: y2\n"));
  CHECK(rt.derivative_known);
  CHECK(rt.derivative_ok);
  CHECK(rt.derivative_value == Rat(1));
  CHECK(rt.degree_ok);

  H1Report rp = check_h1(parse_dde("order: 1\nP: u*(x-u) - t*(x-z0)\npoint: 0\n"));
  CHECK_FALSE(rp.derivative_known);
  CHECK(rp.degree_ok);

  H1Report ru = check_h1(parse_dde(kTutte));
  CHECK(ru.degree_ok);
  CHECK(ru.derivative_ok);
}

TEST_CASE("expand_series: reference series") {
  DdeSpec s3 = parse_dde(kThreeConst);
  auto v3 = series_at_a(s3, 5);
  CHECK(v3 == std::vector<Rat>{1, 1, 6, 54, 594});

  DdeSpec sc = parse_dde(kCatalan);
  auto vc = series_at_a(sc, 6);
  CHECK(vc == std::vector<Rat>{1, 1, 2, 5, 14, 42});

  DdeSpec st = parse_dde(kTutte);
  auto vt = series_at_a(st, 6);
  CHECK(vt == std::vector<Rat>{1, 2, 9, 54, 378, 2916});

  DdeSpec sq = parse_dde("order: 1\npoint: 1\nf: u\nQ: 0\n");
  auto vq = series_at_a(sq, 4);
  CHECK(vq == std::vector<Rat>{1, 0, 0, 0});

  CHECK_THROWS_AS(expand_series(parse_dde("order: 1\nP: x - t*z0\n"), 3), Error);
}

TEST_CASE("expand_series: fixed-point stability and modular image") {
  DdeSpec s = parse_dde(kThreeConst);
  TSeries<Rat> f8 = expand_series(s, 8);
  TSeries<Rat> f12 = expand_series(s, 12);
  for (std::size_t n = 0; n < 8; ++n) CHECK(f8.c[n] == f12.c[n]);

  std::uint32_t p = 1000003;
  auto fp = expand_series_mod(s, 8, p);
  REQUIRE(fp.has_value());
  for (std::size_t n = 0; n < 8; ++n) {
    auto want = mpoly_mod_p(from_upoly(f8.c[n], s.pvars, s.pord, s.iu()), p);
    REQUIRE(want.has_value());
    CHECK(from_upoly(fp->c[n], s.pvars, s.pord, s.iu()) ==
          *mpoly_mod_p(from_upoly(f8.c[n], s.pvars, s.pord, s.iu()), p));
  }
}

TEST_CASE("divided differences") {
  // F = u^2, constant in t
  TSeries<Rat> f(3);
  f.c[0] = UPoly<Rat>({Rat(0), Rat(0), Rat(1)});
  auto d1 = divided_difference(f, Rat(1), 1);
  CHECK(d1.c[0] == UPoly<Rat>({Rat(1), Rat(1)}));
  CHECK(d1.c[1].zero());
  auto d2 = divided_difference(f, Rat(1), 2);
  CHECK(d2.c[0] == UPoly<Rat>::constant(Rat(1)));

  // defining identity on random truncations
  Rng rng(140688);
  for (int it = 0; it < 30; ++it) {
    TSeries<Rat> g(4);
    for (auto& c : g.c) {
      std::vector<Rat> cs;
      for (int i = 0; i <= static_cast<int>(rng.below(4)); ++i)
        cs.emplace_back(static_cast<long>(rng.in(-5, 5)));
      c = UPoly<Rat>(cs);
    }
    Rat a(static_cast<long>(rng.in(-3, 3)));
    auto d = divided_difference(g, a);
    UPoly<Rat> lin({-a, Rat(1)});
    for (std::size_t n = 0; n < g.sigma(); ++n)
      CHECK(lin * d.c[n] + UPoly<Rat>::constant(g.c[n].eval(a)) == g.c[n]);
  }
}

TEST_CASE("specialize_series basics") {
  TSeries<Rat> f(2);
  f.c[0] = UPoly<Rat>::constant(Rat(1));
  f.c[1] = UPoly<Rat>({Rat(1), Rat(1)});
  auto v = specialize_series(f, Rat(1));
  CHECK(v == std::vector<Rat>{1, 2});
}

TEST_CASE("defining-equation residual vanishes") {
  for (const char* text : {kThreeConst, kCatalan, kTutte,
                           "order: 1\npoint: 0\nf: 1\nQ: y1^2\n",
                           "order: 2\npoint: 0\nf: u^2\nQ: y2 + u*x*y1\n"}) {
    DdeSpec s = parse_dde(text);
    MPoly<Rat> p = build_p(s);
    std::size_t sigma = 12;
    TSeries<Rat> f = expand_series(s, sigma);
    CHECK(p_residual(s, p, f).is_zero_series());
  }
  // the flagship case at higher order
  DdeSpec s = parse_dde(kThreeConst);
  TSeries<Rat> f = expand_series(s, 20);
  CHECK(p_residual(s, build_p(s), f).is_zero_series());
}
