#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "catalix/guess.hpp"

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

std::vector<Rat> series_at_a(const DdeSpec& s, std::size_t sigma) {
  return specialize_series(expand_series(s, sigma), s.a);
}

const char* kCubicText =
    "81*t^2*z0^3 - 9*t*(9*t - 2)*z0^2 + (27*t^2 - 66*t + 1)*z0 - 3*t^2 + 47*t - 1";

}  // namespace

TEST_CASE("guess: catalan annihilator, frozen") {
  GuessProblem pb;
  pb.series = {Rat(1), Rat(1), Rat(2), Rat(5), Rat(14), Rat(42), Rat(132), Rat(429)};
  pb.deg_t_max = 1;
  pb.deg_z0_max = 2;
  Rng rng(7);
  auto r = guess_algebraic(pb, rng);
  REQUIRE(r.has_value());
  REQUIRE(to_canonical_string(*r) == "t*z0^2 - z0 + 1");
}

TEST_CASE("guess: constant series") {
  GuessProblem pb;
  pb.series = {Rat(1), Rat(0), Rat(0)};
  pb.deg_t_max = 0;
  pb.deg_z0_max = 1;
  Rng rng(8);
  auto r = guess_algebraic(pb, rng);
  REQUIRE(r.has_value());
  REQUIRE(to_canonical_string(*r) == "z0 - 1");
}

TEST_CASE("guess: 3-constellation cubic, frozen") {
  DdeSpec s = parse_dde(kThreeConst);
  GuessProblem pb;
  pb.series = series_at_a(s, 12);
  pb.deg_t_max = 2;
  pb.deg_z0_max = 3;
  Rng rng(9);
  auto r = guess_algebraic(pb, rng);
  REQUIRE(r.has_value());
  AnnRing ring = ann_ring();
  MPoly<Rat> cubic = parse_poly(kCubicText, ring.vars, ring.ord);
  REQUIRE(to_canonical_string(*r) == to_canonical_string(cubic));
  // the frozen constant itself annihilates the series
  REQUIRE(residual_valuation(annihilator_residual(cubic, pb.series)) == -1);
}

TEST_CASE("guess: insufficient precision is an error") {
  GuessProblem pb;
  pb.series = {Rat(1), Rat(1), Rat(2)};
  pb.deg_t_max = 2;
  pb.deg_z0_max = 2;
  Rng rng(10);
  bool threw = false;
  try {
    guess_algebraic(pb, rng);
  } catch (const Error& e) {
    threw = true;
    REQUIRE(std::string(e.what()).find("insufficient precision") != std::string::npos);
  }
  REQUIRE(threw);
}

TEST_CASE("guess: FAIL agrees with a rational brute force") {
  Rng rng(11);
  AnnRing ring = ann_ring();
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t sigma = 8;
    std::vector<Rat> s;
    for (std::size_t i = 0; i < sigma; ++i) s.emplace_back(rng.in(-3, 3));
    GuessProblem pb;
    pb.series = s;
    pb.deg_t_max = 1;
    pb.deg_z0_max = 1;

    // dense rational nullspace of the same truncation constraints
    std::vector<std::vector<Rat>> pw(2, std::vector<Rat>(sigma, Rat(0)));
    pw[0][0] = Rat(1);
    for (std::size_t n = 0; n < sigma; ++n) pw[1][n] = s[n];
    Matrix<Rat> a(sigma, 4);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t n = i; n < sigma; ++n) a.at(n, j * 2 + i) = pw[j][n - i];
    bool exact_has = !nullspace(a, Rat(1)).empty();

    Rng grng(100 + static_cast<std::uint64_t>(trial));
    auto r = guess_algebraic(pb, grng);
    REQUIRE(r.has_value() == exact_has);
    if (r) REQUIRE(residual_valuation(annihilator_residual(*r, s)) == -1);
  }
}

TEST_CASE("guess: minimal caps divide larger caps") {
  Rng rng(12);
  // catalan
  GuessProblem small;
  small.series = {Rat(1),   Rat(1),   Rat(2),    Rat(5),    Rat(14),   Rat(42),
                  Rat(132), Rat(429), Rat(1430), Rat(4862), Rat(16796), Rat(58786),
                  Rat(208012), Rat(742900), Rat(2674440), Rat(9694845)};
  small.deg_t_max = 1;
  small.deg_z0_max = 2;
  auto r1 = guess_algebraic(small, rng);
  REQUIRE(r1.has_value());
  GuessProblem big = small;
  big.deg_t_max = 2;
  big.deg_z0_max = 4;
  auto r2 = guess_algebraic(big, rng);
  REQUIRE(r2.has_value());
  int iz0 = 1, it = 0;
  auto u1 = over_ratfn(*r1, iz0, it);
  auto u2 = over_ratfn(*r2, iz0, it);
  REQUIRE((u2 % u1).zero());

  // 3-constellations
  DdeSpec s = parse_dde(kThreeConst);
  GuessProblem c1;
  c1.series = series_at_a(s, 20);
  c1.deg_t_max = 2;
  c1.deg_z0_max = 3;
  auto rc1 = guess_algebraic(c1, rng);
  REQUIRE(rc1.has_value());
  GuessProblem c2 = c1;
  c2.deg_t_max = 3;
  c2.deg_z0_max = 4;
  auto rc2 = guess_algebraic(c2, rng);
  REQUIRE(rc2.has_value());
  auto v1 = over_ratfn(*rc1, iz0, it);
  auto v2 = over_ratfn(*rc2, iz0, it);
  REQUIRE((v2 % v1).zero());
}

TEST_CASE("normalize_annihilator canonical form") {
  AnnRing ring = ann_ring();
  MPoly<Rat> f = parse_poly("12*(z0 - t)^2", ring.vars, ring.ord);
  REQUIRE(to_canonical_string(normalize_annihilator(f)) == "z0 - t");
  MPoly<Rat> g = parse_poly("-z0 + t", ring.vars, ring.ord);
  REQUIRE(to_canonical_string(normalize_annihilator(g)) == "z0 - t");
  MPoly<Rat> h = parse_poly("2/3*t^2 - 4/3*t", ring.vars, ring.ord);
  REQUIRE(to_canonical_string(normalize_annihilator(h)) == "t^2 - 2*t");
}

TEST_CASE("bound_b, frozen") {
  DdeSpec d2 = parse_dde("order: 1\npoint: 0\nP: x^2 + u\n");
  REQUIRE(bound_b(d2) == 2);
  DdeSpec d3 = parse_dde("order: 1\npoint: 0\nP: x^3 + u\n");
  REQUIRE(bound_b(d3) == 12);
  DdeSpec d4 = parse_dde("order: 2\npoint: 0\nP: x^4 + z0\n");
  REQUIRE(bound_b(d4) == 648);
}

TEST_CASE("certify: probe mode on catalan") {
  DdeSpec s = parse_dde(kCatalan);
  AnnRing ring = ann_ring();
  MPoly<Rat> r = parse_poly("t*z0^2 - z0 + 1", ring.vars, ring.ord);

  Certificate good = certify(r, s, CertifyMode::probe(1, 2));
  REQUIRE(good.order_checked == 4);
  REQUIRE(good.status == "certified");

  MPoly<Rat> wrong = parse_poly("z0 - 2", ring.vars, ring.ord);
  Certificate bad = certify(wrong, s, CertifyMode::probe(1, 2));
  REQUIRE(bad.order_checked == 1);
  REQUIRE(bad.status == "refuted");
  REQUIRE(bad.valuation == 0);

  Certificate below = certify_at(r, s, 2, 4, "probe(1,2)");
  REQUIRE(below.status == "inconclusive");
  Certificate at = certify_at(r, s, 4, 4, "probe(1,2)");
  REQUIRE(at.status == "certified");
}

TEST_CASE("certify: 3-constellation cubic") {
  DdeSpec s = parse_dde(kThreeConst);
  AnnRing ring = ann_ring();
  MPoly<Rat> cubic = parse_poly(kCubicText, ring.vars, ring.ord);
  Certificate c = certify(cubic, s, CertifyMode::probe(2, 3));
  REQUIRE(c.order_checked == 2 * 3 + 2 * 3);
  REQUIRE(c.status == "certified");
}

TEST_CASE("certify: bound mode") {
  DdeSpec s = parse_dde(kCatalan);
  AnnRing ring = ann_ring();
  MPoly<Rat> r = parse_poly("t*z0^2 - z0 + 1", ring.vars, ring.ord);
  Int b = bound_b(s);
  Certificate c = certify(r, s, CertifyMode::bound(b));
  REQUIRE(c.status == "certified");
  REQUIRE(c.order_checked == b.get_si() * 3);
  REQUIRE(c.bound_used == cat("b=", b.get_str()));
}
