#ifndef CATALIX_NUMERIC_HPP
#define CATALIX_NUMERIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "catalix/common.hpp"

namespace catalix {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_zero(const Rat& a) { return sgn(a) == 0; }
inline Rat unit(const Rat&) { return Rat(1); }
inline Rat of_int(long n, const Rat&) { return Rat(n); }
inline std::string to_string(const Rat& a) { return a.get_str(); }

inline Int pow_int(Int b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// ---------------------------------------------------------------------------
// Prime field element. The modulus travels with the value; p == 0 marks the
// zero of an unspecified field (what default construction gives), which mixes
// with any modulus. Moduli are capped below 2^31 so products fit in 64 bits.

struct Fp {
  std::uint32_t v = 0;
  std::uint32_t p = 0;

  Fp() = default;
  Fp(std::int64_t val, std::uint32_t mod) : p(mod) {
    std::int64_t m = val % static_cast<std::int64_t>(mod);
    if (m < 0) m += mod;
    v = static_cast<std::uint32_t>(m);
  }
  static Fp zero(std::uint32_t mod) { return Fp(0, mod); }

  std::uint32_t merged(const Fp& o) const {
    if (p == 0) return o.p;
    if (o.p != 0 && o.p != p) throw Error("mixed moduli in Fp arithmetic");
    return p;
  }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint32_t m = a.merged(b);
    if (m == 0) return Fp();
    std::uint64_t s = static_cast<std::uint64_t>(a.v) + b.v;
    if (s >= m) s -= m;
    return Fp(static_cast<std::int64_t>(s), m);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint32_t m = a.merged(b);
    if (m == 0) return Fp();
    std::uint64_t s = static_cast<std::uint64_t>(a.v) + m - b.v;
    if (s >= m) s -= m;
    return Fp(static_cast<std::int64_t>(s), m);
  }
  friend Fp operator-(const Fp& a) {
    if (a.p == 0 || a.v == 0) return Fp(0, a.p ? a.p : 0);
    return Fp(static_cast<std::int64_t>(a.p - a.v), a.p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint32_t m = a.merged(b);
    if (m == 0) return Fp();
    return Fp(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.v) * b.v % m), m);
  }
  Fp inv() const {
    if (p == 0 || v == 0) throw Error("division by zero in Fp");
    std::int64_t a = v, m = p, x0 = 1, x1 = 0;
    std::int64_t b = m;
    while (b != 0) {
      std::int64_t q = a / b;
      a -= q * b;
      std::swap(a, b);
      x0 -= q * x1;
      std::swap(x0, x1);
    }
    if (a != 1) throw Error("non-invertible element in Fp");
    return Fp(x0, p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }
  friend bool operator==(const Fp& a, const Fp& b) {
    a.merged(b);
    return a.v == b.v;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
  Fp pow(std::uint64_t e) const {
    Fp r(1, p ? p : 2), b = *this;
    if (p == 0) throw Error("pow on unattached Fp");
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
};

inline bool is_zero(const Fp& a) { return a.v == 0; }
inline Fp unit(const Fp& sample) {
  if (sample.p == 0) throw Error("unit() needs an attached Fp sample");
  return Fp(1, sample.p);
}
inline Fp of_int(long n, const Fp& sample) {
  if (sample.p == 0) throw Error("of_int() needs an attached Fp sample");
  return Fp(n, sample.p);
}
inline std::string to_string(const Fp& a) { return std::to_string(a.v); }

// Rational -> F_p image; fails when p divides the denominator.
inline std::optional<Fp> fp_of(const Rat& a, std::uint32_t p) {
  Int num = a.get_num(), den = a.get_den();
  std::uint32_t d = static_cast<std::uint32_t>(mpz_fdiv_ui(den.get_mpz_t(), p));
  if (d == 0) return std::nullopt;
  std::uint32_t n = static_cast<std::uint32_t>(mpz_fdiv_ui(num.get_mpz_t(), p));
  return Fp(n, p) / Fp(d, p);
}

// ---------------------------------------------------------------------------
// Primality and prime sampling.

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  auto mulmod = [&](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    a %= n;
    while (e) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Random prime in (2^27, 2^31).
inline std::uint32_t random_prime(Rng& rng, std::uint32_t lo = (1u << 27) + 1,
                                  std::uint32_t hi = 0x7fffffffu) {
  for (;;) {
    std::uint64_t c = lo + rng.below(hi - lo);
    c |= 1;
    if (c > hi) continue;
    if (is_prime_u64(c)) return static_cast<std::uint32_t>(c);
  }
}

// ---------------------------------------------------------------------------
// Chinese remaindering.

struct CrtAccumulator {
  Int modulus = 1;
  Int value = 0;  // canonical representative in [0, modulus)

  void add(std::uint64_t p, std::uint64_t r) {
    Int pz(static_cast<unsigned long>(p));
    Int g;
    mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
    if (g != 1) throw Error("non-coprime moduli in CRT");
    // value' = value + modulus * ((r - value) / modulus mod p)
    std::uint64_t vp = mpz_fdiv_ui(value.get_mpz_t(), p);
    std::uint64_t mp = mpz_fdiv_ui(modulus.get_mpz_t(), p);
    Fp delta = (Fp(static_cast<std::int64_t>(r % p), static_cast<std::uint32_t>(p)) -
                Fp(static_cast<std::int64_t>(vp), static_cast<std::uint32_t>(p))) /
               Fp(static_cast<std::int64_t>(mp), static_cast<std::uint32_t>(p));
    value += modulus * Int(static_cast<unsigned long>(delta.v));
    modulus *= pz;
  }
};

inline std::pair<Int, Int> crt_combine(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& prs) {
  CrtAccumulator acc;
  for (auto& [p, r] : prs) acc.add(p, r);
  return {acc.value, acc.modulus};
}

// ---------------------------------------------------------------------------
// Balanced rational reconstruction: find a/b with |a|, b <= sqrt(M/2),
// a == v*b (mod M), gcd(b, M) = 1. Half-extended Euclid.

inline std::optional<Rat> rational_reconstruct(Int v, const Int& M) {
  if (M <= 1) return std::nullopt;
  v %= M;
  if (v < 0) v += M;
  Int bound;
  mpz_sqrt(bound.get_mpz_t(), Int((M - 1) / 2).get_mpz_t());
  if (bound < 1) bound = 1;
  Int r0 = M, r1 = v, t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  Int a = r1, b = t1;
  if (b == 0) return std::nullopt;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b > bound || a > bound || -a > bound) return std::nullopt;
  Int g;
  mpz_gcd(g.get_mpz_t(), b.get_mpz_t(), M.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) {
    a /= g;
    b /= g;
  }
  Rat res(a, b);
  res.canonicalize();
  return res;
}

}  // namespace catalix

#endif
