#ifndef CATALIX_VARS_HPP
#define CATALIX_VARS_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "catalix/common.hpp"

namespace catalix {

// Append-only variable table. Derived rings extend the name list, so indices
// of existing variables never move.
struct VarTable {
  std::vector<std::string> names;

  int index(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }
  int require(const std::string& n) const {
    int i = index(n);
    if (i < 0) throw Error("unknown variable " + n);
    return i;
  }
  std::size_t size() const { return names.size(); }
};

using VarsPtr = std::shared_ptr<const VarTable>;

inline VarsPtr make_vars(std::vector<std::string> names) {
  auto t = std::make_shared<VarTable>();
  t->names = std::move(names);
  return t;
}

inline VarsPtr extend_vars(const VarsPtr& base, const std::vector<std::string>& extra) {
  auto t = std::make_shared<VarTable>();
  t->names = base->names;
  for (auto& n : extra) {
    if (t->index(n) >= 0) throw Error("variable " + n + " already present");
    t->names.push_back(n);
  }
  return t;
}

// Exponent vector with cached total degree. Exponents are 16-bit; additions
// are overflow-checked.
struct Monomial {
  std::vector<std::uint16_t> e;
  std::uint32_t deg = 0;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e(nvars, 0) {}

  static Monomial var(std::size_t nvars, int idx, unsigned exp = 1) {
    Monomial m(nvars);
    m.e[idx] = static_cast<std::uint16_t>(exp);
    m.deg = exp;
    return m;
  }

  bool is_one() const { return deg == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
      std::uint32_t s = static_cast<std::uint32_t>(r.e[i]) + b.e[i];
      if (s > 0xffff) throw Error("monomial exponent overflow");
      r.e[i] = static_cast<std::uint16_t>(s);
    }
    r.deg = a.deg + b.deg;
    return r;
  }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }

  // o / this, assuming divisibility
  Monomial quotient_of(const Monomial& o) const {
    Monomial r = o;
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= e[i];
    r.deg = o.deg - deg;
    return r;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    r.deg = 0;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
      r.e[i] = std::max(a.e[i], b.e[i]);
      r.deg += r.e[i];
    }
    return r;
  }

  bool coprime(const Monomial& o) const {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] && o.e[i]) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

// Term order given as a sequence of blocks, each lex or graded-reverse-lex
// over its variable list (most significant variable first). Blocks are
// compared left to right, so a leading block forms an elimination order for
// its variables.
class MonomialOrder {
 public:
  enum class Kind { Lex, GrevLex };
  struct Block {
    Kind kind;
    std::vector<int> vars;
  };
  std::vector<Block> blocks;

  static MonomialOrder lex(int nvars) {
    MonomialOrder o;
    Block b{Kind::Lex, {}};
    for (int i = 0; i < nvars; ++i) b.vars.push_back(i);
    o.blocks.push_back(std::move(b));
    return o;
  }
  static MonomialOrder lex_ranked(std::vector<int> most_significant_first) {
    MonomialOrder o;
    o.blocks.push_back({Kind::Lex, std::move(most_significant_first)});
    return o;
  }
  static MonomialOrder grevlex(int nvars) {
    MonomialOrder o;
    Block b{Kind::GrevLex, {}};
    for (int i = 0; i < nvars; ++i) b.vars.push_back(i);
    o.blocks.push_back(std::move(b));
    return o;
  }
  static MonomialOrder grevlex_ranked(std::vector<int> most_significant_first) {
    MonomialOrder o;
    o.blocks.push_back({Kind::GrevLex, std::move(most_significant_first)});
    return o;
  }

  // Elimination order: `front` variables dominate (as one grevlex block),
  // then this order with the front variables dropped.
  MonomialOrder with_front(const std::vector<int>& front) const {
    MonomialOrder o;
    o.blocks.push_back({Kind::GrevLex, front});
    for (auto& b : blocks) {
      Block nb{b.kind, {}};
      for (int v : b.vars)
        if (std::find(front.begin(), front.end(), v) == front.end()) nb.vars.push_back(v);
      if (!nb.vars.empty()) o.blocks.push_back(std::move(nb));
    }
    return o;
  }

  // -1, 0, +1 for a < b, a == b, a > b
  int cmp(const Monomial& a, const Monomial& b) const {
    for (auto& blk : blocks) {
      if (blk.kind == Kind::Lex) {
        for (int v : blk.vars) {
          if (a.e[v] != b.e[v]) return a.e[v] > b.e[v] ? 1 : -1;
        }
      } else {
        std::uint32_t da = 0, db = 0;
        for (int v : blk.vars) {
          da += a.e[v];
          db += b.e[v];
        }
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = blk.vars.size(); i-- > 0;) {
          int v = blk.vars[i];
          if (a.e[v] != b.e[v]) return a.e[v] < b.e[v] ? 1 : -1;
        }
      }
    }
    return 0;
  }

  // True when monomials in `keep` variables only are always smaller than any
  // monomial involving a variable outside `keep`. The complement of `keep`
  // must precede every keep variable; a grevlex block cannot mix the two.
  bool eliminates(const std::vector<char>& keep) const {
    bool seen_keep = false;
    for (auto& blk : blocks) {
      if (blk.kind == Kind::GrevLex) {
        bool has_keep = false, has_drop = false;
        for (int v : blk.vars) (keep[v] ? has_keep : has_drop) = true;
        if (has_keep && has_drop) return false;
        if (has_drop && seen_keep) return false;
        if (has_keep) seen_keep = true;
      } else {
        for (int v : blk.vars) {
          if (keep[v])
            seen_keep = true;
          else if (seen_keep)
            return false;
        }
      }
    }
    return true;
  }
};

using OrderPtr = std::shared_ptr<const MonomialOrder>;

inline OrderPtr make_order(MonomialOrder o) { return std::make_shared<MonomialOrder>(std::move(o)); }

}  // namespace catalix

#endif
