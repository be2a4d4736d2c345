#ifndef CATALIX_DDE_HPP
#define CATALIX_DDE_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "catalix/parse.hpp"
#include "catalix/series.hpp"

namespace catalix {

// A discrete differential equation of order k with one catalytic variable u
// specialized at u = a. Fixed-point form gives F = f(u) + t*Q(F, D1F, ...,
// DkF, t, u) where Di is the i-th divided difference at a; polynomial form
// hands over P(x, z0..z(k-1), t, u) directly.
struct DdeSpec {
  enum class Mode { FixedPoint, PolynomialForm };

  std::string name;
  int k = 0;
  Rat a;
  Mode mode = Mode::FixedPoint;

  // FixedPoint: ring x, y1..yk, t, u
  VarsPtr qvars;
  OrderPtr qord;
  MPoly<Rat> f, q;

  // PolynomialForm input, and build_p output: ring x, z0..z(k-1), t, u
  VarsPtr pvars;
  OrderPtr pord;
  MPoly<Rat> p_given;

  // index helpers, valid in both rings (slot i swaps y(i+1) for z(i))
  int ix() const { return 0; }
  int iy(int i) const { return i; }      // y_i, 1-based
  int iz(int j) const { return 1 + j; }  // z_j, 0-based
  int it() const { return k + 1; }
  int iu() const { return k + 2; }
};

inline std::string z_name(int j) { return "z" + std::to_string(j); }

inline void init_dde_rings(DdeSpec& s) {
  std::vector<std::string> qn{"x"}, pn{"x"};
  for (int i = 1; i <= s.k; ++i) qn.push_back("y" + std::to_string(i));
  for (int j = 0; j < s.k; ++j) pn.push_back(z_name(j));
  for (auto* v : {&qn, &pn}) {
    v->push_back("t");
    v->push_back("u");
  }
  s.qvars = make_vars(qn);
  s.qord = make_order(MonomialOrder::grevlex(static_cast<int>(qn.size())));
  s.pvars = make_vars(pn);
  s.pord = make_order(MonomialOrder::grevlex(static_cast<int>(pn.size())));
}

// --- file parsing ----------------------------------------------------------
// Line-oriented statements `key: value` (or `key = value`), also separable by
// ';'. '#' starts a comment. Keys: name, order, point, f, Q, P.

namespace detail {

struct RawStmt {
  std::string key, value;
  int key_line = 1, key_col = 1;
  int val_line = 1, val_col = 1;
};

inline std::vector<RawStmt> split_statements(std::string text) {
  // blank out comments, preserving positions
  bool in_comment = false;
  for (auto& ch : text) {
    if (ch == '#') in_comment = true;
    if (ch == '\n') in_comment = false;
    if (in_comment && ch != '\n') ch = ' ';
  }
  std::vector<RawStmt> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto skip_ws = [&]() {
    while (i < text.size() &&
           (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n' ||
            text[i] == ';')) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
      ++i;
    }
  };
  skip_ws();
  while (i < text.size()) {
    RawStmt st;
    st.key_line = line;
    st.key_col = col;
    if (!std::isalpha(static_cast<unsigned char>(text[i])) && text[i] != '_')
      throw ParseError(std::string("expected a key, found '") + text[i] + "'", line, col);
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
      st.key += text[i];
      ++col;
      ++i;
    }
    // optional separator
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++col, ++i;
    if (i < text.size() && (text[i] == ':' || text[i] == '=')) ++col, ++i;
    // value runs to end of line or ';'
    st.val_line = line;
    st.val_col = col;
    while (i < text.size() && text[i] != '\n' && text[i] != ';') {
      st.value += text[i];
      ++col;
      ++i;
    }
    out.push_back(std::move(st));
    skip_ws();
  }
  return out;
}

inline Rat parse_rational(const std::string& text, int line, int col) {
  auto novars = make_vars({});
  auto noord = make_order(MonomialOrder::lex(0));
  MPoly<Rat> c = parse_poly(text, novars, noord, line, col);
  return c.constant_term();
}

inline long parse_positive_int(const std::string& text, int line, int col) {
  Rat r = parse_rational(text, line, col);
  if (r.get_den() != 1 || sgn(r) <= 0 || r.get_num() > 64)
    throw ParseError("order must be a positive integer (at most 64)", line, col);
  return r.get_num().get_si();
}

}  // namespace detail

inline DdeSpec parse_dde(const std::string& text, const std::string& fallback_name = "") {
  auto stmts = detail::split_statements(text);
  std::optional<detail::RawStmt> v_name, v_order, v_point, v_f, v_q, v_p;
  for (auto& st : stmts) {
    std::optional<detail::RawStmt>* slot = nullptr;
    if (st.key == "name") slot = &v_name;
    else if (st.key == "order") slot = &v_order;
    else if (st.key == "point") slot = &v_point;
    else if (st.key == "f") slot = &v_f;
    else if (st.key == "Q") slot = &v_q;
    else if (st.key == "P") slot = &v_p;
    else
      throw ParseError("unknown key '" + st.key + "'", st.key_line, st.key_col);
    if (slot->has_value())
      throw ParseError("duplicate key '" + st.key + "'", st.key_line, st.key_col);
    *slot = st;
  }

  DdeSpec s;
  if (v_name) {
    std::string n = v_name->value;
    while (!n.empty() && (n.back() == ' ' || n.back() == '\t')) n.pop_back();
    std::size_t b = n.find_first_not_of(" \t");
    s.name = b == std::string::npos ? "" : n.substr(b);
  }
  if (s.name.empty()) s.name = fallback_name;

  if (!v_order) throw ParseError("missing 'order'", 1, 1);
  s.k = static_cast<int>(
      detail::parse_positive_int(v_order->value, v_order->val_line, v_order->val_col));

  s.a = Rat(1);
  if (v_point) s.a = detail::parse_rational(v_point->value, v_point->val_line, v_point->val_col);

  init_dde_rings(s);

  bool fixed = v_f.has_value() || v_q.has_value();
  bool polyform = v_p.has_value();
  if (fixed && polyform)
    throw ParseError("give either f and Q, or P, not both", v_p->key_line, v_p->key_col);
  if (!fixed && !polyform) throw ParseError("missing equation: need f and Q, or P", 1, 1);

  if (fixed) {
    if (!v_f) throw ParseError("missing 'f'", v_q->key_line, v_q->key_col);
    if (!v_q) throw ParseError("missing 'Q'", v_f->key_line, v_f->key_col);
    s.mode = DdeSpec::Mode::FixedPoint;
    s.f = parse_poly(v_f->value, s.qvars, s.qord, v_f->val_line, v_f->val_col);
    for (std::size_t v = 0; v < s.qvars->size(); ++v)
      if (static_cast<int>(v) != s.iu() && s.f.uses(static_cast<int>(v)))
        throw ParseError("f may involve u only", v_f->val_line, v_f->val_col);
    s.q = parse_poly(v_q->value, s.qvars, s.qord, v_q->val_line, v_q->val_col);
  } else {
    s.mode = DdeSpec::Mode::PolynomialForm;
    s.p_given = parse_poly(v_p->value, s.pvars, s.pord, v_p->val_line, v_p->val_col);
    if (s.p_given.is_zero_poly())
      throw ParseError("P must be nonzero", v_p->val_line, v_p->val_col);
    if (!s.p_given.uses(s.ix()))
      throw ParseError("P must involve x", v_p->val_line, v_p->val_col);
  }
  return s;
}

inline DdeSpec parse_dde_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto pos = stem.find_last_of('/'); pos != std::string::npos) stem = stem.substr(pos + 1);
  if (auto pos = stem.rfind(".dde"); pos != std::string::npos) stem = stem.substr(0, pos);
  return parse_dde(buf.str(), stem);
}

// --- P construction ---------------------------------------------------------
// P := (u-a)^W (x - f - t Q(x, D1, ..., Dk, t, u)) with the symbolic divided
// differences Di = (x - sum_{j<i} z_j/j! (u-a)^j)/(u-a)^i, W large enough to
// clear every denominator, and the (u-a)-content removed afterwards. The z_j
// slot stands for the j-th u-derivative of F(t,a), hence the 1/j! factors.

// weight of a Q-monomial: sum i*deg_{y_i}
inline unsigned q_monomial_weight(const DdeSpec& s, const Monomial& m) {
  unsigned w = 0;
  for (int i = 1; i <= s.k; ++i) w += static_cast<unsigned>(i) * m.e[s.iy(i)];
  return w;
}

inline MPoly<Rat> build_p(const DdeSpec& s) {
  if (s.mode != DdeSpec::Mode::FixedPoint)
    throw Error("build_p requires fixed-point form");
  const VarsPtr& pv = s.pvars;
  const OrderPtr& po = s.pord;
  MPoly<Rat> x = MPoly<Rat>::var(pv, po, s.ix(), 1, Rat(1));
  MPoly<Rat> tvar = MPoly<Rat>::var(pv, po, s.it(), 1, Rat(1));
  MPoly<Rat> uvar = MPoly<Rat>::var(pv, po, s.iu(), 1, Rat(1));
  MPoly<Rat> U = uvar - MPoly<Rat>::constant(pv, po, s.a);

  unsigned W = static_cast<unsigned>(s.k);
  for (auto& t : s.q.ts) W = std::max(W, q_monomial_weight(s, t.first));

  // numerators N_i = x - sum_{j<i} z_j/j! (u-a)^j of the divided differences
  std::vector<MPoly<Rat>> num(static_cast<std::size_t>(s.k) + 1,
                              MPoly<Rat>::zero(pv, po));
  {
    MPoly<Rat> upow = MPoly<Rat>::constant(pv, po, Rat(1));
    MPoly<Rat> partial = x;
    Rat fact(1);  // (i-1)! entering iteration i
    for (int i = 1; i <= s.k; ++i) {
      partial = partial -
                (Rat(1) / fact) * (MPoly<Rat>::var(pv, po, s.iz(i - 1), 1, Rat(1)) * upow);
      num[static_cast<std::size_t>(i)] = partial;
      upow = upow * U;
      fact *= Rat(i);
    }
  }

  std::vector<MPoly<Rat>> upows(W + 1, MPoly<Rat>::constant(pv, po, Rat(1)));
  for (unsigned e = 1; e <= W; ++e) upows[e] = upows[e - 1] * U;

  MPoly<Rat> qw = MPoly<Rat>::zero(pv, po);
  for (auto& term : s.q.ts) {
    unsigned w = q_monomial_weight(s, term.first);
    MPoly<Rat> piece = MPoly<Rat>::constant(pv, po, term.second);
    if (term.first.e[s.ix()]) piece = piece * x.pow(term.first.e[s.ix()]);
    for (int i = 1; i <= s.k; ++i)
      if (term.first.e[s.iy(i)])
        piece = piece * num[static_cast<std::size_t>(i)].pow(term.first.e[s.iy(i)]);
    if (term.first.e[s.it()]) piece = piece * tvar.pow(term.first.e[s.it()]);
    if (term.first.e[s.iu()]) piece = piece * uvar.pow(term.first.e[s.iu()]);
    piece = piece * upows[W - w];
    qw = qw + piece;
  }

  MPoly<Rat> f_p = s.f.is_zero_poly()
                       ? MPoly<Rat>::zero(pv, po)
                       : transport(s.f, pv, po);
  MPoly<Rat> raw = upows[W] * (x - f_p) - tvar * qw;
  return remove_factor(raw, U).second;
}

inline MPoly<Rat> get_p(const DdeSpec& s) {
  return s.mode == DdeSpec::Mode::FixedPoint ? build_p(s) : s.p_given;
}

// --- Hypothesis H1 -----------------------------------------------------------

struct H1Report {
  bool degree_ok = false;
  int degree = -1;  // deg_u of d/dx P at t=0
  bool derivative_known = false;
  bool derivative_ok = false;
  Rat derivative_value;
};

// Taylor coefficients f^{(i)}(a)/i! for i = 0..k
inline std::vector<Rat> taylor_at(const MPoly<Rat>& f, int uvar, const Rat& a, int k) {
  UPoly<Rat> fu = f.is_zero_poly() ? UPoly<Rat>() : to_upoly(f, uvar);
  std::vector<Rat> out;
  Rat fact(1);
  for (int i = 0; i <= k; ++i) {
    if (i > 0) fact *= Rat(i);
    out.push_back(fu.eval(a) / fact);
    fu = fu.derivative();
  }
  return out;
}

inline H1Report check_h1(const DdeSpec& s) {
  H1Report rep;
  MPoly<Rat> p = get_p(s);
  MPoly<Rat> px = p.derive(s.ix());
  std::vector<std::optional<Rat>> bind_t(s.pvars->size());
  bind_t[s.it()] = Rat(0);
  rep.degree = subst_consts(px, bind_t).deg_in(s.iu());
  rep.degree_ok = rep.degree >= s.k;

  if (s.mode == DdeSpec::Mode::FixedPoint) {
    rep.derivative_known = true;
    auto taylor = taylor_at(s.f, s.iu(), s.a, s.k);
    MPoly<Rat> dq = s.q.derive(s.iy(s.k));
    std::vector<std::optional<Rat>> bind(s.qvars->size());
    bind[s.ix()] = taylor[0];
    for (int i = 1; i <= s.k; ++i) bind[s.iy(i)] = taylor[static_cast<std::size_t>(i)];
    bind[s.it()] = Rat(0);
    bind[s.iu()] = s.a;
    rep.derivative_value = subst_consts(dq, bind).constant_term();
    rep.derivative_ok = !is_zero(rep.derivative_value);
  }
  return rep;
}

// --- series expansion ---------------------------------------------------------

// One fixed-point pass over an arbitrary coefficient field.
template <class K>
TSeries<K> dde_rhs(const DdeSpec& s, const MPoly<K>& f, const MPoly<K>& q, const K& a,
                   const TSeries<K>& cur) {
  std::size_t sigma = cur.sigma();
  K one = of_int(1, a);
  UPoly<K> fu = f.is_zero_poly() ? UPoly<K>() : to_upoly(f, s.iu());
  std::vector<TSeries<K>> args(s.qvars->size(), TSeries<K>(sigma));
  args[static_cast<std::size_t>(s.ix())] = cur;
  TSeries<K> d = cur;
  for (int i = 1; i <= s.k; ++i) {
    d = divided_difference(d, a);
    args[static_cast<std::size_t>(s.iy(i))] = d;
  }
  args[static_cast<std::size_t>(s.it())] = TSeries<K>::t_gen(sigma, one);
  args[static_cast<std::size_t>(s.iu())] =
      TSeries<K>::constant_poly(sigma, UPoly<K>::monomial(1, one));
  TSeries<K> qval = eval_mpoly_series(q, args, sigma);
  return TSeries<K>::constant_poly(sigma, fu) + qval.shifted();
}

template <class K>
TSeries<K> expand_series_with(const DdeSpec& s, const MPoly<K>& f, const MPoly<K>& q,
                              const K& a, std::size_t sigma) {
  if (s.mode != DdeSpec::Mode::FixedPoint)
    throw Error("series expansion requires fixed-point form");
  if (sigma < 1) throw Error("sigma must be at least 1");
  UPoly<K> fu = f.is_zero_poly() ? UPoly<K>() : to_upoly(f, s.iu());
  TSeries<K> cur = TSeries<K>::constant_poly(sigma, fu);
  for (std::size_t n = 1; n < sigma; ++n) cur = dde_rhs(s, f, q, a, cur);
  return cur;
}

inline TSeries<Rat> expand_series(const DdeSpec& s, std::size_t sigma) {
  return expand_series_with<Rat>(s, s.f, s.q, s.a, sigma);
}

// Modular image of the expansion; nullopt when p divides a denominator in the
// input data (an unlucky prime).
inline std::optional<TSeries<Fp>> expand_series_mod(const DdeSpec& s, std::size_t sigma,
                                                    std::uint32_t p) {
  auto fp = mpoly_mod_p(s.f, p);
  auto qp = mpoly_mod_p(s.q, p);
  auto ap = fp_of(s.a, p);
  if (!fp || !qp || !ap) return std::nullopt;
  return expand_series_with<Fp>(s, *fp, *qp, *ap, sigma);
}

}  // namespace catalix

#endif
