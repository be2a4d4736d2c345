#ifndef CATALIX_PARSE_HPP
#define CATALIX_PARSE_HPP

#include <cctype>
#include <string>
#include <vector>

#include "catalix/mpoly.hpp"

namespace catalix {

// Recursive-descent parser for polynomial expressions over a fixed variable
// table: + - * parentheses, ^ with a literal nonnegative integer exponent,
// and / whose divisor must reduce to a nonzero rational constant.

namespace detail {

struct Token {
  enum Kind { Num, Ident, Op, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

inline std::vector<Token> tokenize_expr(const std::string& s, int line0 = 1, int col0 = 1) {
  std::vector<Token> out;
  int line = line0, col = col0;
  std::size_t i = 0;
  auto advance = [&](char ch) {
    if (ch == '\n') ++line, col = 1;
    else ++col;
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(ch);
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      t.kind = Token::Num;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        t.text += s[i];
        advance(s[i]);
        ++i;
      }
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Token::Ident;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        t.text += s[i];
        advance(s[i]);
        ++i;
      }
    } else if (std::string("+-*/^()").find(ch) != std::string::npos) {
      t.kind = Token::Op;
      t.text = std::string(1, ch);
      advance(ch);
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class ExprParser {
 public:
  ExprParser(VarsPtr vars, OrderPtr ord, std::vector<Token> toks)
      : vars_(std::move(vars)), ord_(std::move(ord)), toks_(std::move(toks)) {}

  MPoly<Rat> parse() {
    MPoly<Rat> e = expr();
    if (cur().kind != Token::End)
      throw ParseError("unexpected trailing input '" + cur().text + "'", cur().line, cur().col);
    return e;
  }

 private:
  VarsPtr vars_;
  OrderPtr ord_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool eat_op(const char* op) {
    if (cur().kind == Token::Op && cur().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly<Rat> expr() {
    MPoly<Rat> acc;
    bool neg = false;
    if (eat_op("-"))
      neg = true;
    else
      eat_op("+");
    acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat_op("+"))
        acc = acc + term();
      else if (eat_op("-"))
        acc = acc - term();
      else
        return acc;
    }
  }

  MPoly<Rat> term() {
    MPoly<Rat> acc = power();
    for (;;) {
      if (eat_op("*")) {
        acc = acc * power();
      } else if (cur().kind == Token::Op && cur().text == "/") {
        Token slash = cur();
        ++pos_;
        MPoly<Rat> d = power();
        if (d.is_zero_poly() || d.total_deg() > 0)
          throw ParseError("division only by a nonzero rational constant", slash.line,
                           slash.col);
        acc = (Rat(1) / d.constant_term()) * acc;
      } else {
        return acc;
      }
    }
  }

  MPoly<Rat> power() {
    MPoly<Rat> base = atom();
    if (cur().kind == Token::Op && cur().text == "^") {
      Token caret = cur();
      ++pos_;
      if (cur().kind != Token::Num)
        throw ParseError("exponent must be a nonnegative integer literal", caret.line,
                         caret.col);
      unsigned long e = 0;
      try {
        e = std::stoul(cur().text);
      } catch (...) {
        throw ParseError("exponent out of range", cur().line, cur().col);
      }
      if (e > 0xffff) throw ParseError("exponent out of range", cur().line, cur().col);
      ++pos_;
      if (base.is_zero_poly() && e == 0)
        throw ParseError("0^0 is undefined", caret.line, caret.col);
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  MPoly<Rat> atom() {
    const Token& t = cur();
    if (t.kind == Token::Num) {
      ++pos_;
      return MPoly<Rat>::constant(vars_, ord_, Rat(t.text));
    }
    if (t.kind == Token::Ident) {
      int v = vars_->index(t.text);
      if (v < 0) throw ParseError("unknown variable " + t.text, t.line, t.col);
      ++pos_;
      return MPoly<Rat>::var(vars_, ord_, v, 1, Rat(1));
    }
    if (t.kind == Token::Op && t.text == "(") {
      ++pos_;
      MPoly<Rat> e = expr();
      if (!eat_op(")"))
        throw ParseError("expected ')'", cur().line, cur().col);
      return e;
    }
    if (t.kind == Token::Op && t.text == "-") {
      ++pos_;
      return -power();
    }
    throw ParseError("expected a term, found '" + (t.kind == Token::End ? "end of input" : t.text) + "'",
                     t.line, t.col);
  }
};

}  // namespace detail

inline MPoly<Rat> parse_poly(const std::string& text, VarsPtr vars, OrderPtr ord,
                             int line0 = 1, int col0 = 1) {
  detail::ExprParser p(vars, ord, detail::tokenize_expr(text, line0, col0));
  return p.parse();
}

}  // namespace catalix

#endif
