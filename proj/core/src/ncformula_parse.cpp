#include <cctype>

#include "ncrank/ncformula.hpp"

namespace ncrank {

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '/') {
        ++i;
        std::size_t den = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == den) throw SyntaxError("expected denominator digits", i);
      }
      out.push_back({Tok::Num, s.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({k, std::string(1, c), i});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(lex(s)) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
    ++i_;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = take().kind == Tok::Minus;
      ExprPtr r = term();
      e = minus ? sub(e, r) : add(e, r);
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (peek().kind == Tok::Star) {
      take();
      e = mul(e, unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      if (peek().kind == Tok::Num) return number(take(), true);
      return neg(unary());
    }
    return primary();
  }

  ExprPtr number(const Token& t, bool negative) {
    mpq_class q;
    if (q.set_str(t.text, 10) != 0) throw SyntaxError("bad number '" + t.text + "'", t.pos);
    if (q.get_den() == 0) throw SyntaxError("zero denominator", t.pos);
    q.canonicalize();
    return constant(negative ? mpq_class(-q) : q);
  }

  ExprPtr primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::Num:
        return number(t, false);
      case Tok::LParen: {
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        if (t.text == "inv" || t.text == "comm") {
          expect(Tok::LParen, "'(' after function name");
          ExprPtr a = expr();
          if (t.text == "inv") {
            expect(Tok::RParen, "')'");
            return inv(a);
          }
          expect(Tok::Comma, "','");
          ExprPtr b = expr();
          expect(Tok::RParen, "')'");
          return comm(a, b);
        }
        return var(t.text);
      default:
        throw SyntaxError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'",
                          t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

}  // namespace ncrank
