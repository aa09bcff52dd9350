// Recursive-descent parser for the function DSL.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number | 'x'<index> | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// name is one of max, min, abs, sin, cos, exp, log, sqr, sqrt, pow; the
// second argument of pow is a non-negative integer literal.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "dsub/error.hpp"
#include "dsub/expr.hpp"

namespace dsub {
namespace {

enum class Tok { number, ident, lparen, rparen, comma, plus, minus, star, slash, caret, end };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      std::string text(s.substr(start, i - start));
      char* endp = nullptr;
      const double v = std::strtod(text.c_str(), &endp);
      if (endp != text.c_str() + text.size())
        throw Error(Errc::parse, "malformed number '" + text + "' at position " + std::to_string(start), start);
      out.push_back({Tok::number, start, std::move(text), v});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ',': k = Tok::comma; break;
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      default:
        throw Error(Errc::parse,
                    std::string("unexpected character '") + c + "' at position " + std::to_string(i), i);
    }
    out.push_back({k, i, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::end, s.size(), ""});
  return out;
}

// Returns the 1-based index of a variable token, 0 if the identifier is not
// of the form x<digits>.
std::size_t var_index(const std::string& id) {
  if (id.size() < 2 || id[0] != 'x') return 0;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), v);
  if (ec != std::errc{} || p != id.data() + id.size()) return 0;
  return v;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t arity) : toks_(std::move(toks)), arity_(arity) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse, msg + " at position " + std::to_string(peek().pos), peek().pos);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  Expr expr() {
    Expr e = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const bool plus = next().kind == Tok::plus;
      Expr r = term();
      e = plus ? e + r : e - r;
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const bool mul = next().kind == Tok::star;
      Expr r = unary();
      e = mul ? e * r : e / r;
    }
    return e;
  }

  Expr unary() {
    if (peek().kind == Tok::minus) {
      ++pos_;
      Expr e = unary();
      if (e.kind() == NodeKind::constant) return Expr::constant(-e.node().value, arity_);
      return -e;
    }
    if (peek().kind == Tok::plus) {
      ++pos_;
      return unary();
    }
    return power();
  }

  int integer_literal() {
    const Token& t = peek();
    if (t.kind != Tok::number || t.text.find_first_of(".eE") != std::string::npos)
      fail("expected a non-negative integer exponent");
    ++pos_;
    return std::stoi(t.text);
  }

  Expr power() {
    Expr e = primary();
    if (peek().kind == Tok::caret) {
      ++pos_;
      e = Expr::pow(std::move(e), integer_literal());
    }
    return e;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number:
        ++pos_;
        return Expr::constant(t.number, arity_);
      case Tok::lparen: {
        ++pos_;
        Expr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: return identifier();
      default: fail(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  Expr identifier() {
    const Token t = next();
    if (std::size_t v = var_index(t.text); v > 0) {
      if (v > arity_)
        throw Error(Errc::arity_mismatch,
                    "variable " + t.text + " exceeds arity " + std::to_string(arity_) +
                        " at position " + std::to_string(t.pos),
                    t.pos);
      return Expr::var(v - 1, arity_);
    }
    static const std::pair<const char*, Smooth> smooth[] = {
        {"sin", Smooth::sin}, {"cos", Smooth::cos}, {"exp", Smooth::exp},
        {"log", Smooth::log}, {"sqr", Smooth::sqr}, {"sqrt", Smooth::sqrt}};
    const bool known = t.text == "max" || t.text == "min" || t.text == "abs" || t.text == "pow" ||
                       std::any_of(std::begin(smooth), std::end(smooth),
                                   [&](const auto& p) { return t.text == p.first; });
    if (!known)
      throw Error(Errc::unknown_identifier,
                  "unknown identifier '" + t.text + "' at position " + std::to_string(t.pos), t.pos);
    expect(Tok::lparen, "'(' after function name");

    if (t.text == "pow") {
      Expr base = expr();
      expect(Tok::comma, "',' in pow");
      const int k = integer_literal();
      expect(Tok::rparen, "')'");
      return Expr::pow(std::move(base), k);
    }

    std::vector<Expr> args{expr()};
    while (peek().kind == Tok::comma) {
      ++pos_;
      args.push_back(expr());
    }
    expect(Tok::rparen, "')'");

    auto arg_count = [&](bool ok, const char* need) {
      if (!ok)
        throw Error(Errc::arity_mismatch,
                    t.text + " expects " + need + " argument(s) at position " + std::to_string(t.pos), t.pos);
    };
    if (t.text == "max" || t.text == "min") {
      arg_count(args.size() >= 2, "at least 2");
      return t.text == "max" ? Expr::max(std::move(args)) : Expr::min(std::move(args));
    }
    arg_count(args.size() == 1, "1");
    if (t.text == "abs") return Expr::abs(std::move(args[0]));
    for (const auto& [name, fn] : smooth)
      if (t.text == name) return Expr::unary(fn, std::move(args[0]));
    fail("unreachable");
  }

  std::vector<Token> toks_;
  std::size_t arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::size_t arity) {
  auto toks = tokenize(text);
  if (arity == 0) {
    for (const auto& t : toks)
      if (t.kind == Tok::ident) arity = std::max(arity, var_index(t.text));
    if (arity == 0) arity = 1;
  }
  return Parser(std::move(toks), arity).parse_all();
}

}  // namespace dsub
