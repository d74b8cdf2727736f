#include "padic/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "padic/errors.hpp"

namespace padic {
namespace {

constexpr unsigned kMaxExponent = 4096;

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalpha(c) || c == '_') {
      const std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(c)) {
      const std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
    } else if (std::string_view("+-*^(),=[]").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), i});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

using Coeffs = std::vector<mpz_class>;

Coeffs poly_add(const Coeffs& a, const Coeffs& b, int sign) {
  Coeffs out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
  return out;
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  Coeffs out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

bool is_univariate_arith(const ExprNode& e) {
  using Op = ExprNode::Op;
  switch (e.op) {
    case Op::Var: return e.var == 1;
    case Op::Const: return true;
    case Op::Pow: return is_univariate_arith(*e.lhs);
    case Op::Add:
    case Op::Sub:
    case Op::Mul: return is_univariate_arith(*e.lhs) && is_univariate_arith(*e.rhs);
    default: return false;
  }
}

Coeffs expand(const ExprNode& e) {
  using Op = ExprNode::Op;
  switch (e.op) {
    case Op::Var: return {0, 1};
    case Op::Const: return {e.value};
    case Op::Add: return poly_add(expand(*e.lhs), expand(*e.rhs), 1);
    case Op::Sub: return poly_add(expand(*e.lhs), expand(*e.rhs), -1);
    case Op::Mul: return poly_mul(expand(*e.lhs), expand(*e.rhs));
    case Op::Pow: {
      Coeffs base = expand(*e.lhs);
      Coeffs acc{1};
      for (unsigned k = e.exponent; k > 0; k >>= 1) {
        if (k & 1) acc = poly_mul(acc, base);
        if (k > 1) base = poly_mul(base, base);
      }
      return acc;
    }
    default: throw DomainError("cannot expand bitwise expression into a polynomial");
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  FunctionSpec parse_all() {
    FunctionSpec f = spec();
    if (peek().kind != Tok::End) fail("trailing input '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  bool is_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }
  bool accept(char c) {
    if (!is_punct(c)) return false;
    ++at_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_ident(const char* word) {
    if (peek().kind != Tok::Ident || peek().text != word) fail(std::string("expected '") + word + "'");
    ++at_;
  }

  unsigned uint_value() {
    if (peek().kind != Tok::Number) fail("expected unsigned integer");
    const Token& t = next();
    if (t.text.size() > 9) throw ParseError("integer too large", t.pos);
    return static_cast<unsigned>(std::stoul(t.text));
  }

  mpz_class int_value() {
    const bool neg = accept('-');
    if (peek().kind != Tok::Number) fail("expected integer");
    mpz_class v(next().text);
    return neg ? mpz_class(-v) : v;
  }

  std::vector<mpz_class> int_list() {
    std::vector<mpz_class> out{int_value()};
    while (accept(',')) out.push_back(int_value());
    return out;
  }

  static bool is_ctor(const std::string& w) {
    return w == "closed_ergodic" || w == "perturb" || w == "bseries" || w == "mahler2" ||
           w == "compose" || w == "iterate" || w == "awrap";
  }

  FunctionSpec spec() {
    if (accept('[')) {
      std::vector<FunctionSpec> parts{spec()};
      while (accept(',')) parts.push_back(spec());
      expect(']');
      return FunctionSpec::tuple(std::move(parts));
    }
    if (peek().kind == Tok::Ident && is_ctor(peek().text)) return ctor();
    return lift(expr());
  }

  static FunctionSpec lift(const ExprPtr& e) {
    if (is_univariate_arith(*e)) return FunctionSpec::poly(expand(*e));
    return FunctionSpec::expr(e);
  }

  FunctionSpec ctor() {
    const std::string word = next().text;
    expect('(');
    FunctionSpec out = [&]() -> FunctionSpec {
      if (word == "closed_ergodic") return FunctionSpec::closed_ergodic(spec());
      if (word == "bseries") return FunctionSpec::bseries(int_list());
      if (word == "mahler2") return FunctionSpec::mahler2(int_list());
      if (word == "compose") {
        FunctionSpec outer = spec();
        expect(',');
        return FunctionSpec::compose(std::move(outer), spec());
      }
      if (word == "iterate") {
        FunctionSpec f = spec();
        expect(',');
        const std::size_t pos = peek().pos;
        const unsigned n = uint_value();
        if (n == 0) throw ParseError("iterate count must be at least 1", pos);
        return FunctionSpec::iterate(std::move(f), n);
      }
      if (word == "awrap") {
        const unsigned n = uint_value();
        expect(',');
        return FunctionSpec::awrap(n, spec());
      }
      // perturb(ell=U, r=U, u=spec)
      expect_ident("ell");
      expect('=');
      std::size_t pos = peek().pos;
      const unsigned ell = uint_value();
      if (ell == 0) throw ParseError("ell must be at least 1", pos);
      expect(',');
      expect_ident("r");
      expect('=');
      pos = peek().pos;
      const unsigned r = uint_value();
      if (r == 0) throw ParseError("r must be at least 1", pos);
      expect(',');
      expect_ident("u");
      expect('=');
      return FunctionSpec::perturbed(ell, r, spec());
    }();
    expect(')');
    return out;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (is_punct('+') || is_punct('-')) {
      const auto op = next().text[0] == '+' ? ExprNode::Op::Add : ExprNode::Op::Sub;
      lhs = ExprNode::binary(op, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (accept('*')) lhs = ExprNode::binary(ExprNode::Op::Mul, lhs, factor());
    return lhs;
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (accept('^')) {
      const std::size_t pos = peek().pos;
      const unsigned e = uint_value();
      if (e > kMaxExponent) throw ParseError("exponent above " + std::to_string(kMaxExponent), pos);
      base = ExprNode::power(base, e);
    }
    return base;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) return ExprNode::constant(mpz_class(next().text));
    if (is_punct('-')) {
      ++at_;
      if (peek().kind == Tok::Number) return ExprNode::constant(mpz_class(-mpz_class(next().text)));
      return ExprNode::binary(ExprNode::Op::Sub, ExprNode::constant(0), atom());
    }
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (t.kind == Tok::Ident) {
      const std::string word = t.text;
      if (word == "and" || word == "or" || word == "xor") {
        ++at_;
        expect('(');
        ExprPtr a = expr();
        expect(',');
        ExprPtr b = expr();
        expect(')');
        const auto op = word == "and" ? ExprNode::Op::And
                         : word == "or" ? ExprNode::Op::Or
                                        : ExprNode::Op::Xor;
        return ExprNode::binary(op, a, b);
      }
      if (word == "not") {
        ++at_;
        expect('(');
        ExprPtr a = expr();
        expect(')');
        return ExprNode::bit_not(a);
      }
      if (word[0] == 'x') {
        if (word.size() == 1) {
          ++at_;
          return ExprNode::variable(1);
        }
        const std::string digits = word.substr(1);
        const bool numeric = digits.size() <= 6 &&
                             digits.find_first_not_of("0123456789") == std::string::npos;
        if (numeric && std::stoul(digits) >= 1) {
          ++at_;
          return ExprNode::variable(static_cast<unsigned>(std::stoul(digits)));
        }
        fail("invalid variable '" + word + "'");
      }
      if (is_ctor(word)) fail("constructor '" + word + "' cannot appear inside an expression");
      fail("unknown identifier '" + word + "'");
    }
    if (t.kind == Tok::End) fail("unexpected end of input");
    fail("unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace

FunctionSpec parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace padic
