#include "weaklie/parse.hpp"

#include <cctype>
#include <limits>

#include "weaklie/errors.hpp"

namespace weaklie {
namespace {

class Parser {
 public:
  Parser(const std::string& text, const Chart& chart, const Registry& registry)
      : text_(text), chart_(chart), registry_(registry) {}

  Expr parse() {
    Expr e = expression();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "operator or end of input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
  }

  Expr expression() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (peek('/')) {
        const std::size_t at = pos_++;
        Expr d = unary();
        if (d.is_zero()) throw SyntaxError(at, "nonzero divisor", "division by zero");
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    Rational q = exponent();
    if (base.is_zero() && q.is_negative()) throw SyntaxError(at, "nonnegative exponent", "zero to a negative power");
    try {
      return pow(base, q);
    } catch (const EvaluationDomainError& e) {
      throw SyntaxError(at, "real-valued power", e.what());
    }
  }

  Rational exponent() {
    skip_ws();
    Rational q;
    if (accept('(')) {
      const bool neg = accept('-');
      Rational n = integer_literal();
      if (accept('/')) {
        const std::size_t at = pos_;
        Rational d = integer_literal();
        if (d.is_zero()) throw SyntaxError(at, "nonzero denominator");
        n = n / d;
      }
      expect(')');
      q = neg ? -n : n;
    } else {
      const bool neg = accept('-');
      q = integer_literal();
      if (neg) q = -q;
    }
    if (peek('^')) {
      ++pos_;
      const std::size_t at = pos_;
      Rational inner = exponent();
      if (!inner.is_integer()) throw SyntaxError(at, "integer exponent of a rational exponent");
      if (q.is_zero() && inner.is_negative()) throw SyntaxError(at, "nonnegative exponent");
      q = q.pow(inner.num());
    }
    return q;
  }

  Rational integer_literal() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw SyntaxError(pos_, "integer literal");
    }
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const int d = text_[pos_] - '0';
      if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
        throw SyntaxError(start, "integer literal", "literal too large");
      }
      v = v * 10 + d;
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw SyntaxError(pos_, "exact integer or p/q literal", "decimal literals are not allowed");
    }
    return Rational(v);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    expect('(');
    if (peek(')')) throw SyntaxError(pos_, "argument");
    args.push_back(expression());
    while (accept(',')) args.push_back(expression());
    expect(')');
    return args;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr(integer_literal());
    if (!std::isalpha(static_cast<unsigned char>(c))) throw SyntaxError(pos_, "operand");

    const std::size_t start = pos_;
    const std::string name = identifier();
    int primes = 0;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    std::vector<int> orders;
    bool bracketed = false;
    if (primes == 1 && pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      bracketed = true;
      do {
        Rational k = integer_literal();
        if (k.num() > 64) throw SyntaxError(pos_, "derivative order <= 64");
        orders.push_back(static_cast<int>(k.num()));
      } while (accept(','));
      expect(']');
    }

    const bool call = peek('(');
    if (auto fn = fn_from_name(name)) {
      if (primes > 0) throw SyntaxError(start + name.size(), "'('", "builtin functions take no primes");
      if (!call) throw SyntaxError(pos_, "'(' after " + name);
      const std::size_t at = pos_;
      auto args = arguments();
      if (args.size() != 1) throw ArityMismatch(at, name, 1, static_cast<int>(args.size()));
      try {
        return Expr::apply(*fn, args[0]);
      } catch (const EvaluationDomainError& e) {
        throw SyntaxError(at, "argument inside the domain of " + name, e.what());
      }
    }
    if (auto arity = registry_.opaque_arity(name)) {
      if (!call) throw SyntaxError(pos_, "'(' after " + name);
      const std::size_t at = pos_;
      auto args = arguments();
      if (static_cast<int>(args.size()) != *arity) {
        throw ArityMismatch(at, name, *arity, static_cast<int>(args.size()));
      }
      if (bracketed) {
        if (orders.size() != args.size()) throw ArityMismatch(at, name + "'[...]", *arity, static_cast<int>(orders.size()));
      } else if (primes > 0 && *arity != 1) {
        throw SyntaxError(start + name.size(), "per-argument orders " + name + "'[i,...]",
                          "primes are only defined for unary functions");
      } else {
        orders.assign(args.size(), 0);
        if (primes > 0) orders[0] = primes;
      }
      return Expr::opaque(name, std::move(orders), std::move(args));
    }
    if (primes > 0 || bracketed) throw UnknownIdentifier(start, name);
    if (call) throw UnknownIdentifier(start, name);
    if (auto idx = chart_.index_of(name)) return Expr::coord(*idx);
    if (registry_.has_parameter(name)) return Expr::param(name);
    throw UnknownIdentifier(start, name);
  }

  const std::string& text_;
  const Chart& chart_;
  const Registry& registry_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(const std::string& text, const Chart& chart, const Registry& registry) {
  return Parser(text, chart, registry).parse();
}

Rational parse_rational(const std::string& text) {
  static const Chart chart = Chart::standard(2);
  static const Registry registry;
  Expr e = parse_expression(text, chart, registry);
  if (!e.is_rational()) throw SyntaxError(0, "rational literal");
  return e.rational();
}

}  // namespace weaklie
