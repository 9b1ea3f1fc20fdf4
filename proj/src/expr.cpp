#include "weaklie/expr.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "weaklie/errors.hpp"

namespace weaklie {

struct ExprAccess {
  static Expr make(std::shared_ptr<const Node> node) { return Expr(std::move(node)); }
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

// Node::index doubles as the coordinate bitmask for every non-coordinate node.
std::uint32_t mask_of(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::Coordinate) return n.index < 31 ? (1u << n.index) : 0x80000000u;
  return static_cast<std::uint32_t>(n.index);
}

Expr make(Node n) {
  std::size_t h = mix(0x5bd1e995ULL, static_cast<std::size_t>(n.kind));
  switch (n.kind) {
    case Kind::Rational:
      h = mix(h, static_cast<std::size_t>(n.value.num()));
      h = mix(h, static_cast<std::size_t>(n.value.den()));
      break;
    case Kind::Coordinate:
      h = mix(h, static_cast<std::size_t>(n.index));
      break;
    case Kind::Parameter:
      h = mix(h, hash_string(n.name));
      break;
    case Kind::Function:
      h = mix(h, static_cast<std::size_t>(n.fn));
      break;
    case Kind::Opaque:
      h = mix(h, hash_string(n.name));
      for (int o : n.orders) h = mix(h, static_cast<std::size_t>(o));
      break;
    case Kind::Power:
      h = mix(h, static_cast<std::size_t>(n.value.num()));
      h = mix(h, static_cast<std::size_t>(n.value.den()));
      break;
    default:
      break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  n.hash = h;
  if (n.kind != Kind::Coordinate) {
    std::uint32_t m = 0;
    for (const auto& c : n.children) m |= mask_of(c);
    n.index = static_cast<int>(m);
  }
  return ExprAccess::make(std::make_shared<const Node>(std::move(n)));
}

Expr raw_rational(const Rational& r) {
  Node n;
  n.kind = Kind::Rational;
  n.value = r;
  return make(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = raw_rational(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = raw_rational(Rational(1));
  return o;
}

Expr rational_expr(const Rational& r) {
  if (r.is_zero()) return zero_expr();
  if (r.is_one()) return one_expr();
  return raw_rational(r);
}

Expr raw_power(const Expr& base, const Rational& q) {
  Node n;
  n.kind = Kind::Power;
  n.value = q;
  n.children = {base};
  return make(std::move(n));
}

Expr raw_product(std::vector<Expr> children) {
  Node n;
  n.kind = Kind::Product;
  n.children = std::move(children);
  return make(std::move(n));
}

Expr raw_sum(std::vector<Expr> children) {
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(children);
  return make(std::move(n));
}

Expr raw_function(Fn fn, const Expr& arg) {
  Node n;
  n.kind = Kind::Function;
  n.fn = fn;
  n.children = {arg};
  return make(std::move(n));
}

int cmp_rational(const Rational& a, const Rational& b) {
  auto c = a <=> b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (c.is_zero()) return zero_expr();
  if (rest.is_rational()) return rational_expr(c * rest.rational());
  if (c.is_one()) return rest;
  std::vector<Expr> ch;
  ch.reserve(rest.kind() == Kind::Product ? rest.children().size() + 1 : 2);
  ch.push_back(rational_expr(c));
  if (rest.kind() == Kind::Product) {
    ch.insert(ch.end(), rest.children().begin(), rest.children().end());
  } else {
    ch.push_back(rest);
  }
  return raw_product(std::move(ch));
}

bool negative_form(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
      return e.rational().is_negative();
    case Kind::Product:
      return e.children()[0].is_rational() && e.children()[0].rational().is_negative();
    case Kind::Sum: {
      const Expr& first = e.children()[0];
      return split_coefficient(first).first.is_negative();
    }
    default:
      return false;
  }
}

// Signed content c and primitive part p with e = c * p; the first term of p
// has a positive coefficient and the coefficients of p are coprime integers.
std::pair<Rational, Expr> primitive(const Expr& sum) {
  std::int64_t g = 0;
  std::int64_t l = 1;
  std::vector<std::pair<Rational, Expr>> parts;
  parts.reserve(sum.children().size());
  for (const auto& t : sum.children()) {
    parts.push_back(split_coefficient(t));
    const Rational& c = parts.back().first;
    g = std::gcd(g, c.num());
    l = std::lcm(l, c.den());
  }
  Rational content(g, l);
  if (parts.front().first.is_negative()) content = -content;
  if (content.is_one()) return {content, sum};
  std::vector<Expr> ch;
  ch.reserve(parts.size());
  for (const auto& [c, rest] : parts) ch.push_back(with_coefficient(c / content, rest));
  return {content, raw_sum(std::move(ch))};
}

Expr rational_power(const Rational& r, const Rational& q) {
  if (q.is_integer()) {
    if (r.is_zero() && q.is_negative()) throw EvaluationDomainError("division by zero");
    return rational_expr(r.pow(q.num()));
  }
  if (r.is_zero()) {
    if (q.is_negative()) throw EvaluationDomainError("division by zero");
    return zero_expr();
  }
  if (r.is_one()) return one_expr();
  if (r.is_negative()) {
    if (q.den() % 2 == 0) throw EvaluationDomainError("fractional power of a negative constant");
    Expr mag = rational_power(-r, q);
    return q.num() % 2 != 0 ? Expr::product({rational_expr(Rational(-1)), mag}) : mag;
  }
  std::int64_t rn = 0;
  std::int64_t rd = 0;
  if (exact_integer_root(r.num(), q.den(), rn) && exact_integer_root(r.den(), q.den(), rd)) {
    return rational_expr(Rational(rn, rd).pow(q.num()));
  }
  return raw_power(rational_expr(r), q);
}

bool expansion_small(const Expr& sum, const Rational& q) {
  if (!q.is_integer() || q.num() <= 1) return false;
  double terms = static_cast<double>(sum.children().size());
  return std::pow(terms, static_cast<double>(q.num())) <= 1024.0;
}

// prim is a primitive Sum; q integer.
Expr power_of_primitive_sum(const Expr& prim, const Rational& q) {
  if (expansion_small(prim, q)) {
    // multiply term by term; Expr::product would merge the equal bases back
    std::vector<Expr> terms = prim.children();
    for (std::int64_t k = 1; k < q.num(); ++k) {
      std::vector<Expr> next;
      next.reserve(terms.size() * prim.children().size());
      for (const auto& a : terms)
        for (const auto& b : prim.children()) next.push_back(Expr::product({a, b}));
      Expr s = Expr::sum(std::move(next));
      terms = s.kind() == Kind::Sum ? s.children() : std::vector<Expr>{s};
    }
    return Expr::sum(std::move(terms));
  }
  return raw_power(prim, q);
}

struct TermKey {
  Rational coef;
  Expr rest;
};

}  // namespace

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Cot: return "cot";
    case Fn::Exp: return "exp";
    case Fn::Ln: return "ln";
    case Fn::Sqrt: return "sqrt";
    case Fn::Atan: return "atan";
    case Fn::Abs: return "abs";
  }
  return "?";
}

std::optional<Fn> fn_from_name(const std::string& name) {
  static const std::map<std::string, Fn> table = {{"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
                                                  {"cot", Fn::Cot},   {"exp", Fn::Exp},   {"ln", Fn::Ln},
                                                  {"sqrt", Fn::Sqrt}, {"atan", Fn::Atan}, {"abs", Fn::Abs}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Expr::Expr() : node_(zero_expr().node_) {}

Expr::Expr(Rational value) : node_(rational_expr(value).node_) {}

Kind Expr::kind() const { return node_->kind; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return node_->kind == Kind::Rational && node_->value.is_zero(); }
bool Expr::is_one() const { return node_->kind == Kind::Rational && node_->value.is_one(); }
const Rational& Expr::rational() const { return node_->value; }
int Expr::coord_index() const { return node_->index; }
const std::string& Expr::name() const { return node_->name; }
Fn Expr::fn() const { return node_->fn; }
const Rational& Expr::exponent() const { return node_->value; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

std::size_t Expr::size() const {
  std::size_t s = 1;
  for (const auto& c : node_->children) s += c.size();
  return s;
}

Expr Expr::coord(int index) {
  Node n;
  n.kind = Kind::Coordinate;
  n.index = index;
  return make(std::move(n));
}

Expr Expr::param(const std::string& name) {
  Node n;
  n.kind = Kind::Parameter;
  n.name = name;
  return make(std::move(n));
}

Expr Expr::opaque(const std::string& name, std::vector<Expr> args) {
  std::vector<int> orders(args.size(), 0);
  return opaque(name, std::move(orders), std::move(args));
}

Expr Expr::opaque(const std::string& name, std::vector<int> orders, std::vector<Expr> args) {
  if (orders.size() != args.size()) throw Error("opaque '" + name + "': order list does not match arguments");
  Node n;
  n.kind = Kind::Opaque;
  n.name = name;
  n.orders = std::move(orders);
  n.children = std::move(args);
  return make(std::move(n));
}

Expr Expr::apply(Fn fn, const Expr& u) {
  switch (fn) {
    case Fn::Tan:
      return apply(Fn::Sin, u) * power(apply(Fn::Cos, u), Rational(-1));
    case Fn::Cot:
      return apply(Fn::Cos, u) * power(apply(Fn::Sin, u), Rational(-1));
    case Fn::Sqrt:
      return power(u, Rational(1, 2));
    case Fn::Sin:
      if (u.is_zero()) return zero_expr();
      if (negative_form(u)) return -apply(Fn::Sin, -u);
      break;
    case Fn::Cos:
      if (u.is_zero()) return one_expr();
      if (negative_form(u)) return apply(Fn::Cos, -u);
      break;
    case Fn::Atan:
      if (u.is_zero()) return zero_expr();
      if (negative_form(u)) return -apply(Fn::Atan, -u);
      break;
    case Fn::Exp:
      if (u.is_zero()) return one_expr();
      if (u.kind() == Kind::Function && u.fn() == Fn::Ln) return u.children()[0];
      if (u.kind() == Kind::Product && u.children().size() == 2 && u.children()[0].is_rational() &&
          u.children()[1].kind() == Kind::Function && u.children()[1].fn() == Fn::Ln) {
        return power(u.children()[1].children()[0], u.children()[0].rational());
      }
      break;
    case Fn::Ln:
      if (u.is_one()) return zero_expr();
      if (u.is_rational() && !u.rational().sign()) throw EvaluationDomainError("ln of zero");
      if (u.kind() == Kind::Function && u.fn() == Fn::Exp) return u.children()[0];
      break;
    case Fn::Abs:
      if (u.is_rational()) return rational_expr(u.rational().abs());
      if (negative_form(u)) return apply(Fn::Abs, -u);
      if (u.kind() == Kind::Function && (u.fn() == Fn::Abs || u.fn() == Fn::Exp)) return u;
      break;
  }
  return raw_function(fn, u);
}

Expr Expr::power(const Expr& base, const Rational& q) {
  if (q.is_zero()) return one_expr();
  if (q.is_one()) return base;
  switch (base.kind()) {
    case Kind::Rational:
      return rational_power(base.rational(), q);
    case Kind::Power: {
      const Rational& p = base.exponent();
      if (q.is_integer() || p.num() % 2 != 0) return power(base.children()[0], p * q);
      return raw_power(base, q);
    }
    case Kind::Product: {
      auto [coef, rest] = split_coefficient(base);
      if (q.is_integer() || coef.sign() > 0) {
        std::vector<Expr> f;
        f.reserve(base.children().size());
        for (const auto& c : base.children()) f.push_back(power(c, q));
        return product(std::move(f));
      }
      return raw_power(base, q);
    }
    case Kind::Function:
      if (base.fn() == Fn::Exp) return apply(Fn::Exp, Expr(q) * base.children()[0]);
      if (base.fn() == Fn::Abs && q.is_integer() && q.num() % 2 == 0) return power(base.children()[0], q);
      return raw_power(base, q);
    case Kind::Sum: {
      auto [content, prim] = primitive(base);
      if (q.is_integer()) {
        Expr p = power_of_primitive_sum(prim, q);
        if (content.is_one()) return p;
        return product({rational_expr(content.pow(q.num())), p});
      }
      if (content.sign() > 0 && !content.is_one()) {
        return product({rational_power(content, q), raw_power(prim, q)});
      }
      return raw_power(base, q);
    }
    default:
      return raw_power(base, q);
  }
}

Expr Expr::product(std::vector<Expr> factors) {
  Rational coef(1);
  std::vector<std::pair<Expr, Rational>> bases;
  std::unordered_map<Expr, std::size_t, ExprHash> index;
  std::vector<Expr> exp_args;

  auto insert = [&](const Expr& b, const Rational& q) {
    auto it = index.find(b);
    if (it == index.end()) {
      index.emplace(b, bases.size());
      bases.emplace_back(b, q);
    } else {
      bases[it->second].second += q;
    }
  };
  auto add_base = [&](const Expr& b, const Rational& q) {
    if (b.kind() == Kind::Function && b.fn() == Fn::Exp) {
      exp_args.push_back(q.is_one() ? b.children()[0] : Expr(q) * b.children()[0]);
    } else if (b.kind() == Kind::Sum && q.is_integer()) {
      auto [content, prim] = primitive(b);
      if (!content.is_one()) coef *= content.pow(q.num());
      insert(prim, q);
    } else {
      insert(b, q);
    }
  };
  auto add_factor = [&](const Expr& f) {
    switch (f.kind()) {
      case Kind::Rational:
        coef *= f.rational();
        break;
      case Kind::Power:
        add_base(f.children()[0], f.exponent());
        break;
      default:
        add_base(f, Rational(1));
        break;
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& c : f.children()) add_factor(c);
    } else {
      add_factor(f);
    }
  }
  if (coef.is_zero()) return zero_expr();

  std::vector<Expr> plain;
  std::vector<Expr> sums;
  std::vector<Expr> again;
  if (!exp_args.empty()) {
    Expr s = sum(exp_args);
    if (!s.is_zero()) {
      Expr e = apply(Fn::Exp, s);
      if (e.kind() == Kind::Function && e.fn() == Fn::Exp) {
        plain.push_back(e);
      } else {
        again.push_back(e);
      }
    }
  }
  for (const auto& [b, q] : bases) {
    if (q.is_zero()) continue;
    if (q.is_one()) {
      if (b.kind() == Kind::Product) {
        again.push_back(b);
      } else {
        (b.kind() == Kind::Sum ? sums : plain).push_back(b);
      }
      continue;
    }
    Expr p = (b.kind() == Kind::Sum && q.is_integer()) ? power_of_primitive_sum(b, q) : power(b, q);
    switch (p.kind()) {
      case Kind::Rational:
        coef *= p.rational();
        break;
      case Kind::Product:
        again.push_back(p);
        break;
      case Kind::Sum:
        sums.push_back(p);
        break;
      default:
        plain.push_back(p);
        break;
    }
  }
  if (coef.is_zero()) return zero_expr();
  if (!again.empty()) {
    std::vector<Expr> all;
    all.reserve(plain.size() + sums.size() + again.size() + 1);
    all.push_back(rational_expr(coef));
    all.insert(all.end(), plain.begin(), plain.end());
    all.insert(all.end(), sums.begin(), sums.end());
    all.insert(all.end(), again.begin(), again.end());
    return product(std::move(all));
  }

  std::sort(plain.begin(), plain.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  Expr head;
  if (plain.empty()) {
    head = rational_expr(coef);
  } else if (plain.size() == 1 && coef.is_one()) {
    head = plain[0];
  } else {
    if (!coef.is_one()) plain.insert(plain.begin(), rational_expr(coef));
    head = raw_product(std::move(plain));
  }
  if (sums.empty()) return head;

  std::vector<Expr> terms{head};
  for (const auto& s : sums) {
    std::vector<Expr> next;
    next.reserve(terms.size() * s.children().size());
    for (const auto& t : terms) {
      if (t.kind() == Kind::Sum) {
        for (const auto& tt : t.children())
          for (const auto& c : s.children()) next.push_back(product({tt, c}));
      } else {
        for (const auto& c : s.children()) next.push_back(product({t, c}));
      }
    }
    terms = std::move(next);
  }
  return sum(std::move(terms));
}

Expr Expr::sum(std::vector<Expr> terms) {
  Rational constant(0);
  std::vector<TermKey> acc;
  std::unordered_map<Expr, std::size_t, ExprHash> index;
  auto add_term = [&](const Expr& t) {
    if (t.is_rational()) {
      constant += t.rational();
      return;
    }
    auto [c, rest] = split_coefficient(t);
    auto it = index.find(rest);
    if (it == index.end()) {
      index.emplace(rest, acc.size());
      acc.push_back({c, rest});
    } else {
      acc[it->second].coef += c;
    }
  };
  for (const auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& c : t.children()) add_term(c);
    } else {
      add_term(t);
    }
  }
  acc.erase(std::remove_if(acc.begin(), acc.end(), [](const TermKey& k) { return k.coef.is_zero(); }), acc.end());
  if (acc.empty()) return rational_expr(constant);
  if (acc.size() == 1 && constant.is_zero()) return with_coefficient(acc[0].coef, acc[0].rest);
  std::sort(acc.begin(), acc.end(), [](const TermKey& a, const TermKey& b) { return compare(a.rest, b.rest) < 0; });
  std::vector<Expr> out;
  out.reserve(acc.size() + 1);
  if (!constant.is_zero()) out.push_back(rational_expr(constant));
  for (const auto& k : acc) out.push_back(with_coefficient(k.coef, k.rest));
  return raw_sum(std::move(out));
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.is_rational()) return {e.rational(), one_expr()};
  if (e.kind() == Kind::Product && e.children()[0].is_rational()) {
    const auto& ch = e.children();
    if (ch.size() == 2) return {ch[0].rational(), ch[1]};
    return {ch[0].rational(), raw_product(std::vector<Expr>(ch.begin() + 1, ch.end()))};
  }
  return {Rational(1), e};
}

int compare(const Expr& a, const Expr& b) {
  if (a.ptr() == b.ptr()) return 0;
  const Kind ka = a.kind();
  const Kind kb = b.kind();
  if (ka == Kind::Power || kb == Kind::Power) {
    const Expr& ba = ka == Kind::Power ? a.children()[0] : a;
    const Expr& bb = kb == Kind::Power ? b.children()[0] : b;
    const Rational ea = ka == Kind::Power ? a.exponent() : Rational(1);
    const Rational eb = kb == Kind::Power ? b.exponent() : Rational(1);
    int c = compare(ba, bb);
    if (c != 0) return c;
    return cmp_rational(ea, eb);
  }
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (ka) {
    case Kind::Rational:
      return cmp_rational(a.rational(), b.rational());
    case Kind::Coordinate:
      return a.coord_index() < b.coord_index() ? -1 : (a.coord_index() > b.coord_index() ? 1 : 0);
    case Kind::Parameter:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Function:
      if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
      return compare(a.children()[0], b.children()[0]);
    case Kind::Opaque: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.orders() != b.orders()) return a.orders() < b.orders() ? -1 : 1;
      break;
    }
    default:
      break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  const std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(ca[i], cb[i]);
    if (c != 0) return c;
  }
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.ptr() == b.ptr()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

Expr Expr::operator-() const { return product({rational_expr(Rational(-1)), *this}); }
Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::sum({a, b});
}
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  return Expr::sum({a, -b});
}
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return zero_expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::product({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw EvaluationDomainError("division by zero");
  if (a.is_zero()) return zero_expr();
  return Expr::product({a, Expr::power(b, Rational(-1))});
}

Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }
Expr sin(const Expr& e) { return Expr::apply(Fn::Sin, e); }
Expr cos(const Expr& e) { return Expr::apply(Fn::Cos, e); }
Expr tan(const Expr& e) { return Expr::apply(Fn::Tan, e); }
Expr cot(const Expr& e) { return Expr::apply(Fn::Cot, e); }
Expr exp(const Expr& e) { return Expr::apply(Fn::Exp, e); }
Expr ln(const Expr& e) { return Expr::apply(Fn::Ln, e); }
Expr sqrt(const Expr& e) { return Expr::apply(Fn::Sqrt, e); }
Expr atan(const Expr& e) { return Expr::apply(Fn::Atan, e); }
Expr abs(const Expr& e) { return Expr::apply(Fn::Abs, e); }

bool depends_on_coord(const Expr& e, int coord) {
  if (coord >= 31) return mask_of(e) & 0x80000000u;
  return (mask_of(e) >> coord) & 1u;
}

bool is_coordinate_free(const Expr& e) { return mask_of(e) == 0; }

namespace {

using Memo = std::unordered_map<const Node*, Expr>;

Expr diff_impl(const Expr& e, int i, Memo& memo) {
  if (!depends_on_coord(e, i)) return zero_expr();
  if (e.kind() == Kind::Coordinate) return one_expr();
  auto it = memo.find(e.ptr());
  if (it != memo.end()) return it->second;
  Expr r;
  switch (e.kind()) {
    case Kind::Function: {
      const Expr& u = e.children()[0];
      Expr du = diff_impl(u, i, memo);
      switch (e.fn()) {
        case Fn::Sin: r = cos(u) * du; break;
        case Fn::Cos: r = -(sin(u) * du); break;
        case Fn::Exp: r = e * du; break;
        case Fn::Ln: r = du / u; break;
        case Fn::Atan: r = du / (one_expr() + pow(u, Rational(2))); break;
        case Fn::Abs: r = du * e / u; break;
        case Fn::Tan: r = du * pow(cos(u), Rational(-2)); break;
        case Fn::Cot: r = -(du * pow(sin(u), Rational(-2))); break;
        case Fn::Sqrt: r = Expr(Rational(1, 2)) * du * pow(u, Rational(-1, 2)); break;
      }
      break;
    }
    case Kind::Opaque: {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < e.children().size(); ++k) {
        Expr da = diff_impl(e.children()[k], i, memo);
        if (da.is_zero()) continue;
        std::vector<int> orders = e.orders();
        ++orders[k];
        terms.push_back(Expr::opaque(e.name(), std::move(orders), e.children()) * da);
      }
      r = Expr::sum(std::move(terms));
      break;
    }
    case Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.children().size());
      for (const auto& c : e.children()) terms.push_back(diff_impl(c, i, memo));
      r = Expr::sum(std::move(terms));
      break;
    }
    case Kind::Product: {
      const auto& ch = e.children();
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < ch.size(); ++k) {
        if (!depends_on_coord(ch[k], i)) continue;
        std::vector<Expr> f;
        f.reserve(ch.size());
        for (std::size_t j = 0; j < ch.size(); ++j)
          if (j != k) f.push_back(ch[j]);
        f.push_back(diff_impl(ch[k], i, memo));
        terms.push_back(Expr::product(std::move(f)));
      }
      r = Expr::sum(std::move(terms));
      break;
    }
    case Kind::Power: {
      const Expr& b = e.children()[0];
      const Rational& q = e.exponent();
      r = Expr::product({Expr(q), pow(b, q - Rational(1)), diff_impl(b, i, memo)});
      break;
    }
    default:
      r = zero_expr();
      break;
  }
  memo.emplace(e.ptr(), r);
  return r;
}

Expr rebuild(const Expr& e, std::vector<Expr> ch) {
  switch (e.kind()) {
    case Kind::Function: return Expr::apply(e.fn(), ch[0]);
    case Kind::Opaque: return Expr::opaque(e.name(), e.orders(), std::move(ch));
    case Kind::Sum: return Expr::sum(std::move(ch));
    case Kind::Product: return Expr::product(std::move(ch));
    case Kind::Power: return Expr::power(ch[0], e.exponent());
    default: return e;
  }
}

Expr substitute_impl(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& mapper, Memo& memo) {
  auto it = memo.find(e.ptr());
  if (it != memo.end()) return it->second;
  Expr r;
  if (auto m = mapper(e)) {
    r = *m;
  } else if (e.children().empty()) {
    r = e;
  } else {
    std::vector<Expr> ch;
    ch.reserve(e.children().size());
    bool changed = false;
    for (const auto& c : e.children()) {
      ch.push_back(substitute_impl(c, mapper, memo));
      changed = changed || ch.back().ptr() != c.ptr();
    }
    r = changed ? rebuild(e, std::move(ch)) : e;
  }
  memo.emplace(e.ptr(), r);
  return r;
}

}  // namespace

Expr diff(const Expr& e, int coord) {
  Memo memo;
  return diff_impl(e, coord, memo);
}

Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& mapper) {
  Memo memo;
  return substitute_impl(e, mapper, memo);
}

Expr substitute_coord(const Expr& e, int coord, const Expr& value) {
  return substitute(e, [&](const Expr& x) -> std::optional<Expr> {
    if (x.kind() == Kind::Coordinate && x.coord_index() == coord) return value;
    if (!depends_on_coord(x, coord)) return x;
    return std::nullopt;
  });
}

Expr substitute_param(const Expr& e, const std::string& name, const Expr& value) {
  return substitute(e, [&](const Expr& x) -> std::optional<Expr> {
    if (x.kind() == Kind::Parameter && x.name() == name) return value;
    return std::nullopt;
  });
}

void collect_symbols(const Expr& e, SymbolSet& out) {
  switch (e.kind()) {
    case Kind::Coordinate:
      out.coordinates.insert(e.coord_index());
      return;
    case Kind::Parameter:
      out.parameters.insert(e.name());
      return;
    case Kind::Opaque:
      out.opaque_arity[e.name()] = static_cast<int>(e.children().size());
      break;
    default:
      break;
  }
  for (const auto& c : e.children()) collect_symbols(c, out);
}

namespace {

class Printer {
 public:
  explicit Printer(const std::vector<std::string>& names) : names_(names) {}

  std::string expr(const Expr& e) const {
    switch (e.kind()) {
      case Kind::Sum: return sum(e);
      case Kind::Product:
      case Kind::Power:
      case Kind::Rational: return term(e);
      default: return atom(e);
    }
  }

 private:
  std::string coord_name(int i) const {
    if (i >= 0 && static_cast<std::size_t>(i) < names_.size()) return names_[i];
    return "x" + std::to_string(i);
  }

  std::string atom(const Expr& e) const {
    switch (e.kind()) {
      case Kind::Coordinate: return coord_name(e.coord_index());
      case Kind::Parameter: return e.name();
      case Kind::Function: return std::string(fn_name(e.fn())) + "(" + expr(e.children()[0]) + ")";
      case Kind::Opaque: {
        std::string s = e.name();
        const auto& o = e.orders();
        const bool any = std::any_of(o.begin(), o.end(), [](int k) { return k != 0; });
        if (any && o.size() == 1) {
          s += std::string(static_cast<std::size_t>(o[0]), '\'');
        } else if (any) {
          s += "'[";
          for (std::size_t k = 0; k < o.size(); ++k) s += (k ? "," : "") + std::to_string(o[k]);
          s += "]";
        }
        s += "(";
        for (std::size_t k = 0; k < e.children().size(); ++k) s += (k ? ", " : "") + expr(e.children()[k]);
        return s + ")";
      }
      default: return "(" + expr(e) + ")";
    }
  }

  static bool is_atomic(const Expr& e) {
    switch (e.kind()) {
      case Kind::Coordinate:
      case Kind::Parameter:
      case Kind::Function:
      case Kind::Opaque: return true;
      case Kind::Rational: return e.rational().is_integer() && !e.rational().is_negative();
      default: return false;
    }
  }

  static std::string exponent_text(const Rational& q) {
    if (q.is_integer() && !q.is_negative()) return q.to_string();
    return "(" + q.to_string() + ")";
  }

  std::string power_factor(const Expr& base, const Rational& q) const {
    std::string b = is_atomic(base) ? expr(base) : "(" + expr(base) + ")";
    if (q.is_one()) return b;
    return b + "^" + exponent_text(q);
  }

  std::string term(const Expr& e) const {
    if (e.is_rational()) return e.rational().to_string();
    auto [coef, rest] = split_coefficient(e);
    std::vector<Expr> factors;
    if (rest.kind() == Kind::Product) {
      factors = rest.children();
    } else if (!rest.is_one()) {
      factors.push_back(rest);
    }
    std::vector<std::string> num;
    std::vector<std::string> den;
    const Rational mag = coef.abs();
    if (mag.num() != 1) num.push_back(std::to_string(mag.num()));
    if (mag.den() != 1) den.push_back(std::to_string(mag.den()));
    for (const auto& f : factors) {
      if (f.kind() == Kind::Power && f.exponent().is_negative()) {
        den.push_back(power_factor(f.children()[0], -f.exponent()));
      } else if (f.kind() == Kind::Power) {
        num.push_back(power_factor(f.children()[0], f.exponent()));
      } else {
        num.push_back(is_atomic(f) ? expr(f) : "(" + expr(f) + ")");
      }
    }
    std::string s = num.empty() ? "1" : join(num, "*");
    if (!den.empty()) s += "/" + (den.size() == 1 ? den[0] : "(" + join(den, "*") + ")");
    return coef.is_negative() ? "-" + s : s;
  }

  std::string sum(const Expr& e) const {
    std::vector<Expr> terms = e.children();
    // constant last reads better
    if (!terms.empty() && terms.front().is_rational()) std::rotate(terms.begin(), terms.begin() + 1, terms.end());
    std::string s;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Expr& t = terms[k];
      if (k == 0) {
        s = term(t);
      } else if (split_coefficient(t).first.is_negative()) {
        s += " - " + term(-t);
      } else {
        s += " + " + term(t);
      }
    }
    return s;
  }

  static std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? sep : "") + parts[k];
    return s;
  }

  const std::vector<std::string>& names_;
};

}  // namespace

std::string to_string(const Expr& e, const std::vector<std::string>& coordinate_names) {
  return Printer(coordinate_names).expr(e);
}

std::string to_string(const Expr& e) {
  static const std::vector<std::string> none;
  return Printer(none).expr(e);
}

}  // namespace weaklie
