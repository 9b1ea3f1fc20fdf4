#include "weaklie/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "weaklie/errors.hpp"

namespace weaklie {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

struct Val {
  double v;
  double s;
};

class Evaluator {
 public:
  Evaluator(const Bindings& b, double singular) : b_(b), singular_(singular) {}

  Val eval(const Expr& e) {
    if (e.children().empty()) return leaf(e);
    auto it = memo_.find(e.ptr());
    if (it != memo_.end()) return it->second;
    Val r = compound(e);
    if (!std::isfinite(r.v) || !std::isfinite(r.s)) throw EvaluationDomainError("non-finite value");
    memo_.emplace(e.ptr(), r);
    return r;
  }

 private:
  Val leaf(const Expr& e) const {
    switch (e.kind()) {
      case Kind::Rational: {
        const double v = e.rational().to_double();
        return {v, std::abs(v)};
      }
      case Kind::Coordinate: {
        const auto i = static_cast<std::size_t>(e.coord_index());
        if (i >= b_.point.size()) throw Error("coordinate index outside the evaluation point");
        return {b_.point[i], std::abs(b_.point[i])};
      }
      case Kind::Parameter: {
        auto it = b_.parameters.find(e.name());
        if (it == b_.parameters.end()) throw MissingParameter("unbound parameter '" + e.name() + "'");
        return {it->second, std::abs(it->second)};
      }
      default:
        throw Error("unexpected leaf");
    }
  }

  void check_denominator(double v, double s, const char* what) const {
    if (v == 0.0 || std::abs(v) < singular_ * s) throw EvaluationDomainError(what);
  }

  Val compound(const Expr& e) {
    const auto& ch = e.children();
    switch (e.kind()) {
      case Kind::Sum: {
        Val r{0.0, 0.0};
        for (const auto& c : ch) {
          Val x = eval(c);
          r.v += x.v;
          r.s += x.s;
        }
        return r;
      }
      case Kind::Product: {
        Val r{1.0, 1.0};
        for (const auto& c : ch) {
          Val x = eval(c);
          r.v *= x.v;
          r.s *= x.s;
        }
        return r;
      }
      case Kind::Power: {
        Val b = eval(ch[0]);
        const Rational& q = e.exponent();
        const double qd = q.to_double();
        if (!q.is_integer() && b.v < 0.0) throw EvaluationDomainError("fractional power of a negative value");
        if (q.is_negative()) {
          check_denominator(b.v, b.s, "division by (near) zero");
          const double v = q.is_integer() ? std::pow(b.v, static_cast<double>(q.num())) : std::pow(b.v, qd);
          return {v, std::abs(v) * (1.0 + std::abs(qd) * b.s / std::abs(b.v))};
        }
        const double v = q.is_integer() ? std::pow(b.v, static_cast<double>(q.num())) : std::pow(b.v, qd);
        double s = std::pow(b.s, qd);
        if (!q.is_integer() && b.v > 0.0) s = std::max(s, std::abs(v) * (1.0 + qd * b.s / b.v));
        return {v, std::max(s, std::abs(v))};
      }
      case Kind::Function:
        return function(e.fn(), eval(ch[0]));
      case Kind::Opaque:
        return opaque(e);
      default:
        throw Error("unexpected node");
    }
  }

  Val function(Fn fn, Val u) const {
    switch (fn) {
      case Fn::Sin: {
        const double v = std::sin(u.v);
        return {v, std::abs(v) + std::abs(std::cos(u.v)) * u.s};
      }
      case Fn::Cos: {
        const double v = std::cos(u.v);
        return {v, std::abs(v) + std::abs(std::sin(u.v)) * u.s};
      }
      case Fn::Tan: {
        const double c = std::cos(u.v);
        check_denominator(c, 1.0 + u.s, "tan at a pole");
        const double v = std::tan(u.v);
        return {v, std::abs(v) + u.s / (c * c)};
      }
      case Fn::Cot: {
        const double sn = std::sin(u.v);
        check_denominator(sn, 1.0 + u.s, "cot at a multiple of pi");
        const double v = std::cos(u.v) / sn;
        return {v, std::abs(v) + u.s / (sn * sn)};
      }
      case Fn::Exp: {
        const double v = std::exp(u.v);
        return {v, v * (1.0 + u.s)};
      }
      case Fn::Ln: {
        if (u.v <= 0.0) throw EvaluationDomainError("ln of a non-positive value");
        check_denominator(u.v, u.s, "ln near zero");
        const double v = std::log(u.v);
        return {v, std::abs(v) + u.s / u.v};
      }
      case Fn::Sqrt: {
        if (u.v < 0.0) throw EvaluationDomainError("sqrt of a negative value");
        const double v = std::sqrt(u.v);
        return {v, std::max(std::sqrt(u.s), v)};
      }
      case Fn::Atan: {
        const double v = std::atan(u.v);
        return {v, std::abs(v) + u.s / (1.0 + u.v * u.v)};
      }
      case Fn::Abs:
        return {std::abs(u.v), u.s};
    }
    throw Error("unknown function");
  }

  Val opaque(const Expr& e) {
    std::vector<double> args;
    std::vector<double> mags;
    for (const auto& c : e.children()) {
      Val x = eval(c);
      args.push_back(x.v);
      mags.push_back(std::max(std::abs(x.v), x.s));
    }
    if (auto it = b_.polynomials.find(e.name()); it != b_.polynomials.end()) {
      if (it->second.arity() != static_cast<int>(args.size())) throw Error("opaque arity mismatch for " + e.name());
      const double v = it->second.evaluate(args, e.orders());
      return {v, std::max(std::abs(v), it->second.magnitude(mags, e.orders()))};
    }
    if (auto it = b_.callables.find(e.name()); it != b_.callables.end()) {
      const double v = it->second(args, e.orders());
      return {v, std::abs(v)};
    }
    throw MissingParameter("unbound opaque function '" + e.name() + "'");
  }

  const Bindings& b_;
  double singular_;
  std::unordered_map<const Node*, Val> memo_;
};

constexpr double kPublicSingular = 1e-12;
constexpr double kSamplingSingular = 1e-8;

void collect_all(const std::vector<Expr>& exprs, SymbolSet& symbols) {
  for (const auto& e : exprs) collect_symbols(e, symbols);
}

}  // namespace

void NumericContext::validate() const {
  if (samples < 4) throw Error("sample count must be at least 4");
  if (!(tolerance > 0.0)) throw Error("tolerance must be positive");
  if (degree < 2) throw Error("opaque polynomial degree must be at least 2");
  if (max_attempts < 1) throw Error("max_attempts must be positive");
}

PolynomialInstance::PolynomialInstance(int arity, std::vector<std::vector<int>> exponents,
                                       std::vector<double> coefficients)
    : arity_(arity), exponents_(std::move(exponents)), coefficients_(std::move(coefficients)) {
  if (exponents_.size() != coefficients_.size()) throw Error("polynomial term count mismatch");
  for (const auto& m : exponents_)
    if (static_cast<int>(m.size()) != arity_) throw Error("polynomial exponent arity mismatch");
}

PolynomialInstance PolynomialInstance::random(int arity, int degree, std::uint64_t seed) {
  std::vector<std::vector<int>> monomials;
  std::vector<int> cur(static_cast<std::size_t>(arity), 0);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == arity) {
      monomials.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[static_cast<std::size_t>(slot)] = k;
      rec(slot + 1, left - k);
    }
  };
  rec(0, degree);
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<double> coef;
  coef.reserve(monomials.size());
  for (std::size_t i = 0; i < monomials.size(); ++i) coef.push_back(uniform(rng, -2.0, 2.0));
  return PolynomialInstance(arity, std::move(monomials), std::move(coef));
}

namespace {

double falling(int e, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= static_cast<double>(e - j);
  return r;
}

}  // namespace

double PolynomialInstance::evaluate(const std::vector<double>& x, const std::vector<int>& orders) const {
  double total = 0.0;
  for (std::size_t t = 0; t < exponents_.size(); ++t) {
    double term = coefficients_[t];
    for (int j = 0; j < arity_ && term != 0.0; ++j) {
      const int e = exponents_[t][static_cast<std::size_t>(j)];
      const int k = orders[static_cast<std::size_t>(j)];
      if (k > e) {
        term = 0.0;
        break;
      }
      term *= falling(e, k) * std::pow(x[static_cast<std::size_t>(j)], e - k);
    }
    total += term;
  }
  return total;
}

double PolynomialInstance::magnitude(const std::vector<double>& x, const std::vector<int>& orders) const {
  double total = 0.0;
  for (std::size_t t = 0; t < exponents_.size(); ++t) {
    double term = std::abs(coefficients_[t]);
    for (int j = 0; j < arity_; ++j) {
      const int e = exponents_[t][static_cast<std::size_t>(j)];
      const int k = orders[static_cast<std::size_t>(j)];
      if (k > e) {
        term = 0.0;
        break;
      }
      term *= falling(e, k) * std::pow(std::abs(x[static_cast<std::size_t>(j)]), e - k);
    }
    total += term;
  }
  return total;
}

double evaluate_numeric(const Expr& e, const Bindings& bindings) {
  Evaluator ev(bindings, kPublicSingular);
  Val v = ev.eval(e);
  if (!std::isfinite(v.v)) throw EvaluationDomainError("non-finite value");
  return v.v;
}

Bindings draw_bindings(const Chart& chart, const NumericContext& ctx, const SymbolSet& symbols, int sample,
                       int attempt) {
  const std::uint64_t base = splitmix64(ctx.seed ^ splitmix64(static_cast<std::uint64_t>(sample) * 0x100000001b3ULL +
                                                              static_cast<std::uint64_t>(attempt) + 0x51ed27ULL));
  Bindings b;
  std::mt19937_64 rng(splitmix64(base ^ 0xc0de5eedULL));
  for (int i = 0; i < chart.dim(); ++i) {
    const Interval box = chart.interval(i);
    b.point.push_back(uniform(rng, box.lo, box.hi));
  }
  for (const auto& p : symbols.parameters) {
    std::mt19937_64 prng(splitmix64(base ^ fnv1a(p)));
    const Interval box = chart.parameter_interval(p);
    b.parameters[p] = uniform(prng, box.lo, box.hi);
  }
  for (const auto& [name, arity] : symbols.opaque_arity) {
    b.polynomials[name] = PolynomialInstance::random(arity, ctx.degree, base ^ fnv1a(name) ^ 0x0fa9ULL);
  }
  return b;
}

SampledValues sample_values(const std::vector<Expr>& exprs, const Chart& chart, const NumericContext& ctx,
                            int count) {
  ctx.validate();
  SymbolSet symbols;
  collect_all(exprs, symbols);
  SampledValues out;
  for (int s = 0; s < count; ++s) {
    bool done = false;
    for (int attempt = 0; attempt < ctx.max_attempts && !done; ++attempt) {
      Bindings b = draw_bindings(chart, ctx, symbols, s, attempt);
      try {
        Evaluator ev(b, kSamplingSingular);
        std::vector<double> vals;
        std::vector<double> scales;
        vals.reserve(exprs.size());
        scales.reserve(exprs.size());
        for (const auto& e : exprs) {
          Val v = ev.eval(e);
          vals.push_back(v.v);
          scales.push_back(v.s);
        }
        out.bindings.push_back(std::move(b));
        out.values.push_back(std::move(vals));
        out.scales.push_back(std::move(scales));
        done = true;
      } catch (const EvaluationDomainError&) {
      }
    }
    if (!done) {
      throw EvaluationDomainError("sample " + std::to_string(s) + " stayed singular after " +
                                  std::to_string(ctx.max_attempts) + " attempts");
    }
  }
  return out;
}

ZeroCheck zero_test(const std::vector<Expr>& exprs, const Chart& chart, const NumericContext& ctx) {
  ZeroCheck out;
  out.zero.assign(exprs.size(), true);
  out.residual.assign(exprs.size(), 0.0);
  std::vector<Expr> live;
  std::vector<std::size_t> where;
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    if (exprs[k].is_zero()) continue;
    if (exprs[k].is_rational()) {
      out.zero[k] = false;
      out.residual[k] = 1.0;
      continue;
    }
    live.push_back(exprs[k]);
    where.push_back(k);
  }
  if (!live.empty()) {
    SampledValues sv = sample_values(live, chart, ctx, ctx.samples);
    for (std::size_t s = 0; s < sv.values.size(); ++s) {
      for (std::size_t j = 0; j < live.size(); ++j) {
        const double v = std::abs(sv.values[s][j]);
        const double sc = sv.scales[s][j];
        const double rel = v == 0.0 ? 0.0 : v / std::max(sc, std::numeric_limits<double>::min());
        out.residual[where[j]] = std::max(out.residual[where[j]], rel);
      }
    }
    for (std::size_t j = 0; j < live.size(); ++j) out.zero[where[j]] = out.residual[where[j]] <= ctx.tolerance;
  }
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    out.all_zero = out.all_zero && out.zero[k];
    out.max_residual = std::max(out.max_residual, out.residual[k]);
  }
  return out;
}

bool is_identically_zero(const Expr& e, const Chart& chart, const NumericContext& ctx) {
  return zero_test({e}, chart, ctx).all_zero;
}

}  // namespace weaklie
