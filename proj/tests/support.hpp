#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "weaklie/chart.hpp"
#include "weaklie/expr.hpp"
#include "weaklie/geometry.hpp"
#include "weaklie/numeric.hpp"
#include "weaklie/parse.hpp"
#include "weaklie/tensor.hpp"

namespace weaklie::testing {

/// Seeded generator of small random polynomial objects.
class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  Rational small(int range, int den) {
    std::uniform_int_distribution<int> d(-range, range);
    return Rational(d(rng_), den);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Expr linear(int n, int range, int den) {
    Expr e = 0;
    for (int c = 0; c < n; ++c) e += Expr(small(range, den)) * Expr::coord(c);
    return e;
  }

  Expr quadratic(int n) {
    Expr e = Expr(small(3, 2)) + linear(n, 3, 2);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) e += Expr(small(2, 4)) * Expr::coord(p) * Expr::coord(q);
    return e;
  }

  /// Diagonally dominant on the default sampling box.
  MetricField metric(int n) {
    std::vector<std::vector<Expr>> m(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
      m[a][a] = Expr(8 + a) + linear(n, 2, 8);
      for (int b = a + 1; b < n; ++b) m[a][b] = m[b][a] = Expr(small(2, 2)) + linear(n, 1, 8);
    }
    return MetricField::from_matrix(m);
  }

  VectorField field(int n) {
    std::vector<Expr> c(static_cast<std::size_t>(n));
    for (auto& e : c) e = quadratic(n);
    return VectorField(c);
  }

  TensorField tensor(int n, int upper, int lower) {
    TensorField t(n, upper, lower);
    for (auto& e : t.components()) e = quadratic(n);
    return t;
  }

  /// Random expression mixing polynomials, elementary functions and an opaque f.
  Expr mixed(int n) {
    Expr u = linear(n, 2, 3) + Expr(1);
    Expr e = quadratic(n);
    e += Expr(small(2, 1)) * sin(u) * Expr::coord(pick(n));
    e += Expr(small(2, 1)) * exp(Expr(small(1, 4)) * Expr::coord(pick(n)));
    e += Expr(small(2, 1)) * Expr::opaque("f", {Expr::coord(pick(n))});
    e += Expr(small(2, 1)) * pow(Expr(2) + Expr::coord(pick(n)), Rational(1, 2));
    return e;
  }

 private:
  std::mt19937_64 rng_;
};

inline bool zero(const Expr& e, const Chart& chart, const NumericContext& ctx = {}) {
  return is_identically_zero(e, chart, ctx);
}

inline bool zero(const TensorField& t, const Chart& chart, const NumericContext& ctx = {}) {
  return zero_test(t, chart, ctx).all_zero;
}

inline bool zero(const VectorField& v, const Chart& chart, const NumericContext& ctx = {}) {
  return zero_test(v, chart, ctx).all_zero;
}

inline Expr parse(const std::string& text, const Chart& chart, const Registry& registry = {}) {
  return parse_expression(text, chart, registry);
}

}  // namespace weaklie::testing
