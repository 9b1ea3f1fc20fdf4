#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "weaklie/chart.hpp"
#include "weaklie/errors.hpp"
#include "weaklie/expr.hpp"

namespace weaklie {

struct NumericContext {
  std::uint64_t seed = 0;
  int samples = 16;
  double tolerance = 1e-9;
  int degree = 4;
  /// Resample attempts per sample point before giving up on a singular draw.
  int max_attempts = 10;

  void validate() const;
};

/// Random polynomial of total degree <= d with coefficients in [-2, 2];
/// derivatives are exact, so f, f', f'' stay consistent per instance.
class PolynomialInstance {
 public:
  PolynomialInstance() = default;
  static PolynomialInstance random(int arity, int degree, std::uint64_t seed);
  /// From explicit monomials (exponent vectors) and coefficients.
  PolynomialInstance(int arity, std::vector<std::vector<int>> exponents, std::vector<double> coefficients);

  int arity() const { return arity_; }
  double evaluate(const std::vector<double>& x, const std::vector<int>& orders) const;
  /// Sum of absolute term magnitudes; bounds rounding error of evaluate().
  double magnitude(const std::vector<double>& x, const std::vector<int>& orders) const;

 private:
  int arity_ = 0;
  std::vector<std::vector<int>> exponents_;
  std::vector<double> coefficients_;
};

using OpaqueCallable = std::function<double(const std::vector<double>& args, const std::vector<int>& orders)>;

struct Bindings {
  std::vector<double> point;
  std::map<std::string, double> parameters;
  std::map<std::string, PolynomialInstance> polynomials;
  std::map<std::string, OpaqueCallable> callables;
};

/// IEEE evaluation; throws EvaluationDomainError on singularities.
double evaluate_numeric(const Expr& e, const Bindings& bindings);

struct ZeroCheck {
  std::vector<bool> zero;
  /// Max over samples of |value| / magnitude scale; 0 for structural zeros.
  std::vector<double> residual;
  bool all_zero = true;
  double max_residual = 0.0;
};

/// Shared-sample zero test over a batch of expressions.
ZeroCheck zero_test(const std::vector<Expr>& exprs, const Chart& chart, const NumericContext& ctx);

bool is_identically_zero(const Expr& e, const Chart& chart, const NumericContext& ctx);

struct SampledValues {
  std::vector<Bindings> bindings;
  /// values[s][k] is exprs[k] at sample s.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> scales;
};

/// Evaluates exprs at `count` seeded sample points (resampling singular draws).
SampledValues sample_values(const std::vector<Expr>& exprs, const Chart& chart, const NumericContext& ctx,
                            int count);

/// The bindings the oracle would draw for (sample, attempt); exposed for tests.
Bindings draw_bindings(const Chart& chart, const NumericContext& ctx, const SymbolSet& symbols, int sample,
                       int attempt);

}  // namespace weaklie
