#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "weaklie/chart.hpp"
#include "weaklie/numeric.hpp"
#include "weaklie/tensor.hpp"

namespace weaklie {

/// Symmetric (0,2) metric with a lazily computed exact inverse.
class MetricField {
 public:
  MetricField() = default;
  /// Throws InvariantViolation unless g is a structurally symmetric (0,2) field.
  explicit MetricField(TensorField g);
  static MetricField from_matrix(const std::vector<std::vector<Expr>>& m);
  static MetricField diagonal(const std::vector<Expr>& d);

  int dim() const { return g_.dim(); }
  const TensorField& tensor() const { return g_; }
  const Expr& operator()(int a, int b) const { return g_(a, b); }

  const Expr& determinant() const;
  /// g^{ab} as a (2,0) field; throws DegenerateMetric if det is structurally 0.
  const TensorField& inverse() const;
  /// det(g) g^{ab} as a (2,0) field; free of the det^-1 factor.
  const TensorField& adjugate() const;

  /// Throws DegenerateMetric when det g vanishes identically.
  void require_nondegenerate(const Chart& chart, const NumericContext& ctx) const;
  /// g^{ac} g_{cb} - delta^a_b.
  TensorField inverse_residual() const;

 private:
  struct Cache {
    std::once_flag once;
    Expr det;
    TensorField inv;
    TensorField adj;
  };
  void fill() const;
  TensorField g_;
  std::shared_ptr<Cache> cache_;
};

/// Gamma^c_ab stored at (c,a,b).
TensorField christoffel(const MetricField& g);

struct CurvatureBundle {
  /// R^a_bcd at (a,b,c,d), antisymmetric in c,d.
  TensorField riemann;
  /// R_bd = R^a_bad.
  TensorField ricci;
  Expr scalar;
  TensorField einstein;
};

TensorField riemann_from_connection(const TensorField& gamma);
CurvatureBundle curvature(const MetricField& g);

/// nabla T with the derivative index appended as the last lower slot.
TensorField covariant_derivative(const TensorField& t, const TensorField& gamma);

/// L_xi Gamma by the Lie rule on components plus d_a d_b xi^c.
TensorField lie_derivative_connection_direct(const TensorField& gamma, const VectorField& x);
/// nabla_a nabla_b xi^c + R^c_bda xi^d at (c,a,b).
TensorField lie_derivative_connection_identity(const TensorField& gamma, const TensorField& riemann,
                                               const VectorField& x);
/// Computes both routes and throws ConventionMismatch if they disagree.
TensorField lie_derivative_connection(const MetricField& g, const VectorField& x, const Chart& chart,
                                      const NumericContext& ctx);

/// K = R/2 for a 2-dimensional metric.
Expr gaussian_curvature_2d(const MetricField& g);

struct RankSignature {
  int rank = 0;
  int plus = 0;
  int minus = 0;
  int zero = 0;
  /// Sample index the signature was read at.
  int sample = 0;
};

/// Generic rank over the oracle's sample points and signature at the first
/// sample attaining it.
RankSignature rank_and_signature(const std::vector<std::vector<Expr>>& form, const Chart& chart,
                                 const NumericContext& ctx);
RankSignature rank_and_signature(const TensorField& form, const Chart& chart, const NumericContext& ctx);

struct DragResult {
  TensorField gamma;
  std::string generator;
  std::string metric;
  int rank = 0;
  /// gamma = Phi k_a k_b with g^{ab} k_a k_b = 0.
  bool null_decomposition = false;
  Expr phi;
  std::vector<Expr> k;
};

DragResult drag(const MetricField& g, const VectorField& x, const Chart& chart, const NumericContext& ctx,
                const std::string& generator = "X", const std::string& metric = "g");

/// Attempts gamma = Phi k k with g-null k; fills phi, k and the flag.
void null_decompose(const MetricField& g, DragResult& d, const Chart& chart, const NumericContext& ctx);

}  // namespace weaklie
