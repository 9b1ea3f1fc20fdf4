#pragma once

#include <string>
#include <vector>

#include "weaklie/algebroid.hpp"
#include "weaklie/geometry.hpp"

namespace weaklie {

/// Single-generator classification. Every flag is backed by the stored
/// residual and its zero check.
struct GeneratorReport {
  std::string name;
  TensorField drag;
  TensorField drag2;
  ZeroCheck drag_check;
  ZeroCheck drag2_check;
  RankSignature drag_rank;

  bool is_motion = false;
  bool is_conformal = false;
  bool is_homothetic = false;
  bool is_weak_motion = false;
  bool is_genuine_weak = false;
  bool is_super_weak = false;

  /// lambda = g^{ab} (L g)_{ab} / n, meaningful when is_conformal.
  Expr lambda;
  ZeroCheck conformal_check;
  /// L L g - (lambda^2 + xi^s lambda_,s) g; only filled for conformal generators.
  ZeroCheck isomet4_check;

  /// L L g^{ab}, tested as det(g) (2 gamma g^{-1} gamma - L L g).
  ZeroCheck inverse_drag2_check;
  bool null_decomposition = false;
  Expr phi;
  std::vector<Expr> k;
};

GeneratorReport classify_generator(const MetricField& g, const VectorField& x, const Chart& chart,
                                   const NumericContext& ctx, const std::string& name = "X");

/// L L g^{ab} + g^{as} g^{bt} L L g_{st} - 2 g^{at} g^{bp} g^{sq} (L g_pq)(L g_st).
TensorField difsym_residual(const MetricField& g, const VectorField& x);

enum class CompleteSetMode { def2, def3 };

/// Matrix of [L_i L_j T == 0] for a frame acting on a tensor or a scalar.
struct CompleteSetReport {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> zero;
  std::vector<std::vector<double>> residual;
  /// L_i T == 0.
  std::vector<bool> single_zero;
  std::vector<double> single_residual;
  /// Ranks of L_i g; empty for scalars.
  std::vector<RankSignature> ranks;

  /// All i <= j entries vanish and at least one L_j T does not.
  bool def2_upper = false;
  /// All i >= j entries vanish and at least one L_j T does not.
  bool def2_lower = false;
  bool def2_pass = false;
  /// All diagonal entries vanish and no L_i T does.
  bool def3_pass = false;
  CompleteSetMode mode = CompleteSetMode::def3;
  bool pass() const { return mode == CompleteSetMode::def2 ? def2_pass : def3_pass; }
  bool all_zero() const;
};

CompleteSetReport complete_set_analysis(const TensorField& t, const FrameSet& frame, CompleteSetMode mode,
                                        const Chart& chart, const NumericContext& ctx);
CompleteSetReport complete_set_analysis(const MetricField& g, const FrameSet& frame, CompleteSetMode mode,
                                        const Chart& chart, const NumericContext& ctx);
CompleteSetReport scalar_weak_analysis(const Expr& f, const FrameSet& frame, CompleteSetMode mode,
                                       const Chart& chart, const NumericContext& ctx);

struct CommutatorReport {
  /// (L_i L_j - L_j L_i) g - c_ij^k L_k g, with and without the derivative
  /// correction 2 c_ij,(a^k g_b)c xi_k^c, per pair i < j.
  ZeroCheck plain;
  ZeroCheck corrected;
  bool constant_structure = false;
};

CommutatorReport commutator_consistency(const TensorField& g, const FrameSet& frame, const StructureFunctions& c,
                                        const Chart& chart, const NumericContext& ctx);

struct CollineationReport {
  TensorField affine;
  TensorField curvature;
  TensorField ricci;
  TensorField weak_affine;
  TensorField weak_curvature;
  TensorField weak_ricci;
  ZeroCheck affine_check;
  ZeroCheck curvature_check;
  ZeroCheck ricci_check;
  ZeroCheck weak_affine_check;
  ZeroCheck weak_curvature_check;
  ZeroCheck weak_ricci_check;

  /// Constant metrics only: the flat-space condition and its difference from
  /// weak_affine.
  bool flat = false;
  TensorField flat_condition;
  ZeroCheck flat_condition_check;
  ZeroCheck flat_agreement;

  /// Riemannian weak affine formula as printed, and with the two gamma /
  /// L gamma slots of its brackets exchanged; each compared to weak_affine.
  ZeroCheck riemcollin_printed;
  ZeroCheck riemcollin_exchanged;
};

CollineationReport collineation_analysis(const MetricField& g, const VectorField& x, const Chart& chart,
                                         const NumericContext& ctx, bool weak_curvature = true);

/// xi^s d_a d_b d_s xi^c + d_b d_s xi^c d_a xi^s + d_a d_s xi^c d_b xi^s - d_a d_b xi^s d_s xi^c at (c,a,b).
TensorField flat_weak_affine_condition(const VectorField& x);

struct IntegrabilityReport {
  /// nabla_b nabla_c xi_a + xi_d R'^d_bca - 1/2[nabla_b gamma_ac + nabla_c gamma_ba + nabla_a gamma_cb] at (a,b,c),
  /// with R' = -R the opposite-sign curvature convention.
  TensorField cond1;
  /// Same with -nabla_a gamma_cb in the bracket.
  TensorField cond1_corrected;
  ZeroCheck cond1_check;
  ZeroCheck cond1_corrected_check;
  bool flat = false;
  /// d_b d_c xi_a - [d_b xi_(a,c) + d_c xi_(b,a) + d_a xi_(c,b)] at (a,b,c).
  TensorField cond1a;
  ZeroCheck cond1a_check;
  /// Third-derivative chain minus its right-hand side, at (a,b,c,d).
  TensorField cond2;
  ZeroCheck cond2_check;
};

IntegrabilityReport integrability_residuals(const MetricField& g, const VectorField& x, const Chart& chart,
                                            const NumericContext& ctx, bool with_cond2 = true);

/// g_ab xi^b.
TensorField lower_index(const TensorField& g, const VectorField& x);

}  // namespace weaklie
