#pragma once

#include <optional>
#include <set>
#include <vector>

#include "weaklie/chart.hpp"
#include "weaklie/geometry.hpp"
#include "weaklie/numeric.hpp"
#include "weaklie/tensor.hpp"

namespace weaklie {

/// c_ij^k of [X_i, X_j] = c_ij^k X_k, stored densely at (i*m + j)*m + k.
class StructureFunctions {
 public:
  StructureFunctions() = default;
  explicit StructureFunctions(int m) : m_(m), c_(static_cast<std::size_t>(m * m * m)) {}

  int size() const { return m_; }
  const Expr& operator()(int i, int j, int k) const { return c_[index(i, j, k)]; }
  Expr& operator()(int i, int j, int k) { return c_[index(i, j, k)]; }
  /// Sets c_ij^k and c_ji^k = -c_ij^k.
  void set(int i, int j, int k, const Expr& value);
  const std::vector<Expr>& components() const { return c_; }

  /// Largest relative residual of the defining relation, filled by extraction.
  double residual_max = 0.0;

 private:
  std::size_t index(int i, int j, int k) const { return static_cast<std::size_t>((i * m_ + j) * m_ + k); }
  int m_ = 0;
  std::vector<Expr> c_;
};

struct ExtractionOptions {
  /// Coordinates the structure functions may depend on; empty means all.
  /// With a proper subset, the solve matches coefficients of the factors that
  /// involve the remaining coordinates, which allows m > n.
  std::set<int> structure_coordinates;
};

/// Solves [X_i,X_j] = c_ij^k X_k and verifies every component of the result.
/// Throws RankDeficientFrame or NotInvolutive.
StructureFunctions extract_structure_functions(const FrameSet& frame, const Chart& chart, const NumericContext& ctx,
                                               const ExtractionOptions& options = {});

/// Result of an extraction that reports NotInvolutive in-band.
struct Extraction {
  bool involutive = false;
  bool rank_deficient = false;
  std::string message;
  StructureFunctions c;
};
Extraction try_extract_structure_functions(const FrameSet& frame, const Chart& chart, const NumericContext& ctx,
                                           const ExtractionOptions& options = {});

/// [X_i,X_j]^a - c_ij^k xi_k^a for all i < j and a, in that order.
std::vector<Expr> structure_residual(const StructureFunctions& c, const FrameSet& frame);

bool is_lie_algebra(const StructureFunctions& c, const Chart& chart, const NumericContext& ctx);

struct ResidualReport {
  std::vector<Expr> residual;
  ZeroCheck check;
  bool zero() const { return check.all_zero; }
};

/// c_jk^l c_il^m + c_ij^l c_kl^m + c_ki^l c_jl^m + X_i c_jk^m + X_k c_ij^m + X_j c_ki^m
/// over all (i,j,k,m). Derivative terms vanish for constant c.
std::vector<Expr> jacobi_expressions(const StructureFunctions& c, const FrameSet& frame);
ResidualReport jacobi_residual(const StructureFunctions& c, const FrameSet& frame, const Chart& chart,
                               const NumericContext& ctx);

/// L_{X_i} L_{X_j} X_k - (c_jk^l c_il^m + X_i c_jk^m) X_m, components over (i,j,k,a).
ResidualReport liealg3_residual(const StructureFunctions& c, const FrameSet& frame, const Chart& chart,
                                const NumericContext& ctx);

using AlgebraForm = std::vector<std::vector<Expr>>;

/// sigma_ij = c_il^m c_jm^l.
AlgebraForm cartan_killing_sigma(const StructureFunctions& c);

enum class TauConvention {
  /// sigma_ij + 1/2 (X_i c_jm^m + X_j c_im^m); reproduces the worked examples.
  worked_examples,
  /// sigma_ij + X_i c_jm^m + X_j c_im^m, the factor 2 of the defining formula taken literally.
  literal_definition,
};

AlgebraForm extended_cartan_killing_tau(const StructureFunctions& c, const FrameSet& frame,
                                        TauConvention convention = TauConvention::worked_examples);

/// c_(i)(j)^(k) = (xi_i . xi_j) [delta^k_i - delta^k_j] with the dot product taken in g.
StructureFunctions inner_product_structure_functions(const FrameSet& frame, const TensorField& g);

}  // namespace weaklie
