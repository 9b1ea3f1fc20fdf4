#pragma once

#include <string>
#include <vector>

#include "weaklie/chart.hpp"
#include "weaklie/expr.hpp"
#include "weaklie/numeric.hpp"

namespace weaklie {

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Expr> components);
  /// The coordinate field d/dx^a.
  static VectorField basis(int n, int a);

  int dim() const { return static_cast<int>(c_.size()); }
  const Expr& operator[](int a) const { return c_[static_cast<std::size_t>(a)]; }
  Expr& operator[](int a) { return c_[static_cast<std::size_t>(a)]; }
  const std::vector<Expr>& components() const { return c_; }

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expr& f, const VectorField& v);

 private:
  std::vector<Expr> c_;
};

/// Ordered list of generators with display names.
struct FrameSet {
  std::vector<std::string> names;
  std::vector<VectorField> fields;

  int size() const { return static_cast<int>(fields.size()); }
  const VectorField& operator[](int i) const { return fields[static_cast<std::size_t>(i)]; }
  void add(std::string name, VectorField field);
};

/// (p,q) tensor field with dense storage; upper indices come first in the
/// flattened index order.
class TensorField {
 public:
  TensorField() = default;
  TensorField(int dim, int upper, int lower);
  TensorField(int dim, int upper, int lower, std::vector<Expr> components);
  static TensorField from_vector(const VectorField& v);
  static TensorField from_matrix(const std::vector<std::vector<Expr>>& m);

  int dim() const { return n_; }
  int upper() const { return p_; }
  int lower() const { return q_; }
  int rank() const { return p_ + q_; }
  std::size_t size() const { return c_.size(); }

  std::size_t offset(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t offset) const;
  const Expr& at(const std::vector<int>& idx) const { return c_[offset(idx)]; }
  Expr& at(const std::vector<int>& idx) { return c_[offset(idx)]; }
  const Expr& operator()(int a) const { return c_[static_cast<std::size_t>(a)]; }
  const Expr& operator()(int a, int b) const { return c_[static_cast<std::size_t>(a * n_ + b)]; }
  Expr& operator()(int a, int b) { return c_[static_cast<std::size_t>(a * n_ + b)]; }
  const Expr& operator()(int a, int b, int c) const { return c_[static_cast<std::size_t>((a * n_ + b) * n_ + c)]; }
  Expr& operator()(int a, int b, int c) { return c_[static_cast<std::size_t>((a * n_ + b) * n_ + c)]; }
  const Expr& operator()(int a, int b, int c, int d) const {
    return c_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)];
  }
  Expr& operator()(int a, int b, int c, int d) { return c_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)]; }

  const std::vector<Expr>& components() const { return c_; }
  std::vector<Expr>& components() { return c_; }

  bool structurally_zero() const;
  std::vector<std::vector<Expr>> matrix() const;

  friend TensorField operator+(const TensorField& a, const TensorField& b);
  friend TensorField operator-(const TensorField& a, const TensorField& b);
  friend TensorField operator*(const Expr& f, const TensorField& t);

  /// Declared index symmetry on a pair of slots (flattened positions).
  struct SlotSymmetry {
    int first;
    int second;
    bool antisymmetric;
  };
  const std::vector<SlotSymmetry>& symmetries() const { return sym_; }
  /// Records the symmetry after checking it with the zero oracle; throws
  /// InvariantViolation when it does not hold.
  TensorField& declare_symmetry(SlotSymmetry s, const Chart& chart, const NumericContext& ctx);
  /// Residual components T(..a..b..) -+ T(..b..a..).
  std::vector<Expr> symmetry_residual(SlotSymmetry s) const;

 private:
  int n_ = 0;
  int p_ = 0;
  int q_ = 0;
  std::vector<Expr> c_;
  std::vector<SlotSymmetry> sym_;
};

ZeroCheck zero_test(const TensorField& t, const Chart& chart, const NumericContext& ctx);
ZeroCheck zero_test(const VectorField& v, const Chart& chart, const NumericContext& ctx);

/// X f = xi^c d_c f.
Expr lie_derivative_scalar(const VectorField& x, const Expr& f);

/// [X,Y]^a = xi^c d_c eta^a - eta^c d_c xi^a.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Lie derivative of a (p,q) field; covariant slots gain +T d xi, contravariant
/// slots -T d xi.
TensorField lie_derivative(const VectorField& x, const TensorField& t);

/// L_{X1} L_{X2} ... L_{Xk} applied right to left.
TensorField iterated_lie(const std::vector<VectorField>& xs, const TensorField& t);
Expr iterated_lie(const std::vector<VectorField>& xs, const Expr& f);

/// Contracts upper slot `u` with lower slot `l` (slot numbers within their group).
TensorField contract(const TensorField& t, int u, int l);

/// Outer product; upper slots of a, then of b, then lower of a, then of b.
TensorField outer(const TensorField& a, const TensorField& b);

/// Reorders slots: result slot k takes source slot perm[k]; the upper/lower
/// split must be preserved by the permutation.
TensorField permute(const TensorField& t, const std::vector<int>& perm);

}  // namespace weaklie
