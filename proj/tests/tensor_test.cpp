#include <gtest/gtest.h>

#include "support.hpp"
#include "weaklie/catalog.hpp"

using namespace weaklie;
using weaklie::testing::parse;
using weaklie::testing::Random;
using weaklie::testing::zero;

namespace {

TensorField commutator_law(const VectorField& x, const VectorField& y, const TensorField& t) {
  return lie_derivative(x, lie_derivative(y, t)) - lie_derivative(y, lie_derivative(x, t)) -
         lie_derivative(lie_bracket(x, y), t);
}

}  // namespace

TEST(Tensor, ShapeAndIndexing) {
  TensorField t(3, 1, 2);
  EXPECT_EQ(t.size(), 27u);
  EXPECT_EQ(t.rank(), 3);
  t(2, 1, 0) = Expr::coord(1);
  EXPECT_EQ(t.at({2, 1, 0}), Expr::coord(1));
  EXPECT_EQ(t.unflatten(t.offset({2, 1, 0})), (std::vector<int>{2, 1, 0}));
  EXPECT_THROW(VectorField({Expr(1)}) + VectorField({Expr(1), Expr(2)}), Error);
}

TEST(Tensor, DeclaredSymmetryIsChecked) {
  Chart c = Chart::standard(2);
  NumericContext ctx;
  TensorField s = TensorField::from_matrix({{Expr(1), Expr::coord(0)}, {Expr::coord(0), Expr(2)}});
  EXPECT_NO_THROW(s.declare_symmetry({0, 1, false}, c, ctx));
  TensorField a = TensorField::from_matrix({{Expr(1), Expr::coord(0)}, {Expr::coord(1), Expr(2)}});
  EXPECT_THROW(a.declare_symmetry({0, 1, false}, c, ctx), InvariantViolation);
}

TEST(LieDerivative, ScalarAlongCoordinateField) {
  Chart c = Chart::standard(3);
  Registry r;
  r.add_opaque("f", 3);
  Expr f = parse("f(x0, x1, x2)", c, r);
  EXPECT_EQ(lie_derivative_scalar(VectorField::basis(3, 2), f), diff(f, 2));
}

TEST(LieBracket, ExtendedAlgebraPair) {
  Chart c = Chart::standard(2);
  Registry r;
  r.add_opaque("f", 1).add_opaque("h", 1);
  VectorField x({Expr(0), parse("f(x0)", c, r)});
  VectorField y({parse("h(x1)", c, r), Expr(0)});
  VectorField expected({parse("f(x0)*h'(x1)", c, r), parse("-h(x1)*f'(x0)", c, r)});
  EXPECT_TRUE(zero(lie_bracket(x, y) - expected, c));
}

TEST(LieBracket, PolarRotationGenerators) {
  ExampleSpec s = instantiate("sss_frame");
  // xi3, xi4 close onto xi2 up to sign.
  VectorField b = lie_bracket(s.frame[2], s.frame[3]);
  bool plus = zero(b + s.frame[1], s.chart);
  bool minus = zero(b - s.frame[1], s.chart);
  EXPECT_TRUE(plus || minus);
}

TEST(LieBracket, Antisymmetry) {
  Chart c = Chart::standard(3);
  Random rng(21);
  for (int k = 0; k < 10; ++k) {
    VectorField x = rng.field(3), y = rng.field(3);
    EXPECT_TRUE(zero(lie_bracket(x, y) + lie_bracket(y, x), c));
  }
}

TEST(LieBracket, Jacobi) {
  Chart c = Chart::standard(3);
  Random rng(22);
  for (int k = 0; k < 10; ++k) {
    VectorField x = rng.field(3), y = rng.field(3), z = rng.field(3);
    VectorField j = lie_bracket(z, lie_bracket(x, y)) + lie_bracket(y, lie_bracket(z, x)) +
                    lie_bracket(x, lie_bracket(y, z));
    EXPECT_TRUE(zero(j, c));
  }
}

TEST(LieDerivative, CommutatorLaw) {
  Chart c = Chart::standard(3);
  Random rng(23);
  for (int k = 0; k < 6; ++k) {
    VectorField x = rng.field(3), y = rng.field(3);
    EXPECT_TRUE(zero(commutator_law(x, y, rng.tensor(3, 0, 2)), c));
    EXPECT_TRUE(zero(commutator_law(x, y, rng.tensor(3, 1, 0)), c));
    EXPECT_TRUE(zero(commutator_law(x, y, rng.tensor(3, 1, 1)), c));
  }
}

TEST(LieDerivative, Leibniz) {
  Chart c = Chart::standard(3);
  Random rng(24);
  for (int k = 0; k < 6; ++k) {
    VectorField x = rng.field(3);
    Expr f = rng.mixed(3);
    TensorField t = rng.tensor(3, 1, 1);
    TensorField lhs = lie_derivative(x, f * t);
    TensorField rhs = lie_derivative_scalar(x, f) * t + f * lie_derivative(x, t);
    EXPECT_TRUE(zero(lhs - rhs, c));
  }
}

TEST(LieDerivative, ContractionCompatibility) {
  Chart c = Chart::standard(3);
  Random rng(25);
  for (int k = 0; k < 6; ++k) {
    VectorField x = rng.field(3), eta = rng.field(3);
    TensorField g = rng.metric(3).tensor();
    TensorField e = TensorField::from_vector(eta);
    TensorField lhs = lie_derivative(x, contract(outer(e, g), 0, 0));
    TensorField rhs = contract(outer(e, lie_derivative(x, g)), 0, 0) +
                      contract(outer(TensorField::from_vector(lie_bracket(x, eta)), g), 0, 0);
    EXPECT_TRUE(zero(lhs - rhs, c));
  }
}

TEST(LieDerivative, MixedSlotsCompatibleWithContraction) {
  Chart c = Chart::standard(3);
  Random rng(26);
  for (int k = 0; k < 4; ++k) {
    VectorField x = rng.field(3);
    TensorField t = rng.tensor(3, 1, 1);
    // Trace commutes with Lie dragging.
    Expr lhs = lie_derivative_scalar(x, contract(t, 0, 0)(0));
    Expr rhs = contract(lie_derivative(x, t), 0, 0)(0);
    EXPECT_TRUE(zero(lhs - rhs, c));
  }
}

TEST(LieDerivative, PreservesSymmetry) {
  Chart c = Chart::standard(3);
  Random rng(27);
  NumericContext ctx;
  for (int k = 0; k < 5; ++k) {
    TensorField l = lie_derivative(rng.field(3), rng.metric(3).tensor());
    EXPECT_NO_THROW(l.declare_symmetry({0, 1, false}, c, ctx));
  }
}

TEST(LieDerivative, IteratedAppliesRightToLeft) {
  Chart c = Chart::standard(2);
  Random rng(28);
  VectorField x = rng.field(2), y = rng.field(2);
  TensorField t = rng.tensor(2, 0, 2);
  EXPECT_TRUE(zero(iterated_lie({x, y}, t) - lie_derivative(x, lie_derivative(y, t)), c));
  Expr f = rng.mixed(2);
  EXPECT_TRUE(zero(iterated_lie({x, y}, f) - lie_derivative_scalar(x, lie_derivative_scalar(y, f)), c));
}

TEST(Tensor, PermuteAndOuter) {
  Random rng(29);
  TensorField a = rng.tensor(2, 0, 2);
  TensorField p = permute(a, {1, 0});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(p(i, j), a(j, i));
  TensorField v = TensorField::from_vector(VectorField({Expr(1), Expr(2)}));
  TensorField o = outer(v, v);
  EXPECT_EQ(o.upper(), 2);
  EXPECT_EQ(o(1, 1), Expr(4));
}
