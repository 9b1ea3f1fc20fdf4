#include <gtest/gtest.h>

#include "support.hpp"
#include "weaklie/algebroid.hpp"
#include "weaklie/catalog.hpp"

using namespace weaklie;
using weaklie::testing::parse;
using weaklie::testing::Random;
using weaklie::testing::zero;

namespace {

Expr x(int i) { return Expr::coord(i); }

/// tr(ad_i ad_j) with (ad_i)^p_q = c_iq^p.
AlgebraForm brute_sigma(const StructureFunctions& c) {
  int m = c.size();
  AlgebraForm s(static_cast<std::size_t>(m), std::vector<Expr>(static_cast<std::size_t>(m), Expr(0)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Expr t = 0;
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) t += c(i, q, p) * c(j, p, q);
      s[i][j] = t;
    }
  return s;
}

StructureFunctions so3() {
  StructureFunctions c(3);
  c.set(0, 1, 2, 1);
  c.set(1, 2, 0, 1);
  c.set(2, 0, 1, 1);
  return c;
}

FrameSet constant_frame(int n) {
  FrameSet f;
  for (int i = 0; i < n; ++i) f.add("E" + std::to_string(i), VectorField::basis(n, i));
  return f;
}

}  // namespace

TEST(Extraction, MachPoincarePair) {
  Chart c = Chart::standard(2);
  Registry r;
  r.add_opaque("f", 1).add_opaque("h", 1);
  FrameSet fr;
  fr.add("X1", VectorField({Expr(0), parse("f(x0)", c, r)}));
  fr.add("X2", VectorField({parse("h(x1)", c, r), Expr(0)}));
  StructureFunctions s = extract_structure_functions(fr, c, {});
  Expr F = parse("f'(x0)/f(x0)", c, r), H = parse("h'(x1)/h(x1)", c, r);
  EXPECT_TRUE(zero(s(0, 1, 0) + parse("h(x1)", c, r) * F, c));
  EXPECT_TRUE(zero(s(0, 1, 1) - parse("f(x0)", c, r) * H, c));
}

TEST(Extraction, TwoDimensionalExample) {
  ExampleSpec e = instantiate("two_dim_extended");
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {});
  Registry r = e.registry;
  EXPECT_TRUE(zero(s(0, 1, 0) + parse("xi'[0,1](x1, x2)", e.chart, r), e.chart));
  EXPECT_TRUE(zero(s(0, 1, 1) - parse("xi'[1,0](x1, x2)", e.chart, r), e.chart));
}

TEST(Extraction, IndependentPairIsInvolutiveOverFunctions) {
  Chart c = Chart::standard(2);
  FrameSet fr;
  fr.add("X1", VectorField::basis(2, 0));
  fr.add("X2", VectorField({Expr(0), x(0)}));
  StructureFunctions s = extract_structure_functions(fr, c, {});
  EXPECT_TRUE(zero(s(0, 1, 1) - Expr(1) / x(0), c));
  EXPECT_TRUE(s(0, 1, 0).is_zero());
}

TEST(Extraction, LeavingTheSpanIsNotInvolutive) {
  Chart c = Chart::standard(3);
  FrameSet fr;
  fr.add("X1", VectorField::basis(3, 0));
  fr.add("X2", VectorField({Expr(0), Expr(1), x(0)}));
  EXPECT_THROW(extract_structure_functions(fr, c, {}), NotInvolutive);
  Extraction ex = try_extract_structure_functions(fr, c, {});
  EXPECT_FALSE(ex.involutive);
  EXPECT_FALSE(ex.rank_deficient);
  EXPECT_FALSE(ex.message.empty());
}

TEST(Extraction, RankDeficientFrame) {
  ExampleSpec e = instantiate("two_dim_aligned");
  EXPECT_THROW(extract_structure_functions(e.frame, e.chart, {}), RankDeficientFrame);
}

TEST(Extraction, CertificatesOnRandomFrames) {
  Chart c = Chart::standard(2);
  Random rng(51);
  for (int k = 0; k < 6; ++k) {
    FrameSet fr;
    fr.add("X1", rng.field(2));
    fr.add("X2", rng.field(2));
    Extraction ex = try_extract_structure_functions(fr, c, {});
    ASSERT_TRUE(ex.involutive);
    const StructureFunctions& s = ex.c;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) EXPECT_TRUE(zero(s(i, j, l) + s(j, i, l), c));
    for (const auto& e : structure_residual(s, fr)) EXPECT_TRUE(zero(e, c));
    EXPECT_TRUE(jacobi_residual(s, fr, c, {}).zero());
    EXPECT_TRUE(liealg3_residual(s, fr, c, {}).zero());
  }
}

TEST(Extraction, G3ConstantsAfterCorrection) {
  ExampleSpec e = instantiate("g3_frame");
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {});
  EXPECT_TRUE(is_lie_algebra(s, e.chart, {}));
  EXPECT_EQ(s(1, 2, 0), Expr(1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        if (!(i == 1 && j == 2 && l == 0) && !(i == 2 && j == 1 && l == 0)) EXPECT_TRUE(s(i, j, l).is_zero());
}

TEST(Extraction, RigidBodyIsNotALieAlgebra) {
  ExampleSpec e = instantiate("rigid_body");
  ExtractionOptions opt;
  opt.structure_coordinates = e.structure_coordinates;
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {}, opt);
  EXPECT_FALSE(is_lie_algebra(s, e.chart, {}));
  EXPECT_TRUE(jacobi_residual(s, e.frame, e.chart, {}).zero());
  EXPECT_TRUE(liealg3_residual(s, e.frame, e.chart, {}).zero());
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int l = 0; l < 7; ++l)
        for (int a = 1; a < 4; ++a) EXPECT_FALSE(depends_on_coord(s(i, j, l), a));
}

TEST(Jacobi, InconsistentConstantsAreDetected) {
  StructureFunctions c(3);
  c.set(0, 1, 0, 1);
  c.set(1, 2, 1, 1);
  c.set(0, 2, 2, 1);
  Chart ch = Chart::standard(3);
  ResidualReport r = jacobi_residual(c, constant_frame(3), ch, {});
  EXPECT_FALSE(r.zero());
  // Brute-force: cyclic sum of [[e_i,e_j],e_k] for (0,1,2), component 2.
  Expr direct = 0;
  for (int l = 0; l < 3; ++l) direct += c(0, 1, l) * c(l, 2, 2) + c(1, 2, l) * c(l, 0, 2) + c(2, 0, l) * c(l, 1, 2);
  EXPECT_FALSE(direct.is_zero());
}

TEST(CartanKilling, TwoDimensionalAffineAlgebra) {
  StructureFunctions c(2);
  c.set(0, 1, 0, 1);
  AlgebraForm s = cartan_killing_sigma(c);
  EXPECT_EQ(s[0][0], Expr(0));
  EXPECT_EQ(s[0][1], Expr(0));
  EXPECT_EQ(s[1][1], Expr(1));
  EXPECT_EQ(brute_sigma(c), s);
}

TEST(CartanKilling, So3IsMinusTwoDelta) {
  AlgebraForm s = cartan_killing_sigma(so3());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(s[i][j], Expr(i == j ? -2 : 0));
}

TEST(CartanKilling, SymmetricAndMatchesBruteForce) {
  ExampleSpec e = instantiate("rigid_body");
  ExtractionOptions opt;
  opt.structure_coordinates = e.structure_coordinates;
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {}, opt);
  AlgebraForm sigma = cartan_killing_sigma(s);
  AlgebraForm ref = brute_sigma(s);
  AlgebraForm tau = extended_cartan_killing_tau(s, e.frame);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      EXPECT_TRUE(zero(sigma[i][j] - ref[i][j], e.chart));
      EXPECT_TRUE(zero(sigma[i][j] - sigma[j][i], e.chart));
      EXPECT_TRUE(zero(tau[i][j] - tau[j][i], e.chart));
    }
}

TEST(ExtendedCartanKilling, EqualsSigmaForLieAlgebras) {
  ExampleSpec e = instantiate("g3_frame");
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {});
  AlgebraForm sigma = cartan_killing_sigma(s);
  EXPECT_EQ(extended_cartan_killing_tau(s, e.frame), sigma);
  EXPECT_EQ(extended_cartan_killing_tau(s, e.frame, TauConvention::literal_definition), sigma);
}

TEST(ExtendedCartanKilling, TwoDimensionalExample) {
  ExampleSpec e = instantiate("two_dim_extended");
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {});
  AlgebraForm tau = extended_cartan_killing_tau(s, e.frame);
  Expr xi = e.frame[0][0];
  Expr sq = xi * xi;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      EXPECT_TRUE(zero(tau[i][j] - Expr(Rational(1, 2)) * diff(diff(sq, i), j), e.chart)) << i << j;
}

TEST(ExtendedCartanKilling, LiteralWeightMissesTheDisplay) {
  ExampleSpec e = instantiate("two_dim_extended");
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {});
  AlgebraForm tau = extended_cartan_killing_tau(s, e.frame, TauConvention::literal_definition);
  Expr sq = e.frame[0][0] * e.frame[0][0];
  EXPECT_FALSE(zero(tau[0][0] - Expr(Rational(1, 2)) * diff(diff(sq, 0), 0), e.chart));
}

TEST(ExtendedCartanKilling, RigidBodyDiagonal) {
  ExampleSpec e = instantiate("rigid_body");
  ExtractionOptions opt;
  opt.structure_coordinates = e.structure_coordinates;
  StructureFunctions s = extract_structure_functions(e.frame, e.chart, {}, opt);
  AlgebraForm tau = extended_cartan_killing_tau(s, e.frame);
  Registry r = e.registry;
  Expr t00 = parse("f1''(x0)/f1(x0) + f2''(x0)/f2(x0) + f3''(x0)/f3(x0) + w23''(x0)/w23(x0) + "
                   "w13''(x0)/w13(x0) + w12''(x0)/w12(x0)",
                   e.chart, r);
  EXPECT_TRUE(zero(tau[0][0] - t00, e.chart));
  EXPECT_TRUE(zero(tau[4][4] + Expr(4) * parse("w23(x0)^2", e.chart, r), e.chart));
  EXPECT_TRUE(zero(tau[5][5] + Expr(4) * parse("w13(x0)^2", e.chart, r), e.chart));
  EXPECT_TRUE(zero(tau[6][6] + Expr(4) * parse("w12(x0)^2", e.chart, r), e.chart));
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i != j || (i >= 1 && i <= 3)) EXPECT_TRUE(zero(tau[i][j], e.chart)) << i << j;
  RankSignature rs = rank_and_signature(tau, e.chart, {});
  EXPECT_EQ(rs.rank, 4);
}

TEST(InnerProduct, OrthonormalFrameGivesZeroForm) {
  ExampleSpec eu = instantiate("euclidean", {{"n", "3"}});
  StructureFunctions c = inner_product_structure_functions(eu.frame, eu.metric->tensor());
  for (const auto& e : c.components()) EXPECT_TRUE(e.is_zero());
}

TEST(InnerProduct, TauDependsOnlyOnGramMatrix) {
  Chart c = Chart::standard(2);
  MetricField g = MetricField::diagonal({Expr(1), Expr(1)});
  FrameSet a, b;
  a.add("A1", VectorField({Expr(1), x(0)}));
  a.add("A2", VectorField({Expr(2), Expr(1)}));
  // Reflection x1 -> -x1 preserves every inner product.
  b.add("B1", VectorField({Expr(1), -x(0)}));
  b.add("B2", VectorField({Expr(2), Expr(-1)}));
  StructureFunctions ca = inner_product_structure_functions(a, g.tensor());
  StructureFunctions cb = inner_product_structure_functions(b, g.tensor());
  AlgebraForm sa = cartan_killing_sigma(ca), sb = cartan_killing_sigma(cb);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_TRUE(zero(sa[i][j] - sb[i][j], c));
}
