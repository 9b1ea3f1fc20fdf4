#include <gtest/gtest.h>

#include "support.hpp"
#include "weaklie/catalog.hpp"
#include "weaklie/symmetry.hpp"

using namespace weaklie;
using weaklie::testing::parse;
using weaklie::testing::Random;
using weaklie::testing::zero;

namespace {

Expr x(int i) { return Expr::coord(i); }

GeneratorReport classify(const ExampleSpec& s, int i, const NumericContext& ctx = {}) {
  return classify_generator(*s.metric, s.frame[i], s.chart, ctx, s.frame.names[static_cast<std::size_t>(i)]);
}

void expect_backed(const GeneratorReport& r) {
  if (r.is_motion) EXPECT_TRUE(r.drag_check.all_zero);
  if (r.is_weak_motion) EXPECT_TRUE(r.drag2_check.all_zero);
  if (r.is_conformal) EXPECT_TRUE(r.conformal_check.all_zero);
  if (r.is_motion) {
    EXPECT_TRUE(r.is_weak_motion);
    EXPECT_FALSE(r.is_genuine_weak);
  }
  if (r.is_genuine_weak) EXPECT_FALSE(r.drag_check.all_zero);
}

}  // namespace

TEST(Classify, G3GeneratorsAreMotions) {
  ExampleSpec s = instantiate("g3_metric");
  for (int i = 0; i < 3; ++i) {
    GeneratorReport r = classify(s, i);
    EXPECT_TRUE(r.is_motion) << s.frame.names[i];
    EXPECT_FALSE(r.is_genuine_weak);
    EXPECT_EQ(r.drag_rank.rank, 0);
    expect_backed(r);
  }
}

TEST(Classify, KasnerTimeTranslationIsNotAMotion) {
  ExampleSpec s = instantiate("kasner");
  GeneratorReport t = classify(s, 0);
  EXPECT_FALSE(t.is_motion);
  EXPECT_FALSE(t.is_weak_motion);
  EXPECT_EQ(t.drag_rank.rank, 3);
  GeneratorReport p = classify(s, 2);
  EXPECT_TRUE(p.is_motion);
}

TEST(Classify, MinkowskiHomothety) {
  ExampleSpec s = instantiate("appendix3_solution", {{"F01", "0"}});
  GeneratorReport r = classify(s, 0);
  EXPECT_TRUE(r.is_conformal);
  EXPECT_TRUE(r.is_homothetic);
  EXPECT_FALSE(r.is_motion);
  EXPECT_TRUE(zero(r.lambda - Expr(2) * Expr::param("c0"), s.chart));
  EXPECT_TRUE(r.isomet4_check.all_zero);
  expect_backed(r);
}

TEST(Classify, ConformalKillingInTwoDimensions) {
  Chart c = Chart::standard(2);
  MetricField g = MetricField::diagonal({Expr(1), Expr(1)});
  // Real and imaginary part of z^2 generate a conformal map.
  VectorField v({x(0) * x(0) - x(1) * x(1), Expr(2) * x(0) * x(1)});
  GeneratorReport r = classify_generator(g, v, c, {});
  EXPECT_TRUE(r.is_conformal);
  EXPECT_FALSE(r.is_homothetic);
  EXPECT_TRUE(zero(r.lambda - Expr(4) * x(0), c));
  EXPECT_TRUE(zero(lie_derivative(v, g.tensor()) - r.lambda * g.tensor(), c));
  EXPECT_TRUE(r.isomet4_check.all_zero);
}

TEST(Classify, WeaklyStaticTimeIsGenuineWeak) {
  ExampleSpec s = instantiate("weakly_static");
  GeneratorReport r = classify(s, 0);
  EXPECT_TRUE(r.is_weak_motion);
  EXPECT_TRUE(r.is_genuine_weak);
  EXPECT_FALSE(r.is_motion);
  EXPECT_TRUE(zero(r.drag2, s.chart));
  EXPECT_FALSE(zero(r.drag, s.chart));
  expect_backed(r);
}

TEST(Classify, SuperWeakNullDrag) {
  // g = 2 dx0 dx1 + x0^2 dx0^2 with T = d1 and X = x0 d1: gamma = 2 (dx0)^2, k = dx0 null.
  Chart c = Chart::standard(2);
  MetricField g = MetricField::from_matrix({{x(0) * x(0), Expr(1)}, {Expr(1), Expr(0)}});
  VectorField v({Expr(0), x(0)});
  GeneratorReport r = classify_generator(g, v, c, {});
  EXPECT_TRUE(r.is_weak_motion);
  EXPECT_TRUE(r.is_super_weak);
  EXPECT_EQ(r.drag_rank.rank, 1);
  ASSERT_TRUE(r.null_decomposition);
  TensorField kk(2, 0, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) kk(a, b) = r.phi * r.k[a] * r.k[b];
  EXPECT_TRUE(zero(kk - r.drag, c));
}

TEST(Classify, FlagsStableUnderSeedChange) {
  for (const char* name : {"g3_metric", "kasner", "weakly_static", "appendix3_solution", "weak_affine_minkowski"}) {
    ExampleSpec s = instantiate(name);
    NumericContext a, b;
    b.seed = 4242;
    for (int i = 0; i < s.frame.size(); ++i) {
      GeneratorReport ra = classify(s, i, a), rb = classify(s, i, b);
      EXPECT_EQ(ra.is_motion, rb.is_motion) << name;
      EXPECT_EQ(ra.is_conformal, rb.is_conformal) << name;
      EXPECT_EQ(ra.is_homothetic, rb.is_homothetic) << name;
      EXPECT_EQ(ra.is_weak_motion, rb.is_weak_motion) << name;
      EXPECT_EQ(ra.is_genuine_weak, rb.is_genuine_weak) << name;
      EXPECT_EQ(ra.is_super_weak, rb.is_super_weak) << name;
      expect_backed(ra);
    }
  }
}

TEST(Difsym, IdentityOnRandomMetrics) {
  Chart c = Chart::standard(2);
  Random rng(41);
  for (int k = 0; k < 10; ++k) EXPECT_TRUE(zero(difsym_residual(rng.metric(2), rng.field(2)), c));
}

TEST(CompleteSet, IsometryFrameIsNotGenuine) {
  ExampleSpec s = instantiate("g3_metric");
  NumericContext ctx;
  CompleteSetReport r = complete_set_analysis(*s.metric, s.frame, CompleteSetMode::def3, s.chart, ctx);
  EXPECT_TRUE(r.all_zero());
  EXPECT_FALSE(r.def3_pass);
  EXPECT_FALSE(r.def2_pass);
}

TEST(CompleteSet, RotationTripleFailsDef2) {
  ExampleSpec s = instantiate("weak_sss");
  NumericContext ctx;
  FrameSet so3;
  for (int i = 1; i < 4; ++i) so3.add(s.frame.names[i], s.frame[i]);
  CompleteSetReport r = complete_set_analysis(*s.form, so3, CompleteSetMode::def2, s.chart, ctx);
  EXPECT_FALSE(r.def2_pass);
  TensorField w = iterated_lie({s.frame[2], s.frame[3]}, *s.form);
  EXPECT_FALSE(zero(w(3, 3), s.chart));
}

TEST(CompleteSet, WeakG3Metrics) {
  NumericContext ctx;
  ExampleSpec d2 = instantiate("g3_weak_metric_def2");
  CompleteSetReport r2 = complete_set_analysis(*d2.metric, d2.frame, CompleteSetMode::def2, d2.chart, ctx);
  EXPECT_TRUE(r2.def2_pass);
  ExampleSpec d3 = instantiate("g3_weak_metric_def3");
  CompleteSetReport r3 = complete_set_analysis(*d3.metric, d3.frame, CompleteSetMode::def3, d3.chart, ctx);
  EXPECT_TRUE(r3.def3_pass);
}

TEST(ScalarWeak, G3Def2FamilyIsNonVacuous) {
  ExampleSpec s = instantiate("g3_scalar_def2");
  CompleteSetReport r = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def2, s.chart, {});
  EXPECT_TRUE(r.def2_pass);
  int moved = 0;
  for (bool z : r.single_zero) moved += z ? 0 : 1;
  EXPECT_GT(moved, 0);
}

TEST(ScalarWeak, G3Def3General) {
  ExampleSpec s = instantiate("g3_scalar_def3");
  CompleteSetReport r = scalar_weak_analysis(s.scalars.at("f_general"), s.frame, CompleteSetMode::def3, s.chart, {});
  EXPECT_TRUE(r.def3_pass);
}

TEST(ScalarWeak, G3AllSecondDerivativesVanish) {
  ExampleSpec s = instantiate("g3_scalar_all");
  CompleteSetReport r = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def3, s.chart, {});
  EXPECT_TRUE(r.all_zero());
}

TEST(ScalarWeak, TranslationsOnMultilinearScalar) {
  ExampleSpec s = instantiate("translations", {{"n", "3"}});
  CompleteSetReport r = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def3, s.chart, {});
  EXPECT_TRUE(r.def3_pass);
  for (bool z : r.single_zero) EXPECT_FALSE(z);
}

TEST(ScalarWeak, SingleRotationOnAngle) {
  ExampleSpec s = instantiate("rotation_pair");
  const Expr& f = s.scalars.at("f");
  const VectorField& rot = s.frame[0];
  EXPECT_TRUE(zero(lie_derivative_scalar(rot, f) + s.scalars.at("alpha1"), s.chart));
  EXPECT_TRUE(zero(iterated_lie({rot, rot}, f), s.chart));
  EXPECT_FALSE(zero(lie_derivative_scalar(rot, f), s.chart));
}

TEST(ScalarWeak, RadialScalarIsRotationInvariant) {
  ExampleSpec s = instantiate("full_rotation_so3");
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(zero(lie_derivative_scalar(s.frame[i], s.scalars.at("f")), s.chart));
}

TEST(ScalarWeak, GeneralizedTranslations) {
  ExampleSpec s = instantiate("generalized_translations");
  for (int i = 0; i < s.frame.size(); ++i)
    EXPECT_TRUE(zero(iterated_lie({s.frame[i], s.frame[i]}, s.scalars.at("f")), s.chart));
}

TEST(Collineations, MotionImpliesEveryCollineation) {
  for (const char* name : {"kasner", "g3_metric"}) {
    ExampleSpec s = instantiate(name);
    for (int i = 0; i < s.frame.size(); ++i) {
      GeneratorReport g = classify(s, i);
      if (!g.is_motion) continue;
      CollineationReport r = collineation_analysis(*s.metric, s.frame[i], s.chart, {});
      EXPECT_TRUE(r.affine_check.all_zero) << name;
      EXPECT_TRUE(r.curvature_check.all_zero) << name;
      EXPECT_TRUE(r.ricci_check.all_zero) << name;
      EXPECT_TRUE(r.weak_affine_check.all_zero) << name;
      EXPECT_TRUE(r.weak_ricci_check.all_zero) << name;
    }
  }
}

TEST(Collineations, FlagMonotonicityOnRandomFields) {
  Chart c = Chart::standard(2);
  Random rng(42);
  for (int k = 0; k < 4; ++k) {
    MetricField g = rng.metric(2);
    CollineationReport r = collineation_analysis(g, rng.field(2), c, {}, false);
    if (r.affine_check.all_zero) EXPECT_TRUE(r.curvature_check.all_zero);
    if (r.curvature_check.all_zero) EXPECT_TRUE(r.ricci_check.all_zero);
  }
}

TEST(Collineations, HomothetyIsAffine) {
  ExampleSpec s = instantiate("appendix3_solution");
  CollineationReport r = collineation_analysis(*s.metric, s.frame[0], s.chart, {}, false);
  EXPECT_TRUE(r.affine_check.all_zero);
}

TEST(Collineations, MinkowskiWeakAffine) {
  ExampleSpec s = instantiate("weak_affine_minkowski");
  CollineationReport r = collineation_analysis(*s.metric, s.frame[0], s.chart, {}, false);
  EXPECT_TRUE(r.flat);
  EXPECT_TRUE(r.weak_affine_check.all_zero);
  EXPECT_TRUE(r.flat_condition_check.all_zero);
  EXPECT_TRUE(r.flat_agreement.all_zero);
  EXPECT_FALSE(r.affine_check.all_zero);
}

TEST(Collineations, OrthogonalityConditionIsNeeded) {
  EXPECT_THROW(instantiate("weak_affine_minkowski", {{"beta1", "0"}}), InvariantViolation);
}

TEST(Integrability, CorrectedSecondDerivativeIdentity) {
  Chart c = Chart::standard(2);
  Random rng(43);
  for (int k = 0; k < 5; ++k) {
    IntegrabilityReport r = integrability_residuals(rng.metric(2), rng.field(2), c, {}, false);
    EXPECT_TRUE(r.cond1_corrected_check.all_zero);
    EXPECT_FALSE(r.cond1_check.all_zero);
  }
}

TEST(Integrability, ThirdDerivativeChain) {
  Chart c = Chart::standard(2);
  Random rng(44);
  IntegrabilityReport r = integrability_residuals(rng.metric(2), rng.field(2), c, {}, true);
  EXPECT_TRUE(r.cond2_check.all_zero);
}

TEST(Integrability, HomotheticSolutionSatisfiesFlatCondition) {
  ExampleSpec s = instantiate("appendix3_solution");
  IntegrabilityReport r = integrability_residuals(*s.metric, s.frame[0], s.chart, {}, false);
  EXPECT_TRUE(r.flat);
  EXPECT_TRUE(r.cond1a_check.all_zero);
}

TEST(Commutator, DerivativeCorrectionRequired) {
  ExampleSpec s = instantiate("rigid_body");
  Random rng(45);
  MetricField g = rng.metric(4);
  NumericContext ctx;
  ExtractionOptions opt;
  opt.structure_coordinates = s.structure_coordinates;
  StructureFunctions c = extract_structure_functions(s.frame, s.chart, ctx, opt);
  CommutatorReport r = commutator_consistency(g.tensor(), s.frame, c, s.chart, ctx);
  EXPECT_FALSE(r.constant_structure);
  EXPECT_TRUE(r.corrected.all_zero);
  EXPECT_FALSE(r.plain.all_zero);
  // Transposed indices c_ji^k.
  StructureFunctions t(c.size());
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j)
      for (int k = 0; k < c.size(); ++k) t(i, j, k) = c(j, i, k);
  EXPECT_FALSE(commutator_consistency(g.tensor(), s.frame, t, s.chart, ctx).corrected.all_zero);
}
