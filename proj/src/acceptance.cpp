#include "weaklie/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "weaklie/algebroid.hpp"
#include "weaklie/catalog.hpp"
#include "weaklie/geometry.hpp"
#include "weaklie/parse.hpp"
#include "weaklie/symmetry.hpp"

namespace weaklie {

bool CriterionResult::pass() const {
  for (const auto& c : checks)
    if (!c.informational && !c.pass) return false;
  return true;
}

std::string CriterionResult::observed() const {
  int total = 0;
  std::string failed;
  for (const auto& c : checks) {
    if (c.informational) continue;
    ++total;
    if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.label;
  }
  if (failed.empty()) return "all " + std::to_string(total) + " checks hold";
  return "failed: " + failed;
}

double CriterionResult::residual_max() const {
  double r = 0.0;
  for (const auto& c : checks)
    if (!c.informational && std::isfinite(c.residual)) r = std::max(r, c.residual);
  return r;
}

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

AcceptanceCheck identically_zero(const std::string& label, const std::vector<Expr>& exprs, const Chart& chart,
                                 const NumericContext& ctx) {
  ZeroCheck z = zero_test(exprs, chart, ctx);
  return {label, z.all_zero, "max residual " + sci(z.max_residual), z.max_residual};
}

AcceptanceCheck identically_zero(const std::string& label, const Expr& e, const Chart& chart,
                                 const NumericContext& ctx) {
  return identically_zero(label, std::vector<Expr>{e}, chart, ctx);
}

AcceptanceCheck not_zero(const std::string& label, const std::vector<Expr>& exprs, const Chart& chart,
                         const NumericContext& ctx) {
  ZeroCheck z = zero_test(exprs, chart, ctx);
  return {label, !z.all_zero, "max residual " + sci(z.max_residual), 0.0};
}

AcceptanceCheck flag(const std::string& label, bool value, const std::string& detail = {}) {
  return {label, value, detail, 0.0};
}

AcceptanceCheck informational(AcceptanceCheck c) {
  c.informational = true;
  return c;
}

// Display form with cos(u)^2 rewritten as 1 - sin(u)^2.
std::string show(const Expr& e, const Chart& chart) {
  Expr reduced = substitute(e, [](const Expr& node) -> std::optional<Expr> {
    if (node.kind() != Kind::Power || !node.exponent().is_integer() || node.exponent().num() < 2) return std::nullopt;
    const Expr& base = node.children()[0];
    if (base.kind() != Kind::Function || base.fn() != Fn::Cos) return std::nullopt;
    std::int64_t k = node.exponent().num();
    Expr s = sin(base.children()[0]);
    Expr out = pow(Expr(1) - s * s, Rational(k / 2));
    return k % 2 ? out * base : out;
  });
  return to_string(reduced, chart.names());
}

std::string matrix_text(const std::vector<std::vector<bool>>& z) {
  std::string s;
  for (const auto& row : z) {
    s += s.empty() ? "" : "/";
    for (bool b : row) s += b ? '0' : 'x';
  }
  return s;
}

// ---------------------------------------------------------------------------

void ac1(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec k = instantiate("kasner");
  const MetricField& g = *k.metric;
  TensorField dT = lie_derivative(k.frame[0], g.tensor());
  RankSignature rT = rank_and_signature(dT, k.chart, ctx);
  r.checks.push_back(flag("rank L_T g = 3", rT.rank == 3, "rank " + std::to_string(rT.rank)));

  TensorField dX = lie_derivative(k.frame[1], g.tensor());
  Expr fp = diff(parse_expression("f(x0)", k.chart, k.registry), 0);
  TensorField expected(4, 0, 2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr v = 0;
      if (b == 0) v += g(1, a);
      if (a == 0) v += g(1, b);
      expected(a, b) = fp * v;
    }
  r.checks.push_back(identically_zero("L_X g - 2 f' g_1(a delta_b)^0", (dX - expected).components(), k.chart, ctx));
  RankSignature rX = rank_and_signature(dX, k.chart, ctx);
  r.checks.push_back(flag("rank L_X g = 2", rX.rank == 2, "rank " + std::to_string(rX.rank)));
}

void ac2(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec k = instantiate("kasner");
  CurvatureBundle cb = curvature(*k.metric);
  SampledValues sv = sample_values(cb.ricci.components(), k.chart, ctx, 10);
  double worst = 0.0;
  for (std::size_t s = 0; s < sv.values.size(); ++s)
    for (std::size_t i = 0; i < sv.values[s].size(); ++i) {
      double scale = std::max(sv.scales[s][i], 1e-300);
      worst = std::max(worst, std::fabs(sv.values[s][i]) / scale);
    }
  r.checks.push_back({"Ricci at 10 points <= 1e-8 relative", worst <= 1e-8, "max relative " + sci(worst), worst});
}

void ac3(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("g3_metric");
  for (int i = 0; i < s.frame.size(); ++i)
    r.checks.push_back(identically_zero("L_" + s.frame.names[u(i)] + " g = 0",
                                        lie_derivative(s.frame[i], s.metric->tensor()).components(), s.chart, ctx));
  StructureFunctions c = extract_structure_functions(s.frame, s.chart, ctx);
  StructureFunctions want(3);
  want.set(1, 2, 0, 1);
  std::string bad;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (!(c(i, j, k) == want(i, j, k)))
          bad += " c_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k + 1) + "=" +
                 show(c(i, j, k), s.chart);
  r.checks.push_back(flag("structure constants exactly [X2,X3] = X1", bad.empty(),
                          bad.empty() ? "c_23^1 = 1, others 0" : "mismatch:" + bad));
}

void ac4(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("weakly_static");
  GeneratorReport g = classify_generator(*s.metric, s.frame[0], s.chart, ctx, "T");
  r.checks.push_back({"L_T L_T g = 0", g.is_weak_motion, "max residual " + sci(g.drag2_check.max_residual),
                      g.drag2_check.max_residual});
  r.checks.push_back(flag("L_T g != 0", !g.is_motion, "rank " + std::to_string(g.drag_rank.rank)));
}

void ac5(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("weak_sss");
  const Chart& ch = s.chart;
  CompleteSetReport d3 = complete_set_analysis(*s.metric, s.frame, CompleteSetMode::def3, ch, ctx);
  r.checks.push_back(flag("def3 holds for {T, xi2, xi3, xi4}", d3.def3_pass, "L_iL_j g zero pattern " + matrix_text(d3.zero)));

  const TensorField& f = *s.form;
  r.checks.push_back(identically_zero("f_22,2,2 = 0", diff(diff(f(2, 2), 2), 2), ch, ctx));
  Expr s2 = sin(Expr::coord(2));
  r.checks.push_back(identically_zero("f_33 - sin^2 x2 f_22 = 0", f(3, 3) - s2 * s2 * f(2, 2), ch, ctx));

  TensorField w = iterated_lie({s.frame[2], s.frame[3]}, f);
  Expr eps1 = parse_expression("eps1(x1)", ch, s.registry);
  Expr printed = s2 * cos(Expr::coord(2)) * eps1;
  AcceptanceCheck witness = identically_zero("L_xi3 L_xi4 f_33 - sin x2 cos x2 eps1 = 0", w(3, 3) - printed, ch, ctx);
  witness.detail += "; computed L_xi3 L_xi4 f_33 = " + show(w(3, 3), ch);
  r.checks.push_back(witness);

  CompleteSetReport d2 = complete_set_analysis(*s.metric, s.frame, CompleteSetMode::def2, ch, ctx);
  r.checks.push_back(flag("def2 fails at the (xi3, xi4) entry", !d2.def2_pass && !d2.zero[2][3],
                          "L_iL_j g zero pattern " + matrix_text(d2.zero)));
}

void ac6(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("weak_sss_surface");
  const Chart& ch = s.chart;
  Expr K = gaussian_curvature_2d(*s.metric);
  Expr paper = parse_expression(
      "1/(2*(eps1*x2 + eps2)^2)*(-eps1*cot(x2) + 2*eps1*x2 + 2*eps2 + eps1^2/(eps1*x2 + eps2))", ch, s.registry);
  r.checks.push_back(identically_zero("K - K_paper = 0", K - paper, ch, ctx));
  Expr K0 = substitute_param(K, "eps1", Expr(0));
  r.checks.push_back(identically_zero("K - 1/eps2 = 0 at eps1 = 0", K0 - pow(Expr::param("eps2"), Rational(-1)), ch, ctx));
}

void ac7(CriterionResult& r, const NumericContext& ctx) {
  {
    ExampleSpec s = instantiate("g3_scalar_def3");
    CompleteSetReport a = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def3, s.chart, ctx);
    Expr l33 = iterated_lie({s.frame[2], s.frame[2]}, s.scalars.at("f"));
    r.checks.push_back(flag("printed def3 scalar passes def3", a.def3_pass,
                            "zero pattern " + matrix_text(a.zero) + "; L_X3 L_X3 f = " + show(l33, s.chart)));
    CompleteSetReport b = scalar_weak_analysis(s.scalars.at("f_general"), s.frame, CompleteSetMode::def3, s.chart, ctx);
    r.checks.push_back(informational(flag("def3 scalar with b0 x1 (x2 + x1 x3) passes def3", b.def3_pass,
                                          "zero pattern " + matrix_text(b.zero))));
  }
  {
    ExampleSpec s = instantiate("g3_scalar_def2");
    CompleteSetReport a = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def2, s.chart, ctx);
    r.checks.push_back(flag("def2 scalar passes def2", a.def2_pass, "zero pattern " + matrix_text(a.zero)));
    Expr l32 = iterated_lie({s.frame[2], s.frame[1]}, s.scalars.at("f"));
    r.checks.push_back(informational(
        flag("def2 scalar violates the ninth condition", !l32.is_zero(), "L_X3 L_X2 f = " + show(l32, s.chart))));
  }
  {
    ExampleSpec s = instantiate("g3_scalar_all");
    CompleteSetReport a = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def2, s.chart, ctx);
    r.checks.push_back(flag("fully reduced scalar: all nine L_iL_j f = 0", a.all_zero() && a.def2_pass,
                            "zero pattern " + matrix_text(a.zero)));
  }
  {
    ExampleSpec s = instantiate("translations", {{"n", "3"}});
    CompleteSetReport a = scalar_weak_analysis(s.scalars.at("f"), s.frame, CompleteSetMode::def3, s.chart, ctx);
    r.checks.push_back(flag("n=3 translation polynomial passes def3", a.def3_pass, "zero pattern " + matrix_text(a.zero)));
  }
  {
    ExampleSpec s = instantiate("rotation_pair");
    const Expr& f = s.scalars.at("f");
    r.checks.push_back(identically_zero("rotation: L_R L_R f = 0", iterated_lie({s.frame[0], s.frame[0]}, f), s.chart, ctx));
    r.checks.push_back(identically_zero("rotation: L_R f + alpha1 = 0",
                                        lie_derivative_scalar(s.frame[0], f) + s.scalars.at("alpha1"), s.chart, ctx));
  }
}

// Appendix 4 table with Z0 = T, Z1..3 = X, Z4..6 = Y.
StructureFunctions rigid_body_table(const ExampleSpec& s) {
  auto e = [&](const char* t) { return parse_expression(t, s.chart, s.registry); };
  StructureFunctions c(7);
  c.set(0, 1, 1, e("f1'(x0)/f1(x0)"));
  c.set(0, 2, 2, e("f2'(x0)/f2(x0)"));
  c.set(0, 3, 3, e("f3'(x0)/f3(x0)"));
  c.set(0, 4, 4, e("w23'(x0)/w23(x0)"));
  c.set(0, 5, 5, e("w13'(x0)/w13(x0)"));
  c.set(0, 6, 6, e("w12'(x0)/w12(x0)"));
  c.set(4, 5, 6, e("-w23(x0)*w13(x0)/w12(x0)"));
  c.set(5, 6, 4, e("-w13(x0)*w12(x0)/w23(x0)"));
  c.set(4, 6, 5, e("-w23(x0)*w12(x0)/w13(x0)"));
  c.set(1, 5, 3, e("-f1(x0)/f3(x0)*w13(x0)"));
  c.set(1, 6, 2, e("-f1(x0)/f2(x0)*w12(x0)"));
  c.set(2, 4, 3, e("-f2(x0)/f3(x0)*w23(x0)"));
  c.set(2, 6, 1, e("f2(x0)/f1(x0)*w12(x0)"));
  c.set(3, 4, 2, e("f3(x0)/f2(x0)*w23(x0)"));
  c.set(3, 5, 1, e("f3(x0)/f1(x0)*w13(x0)"));
  return c;
}

void ac8(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("rigid_body");
  const Chart& ch = s.chart;
  ExtractionOptions opt;
  opt.structure_coordinates = s.structure_coordinates;
  StructureFunctions c = extract_structure_functions(s.frame, ch, ctx, opt);
  StructureFunctions table = rigid_body_table(s);

  std::vector<Expr> diffs;
  std::string bad;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int k = 0; k < 7; ++k) {
        Expr d = c(i, j, k) - table(i, j, k);
        if (!is_identically_zero(d, ch, ctx))
          bad += " c_" + std::to_string(i) + std::to_string(j) + "^" + std::to_string(k) + ": computed " +
                 show(c(i, j, k), ch) + ", table " + show(table(i, j, k), ch) + ";";
        diffs.push_back(d);
      }
  AcceptanceCheck entrywise = identically_zero("structure functions match the table entrywise", diffs, ch, ctx);
  if (!bad.empty()) entrywise.detail += ";" + bad;
  r.checks.push_back(entrywise);

  ResidualReport jac = jacobi_residual(c, s.frame, ch, ctx);
  r.checks.push_back({"extended Jacobi residual = 0", jac.zero(), "max residual " + sci(jac.check.max_residual),
                      jac.check.max_residual});

  AlgebraForm tau = extended_cartan_killing_tau(c, s.frame);
  std::vector<Expr> off;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i != j) off.push_back(tau[u(i)][u(j)]);
  for (int i = 1; i <= 3; ++i) off.push_back(tau[u(i)][u(i)]);
  r.checks.push_back(identically_zero("tau off-diagonal and tau_11..tau_33 = 0", off, ch, ctx));
  Expr t00 = parse_expression(
      "f1''(x0)/f1(x0) + f2''(x0)/f2(x0) + f3''(x0)/f3(x0) + w23''(x0)/w23(x0) + w13''(x0)/w13(x0) + "
      "w12''(x0)/w12(x0)",
      ch, s.registry);
  r.checks.push_back(identically_zero("tau_00 - sum f''/f - sum w''/w = 0", tau[0][0] - t00, ch, ctx));
  const char* names[3] = {"w23", "w13", "w12"};
  for (int i = 0; i < 3; ++i) {
    Expr w = parse_expression(std::string(names[i]) + "(x0)", ch, s.registry);
    r.checks.push_back(identically_zero("tau_" + std::to_string(44 + 11 * i) + " + 4 " + names[i] + "^2 = 0",
                                        tau[u(4 + i)][u(4 + i)] + Expr(4) * w * w, ch, ctx));
  }
  RankSignature rs = rank_and_signature(tau, ch, ctx);
  r.checks.push_back(flag("rank tau = 4", rs.rank == 4, "rank " + std::to_string(rs.rank)));

  ExampleSpec inst = instantiate("rigid_body", {{"f1", "x0^2 + 1"},
                                                {"f2", "x0^2 + 1"},
                                                {"f3", "x0^2 + 1"},
                                                {"w23", "exp(x0)"},
                                                {"w13", "exp(x0)"},
                                                {"w12", "exp(x0)"}});
  StructureFunctions ci = extract_structure_functions(inst.frame, inst.chart, ctx, opt);
  RankSignature si = rank_and_signature(extended_cartan_killing_tau(ci, inst.frame), inst.chart, ctx);
  r.checks.push_back(flag("signature (1,3) on f = x0^2+1, w = exp(x0)", si.plus == 1 && si.minus == 3 && si.zero == 3,
                          "(+" + std::to_string(si.plus) + ", -" + std::to_string(si.minus) + ", 0:" +
                              std::to_string(si.zero) + ")"));
}

void ac9(CriterionResult& r, const NumericContext& ctx) {
  {
    ExampleSpec s = instantiate("two_dim_extended");
    const Chart& ch = s.chart;
    StructureFunctions c = extract_structure_functions(s.frame, ch, ctx);
    Expr xi = parse_expression("xi(x1,x2)", ch, s.registry);
    r.checks.push_back(identically_zero("c_12^1 + xi_,2 = 0 and c_12^2 - xi_,1 = 0",
                                        {c(0, 1, 0) + diff(xi, 1), c(0, 1, 1) - diff(xi, 0)}, ch, ctx));
    AlgebraForm tau = extended_cartan_killing_tau(c, s.frame);
    std::vector<Expr> res;
    Expr sq = xi * xi;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) res.push_back(tau[u(i)][u(j)] - Rational(1, 2) * diff(diff(sq, i), j));
    r.checks.push_back(identically_zero("tau_ij - 1/2 [(xi)^2]_,ij = 0", res, ch, ctx));
  }
  {
    ExampleSpec s = instantiate("two_dim_aligned");
    const Chart& ch = s.chart;
    const StructureFunctions& c = *s.structure;
    Expr xi = parse_expression("xi(x1,x2)", ch, s.registry);
    Expr eta = parse_expression("eta(x1,x2)", ch, s.registry);
    Expr cd = xi * diff(eta, 0) - eta * diff(xi, 0);
    // The displayed c_12^1 is the d1 coefficient of the bracket.
    VectorField br = lie_bracket(s.frame[0], s.frame[1]);
    r.checks.push_back(identically_zero("[X1,X2] = (xi eta_,1 - eta xi_,1) d1", {br[0] - cd, br[1]}, ch, ctx));
    r.checks.push_back(identically_zero("hand-entered c_12^1 equals the display", c(0, 1, 0) - cd, ch, ctx));
    AlgebraForm sigma = cartan_killing_sigma(c);
    r.checks.push_back(identically_zero("sigma = diag(0, c^2)",
                                        {sigma[0][0], sigma[0][1], sigma[1][0], sigma[1][1] - cd * cd}, ch, ctx));
    AlgebraForm tau = extended_cartan_killing_tau(c, s.frame);
    r.checks.push_back(identically_zero("tau_11 = 0", tau[0][0], ch, ctx));
    AcceptanceCheck t12 = identically_zero("tau_12 + xi (xi eta_,1 - eta xi_,1) = 0", tau[0][1] + xi * cd, ch, ctx);
    t12.detail += "; computed tau_12 = " + show(tau[0][1], ch);
    r.checks.push_back(t12);
    Expr t22 = cd * cd - eta * (xi * diff(diff(eta, 0), 0) - eta * diff(diff(xi, 0), 0));
    r.checks.push_back(identically_zero("tau_22 - c^2 + eta (xi eta_,11 - eta xi_,11) = 0", tau[1][1] - t22, ch, ctx));
  }
}

void ac10(CriterionResult& r, const NumericContext& ctx) {
  {
    ExampleSpec s = instantiate("extended_motion_metric");
    RankSignature rs = rank_and_signature(*s.form, s.chart, ctx);
    r.checks.push_back(flag("rank-3 form", rs.rank == 3, "rank " + std::to_string(rs.rank)));
    for (int i = 0; i < 2; ++i)
      r.checks.push_back(identically_zero("L_" + s.frame.names[u(i)] + " g = 0",
                                          lie_derivative(s.frame[i], *s.form).components(), s.chart, ctx));
  }
  {
    ExampleSpec s = instantiate("extended_weak_metric");
    const TensorField& g = s.metric->tensor();
    for (int i = 0; i < 2; ++i)
      r.checks.push_back(identically_zero("x1-linear metric: L_" + s.frame.names[u(i)] + " L_" + s.frame.names[u(i)] +
                                              " g = 0",
                                          iterated_lie({s.frame[i], s.frame[i]}, g).components(), s.chart, ctx));
    r.checks.push_back(not_zero("x1-linear metric: L_X g != 0", lie_derivative(s.frame[0], g).components(), s.chart, ctx));
    RankSignature rs = rank_and_signature(g, s.chart, ctx);
    r.checks.push_back(flag("x1-linear metric is nondegenerate", rs.rank == 4, "rank " + std::to_string(rs.rank)));
  }
}

void ac11(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("frw_substrate");
  const MetricField& g = *s.metric;
  CurvatureBundle cb = curvature(g);
  std::vector<Expr> off;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) off.push_back(cb.einstein(a, b));
  r.checks.push_back(identically_zero("Einstein tensor is diagonal", off, s.chart, ctx));
  std::vector<Expr> mixed;
  for (int a = 0; a < 4; ++a) mixed.push_back(cb.einstein(a, a) / g(a, a));
  r.checks.push_back(identically_zero("G^1_1 = G^2_2 = G^3_3", {mixed[1] - mixed[2], mixed[1] - mixed[3]}, s.chart, ctx));
  // mu = G^0_0, p = -G^i_i for signature (+,-,-,-).
  Expr w = -mixed[1] / mixed[0];
  SampledValues sv = sample_values({w}, s.chart, ctx, 10);
  double worst = 0.0;
  for (const auto& v : sv.values) worst = std::max(worst, std::fabs(v[0] + 1.0 / 9.0));
  r.checks.push_back({"p/mu = -1/9 +- 1e-8 at 10 points", worst <= 1e-8, "max |p/mu + 1/9| " + sci(worst), worst});
}

// Random instances for the identity suites.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  Rational small(int range, int den) {
    std::uniform_int_distribution<int> d(-range, range);
    return Rational(d(rng_), den);
  }

  Expr linear(int n, int range, int den) {
    Expr e = 0;
    for (int c = 0; c < n; ++c) e += Expr(small(range, den)) * Expr::coord(c);
    return e;
  }

  /// Constant-dominant metric with linear perturbations.
  MetricField metric(int n) {
    std::vector<std::vector<Expr>> m(u(n), std::vector<Expr>(u(n)));
    for (int a = 0; a < n; ++a) {
      m[u(a)][u(a)] = Expr(8 + a) + linear(n, 2, 8);
      for (int b = a + 1; b < n; ++b) m[u(a)][u(b)] = m[u(b)][u(a)] = Expr(small(2, 2)) + linear(n, 1, 8);
    }
    return MetricField::from_matrix(m);
  }

  /// Polynomial vector field of degree <= 2.
  VectorField field(int n) {
    std::vector<Expr> c(u(n));
    for (int a = 0; a < n; ++a) {
      Expr e = Expr(small(3, 2)) + linear(n, 3, 2);
      for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) e += Expr(small(2, 4)) * Expr::coord(p) * Expr::coord(q);
      c[u(a)] = e;
    }
    return VectorField(c);
  }

  /// Frame close to the coordinate basis, so it stays pointwise independent on the sampling box.
  FrameSet frame(int n) {
    FrameSet f;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < n; ++i) {
      std::vector<Expr> c(u(n));
      for (int a = 0; a < n; ++a) {
        Expr e = a == i ? Expr(1) : Expr(0);
        for (int t = 0; t < 3; ++t) {
          int p = pick(rng_), q = pick(rng_);
          e += Expr(small(2, 128)) * Expr::coord(p) * (t == 0 ? Expr(1) : Expr::coord(q));
        }
        c[u(a)] = e;
      }
      f.add("X" + std::to_string(i + 1), VectorField(c));
    }
    return f;
  }

 private:
  std::mt19937_64 rng_;
};

constexpr int kInstances = 50;

struct Tally {
  int pass = 0;
  double worst = 0.0;
  std::string first_failure;
  void add(bool ok, double residual, int instance) {
    if (ok)
      ++pass;
    else if (first_failure.empty())
      first_failure = "first failure at instance " + std::to_string(instance);
    if (std::isfinite(residual)) worst = std::max(worst, residual);
  }
  AcceptanceCheck check(const std::string& label) const {
    std::string d = std::to_string(pass) + "/" + std::to_string(kInstances) + " instances, max residual " + sci(worst);
    if (!first_failure.empty()) d += ", " + first_failure;
    return {label, pass == kInstances, d, worst};
  }
};

void ac12(CriterionResult& r, const NumericContext& ctx) {
  const std::uint64_t base = ctx.seed * 7919 + 12;
  {
    InstanceGenerator gen(base + 1);
    Chart ch = Chart::standard(2);
    Tally t;
    for (int i = 0; i < kInstances; ++i) {
      MetricField g = gen.metric(2);
      VectorField x = gen.field(2);
      ZeroCheck z = zero_test(difsym_residual(g, x), ch, ctx);
      t.add(z.all_zero, z.max_residual, i);
    }
    r.checks.push_back(t.check("second Lie derivative of the inverse metric"));
  }
  {
    InstanceGenerator gen(base + 2);
    Chart ch = Chart::standard(2);
    Tally t;
    for (int i = 0; i < kInstances; ++i) {
      MetricField g = gen.metric(2);
      FrameSet f = gen.frame(2);
      StructureFunctions c = extract_structure_functions(f, ch, ctx);
      CommutatorReport cr = commutator_consistency(g.tensor(), f, c, ch, ctx);
      t.add(cr.corrected.all_zero, cr.corrected.max_residual, i);
    }
    r.checks.push_back(t.check("commutator of Lie derivatives with the derivative correction"));
  }
  {
    InstanceGenerator gen(base + 3);
    Chart ch = Chart::standard(2);
    Tally printed, corrected;
    for (int i = 0; i < kInstances; ++i) {
      MetricField g = gen.metric(2);
      VectorField x = gen.field(2);
      IntegrabilityReport ir = integrability_residuals(g, x, ch, ctx, false);
      printed.add(ir.cond1_check.all_zero, ir.cond1_check.max_residual, i);
      corrected.add(ir.cond1_corrected_check.all_zero, ir.cond1_corrected_check.max_residual, i);
    }
    r.checks.push_back(printed.check("second covariant derivative identity as printed"));
    r.checks.push_back(informational(corrected.check("second covariant derivative identity with -nabla_a gamma_cb")));
  }
  {
    InstanceGenerator gen(base + 4);
    Chart ch = Chart::standard(2);
    Tally t;
    for (int i = 0; i < kInstances; ++i) {
      MetricField g = gen.metric(2);
      VectorField x = gen.field(2);
      TensorField G = christoffel(g);
      TensorField direct = lie_derivative_connection_direct(G, x);
      TensorField ident = lie_derivative_connection_identity(G, riemann_from_connection(G), x);
      ZeroCheck z = zero_test(direct - ident, ch, ctx);
      t.add(z.all_zero, z.max_residual, i);
    }
    r.checks.push_back(t.check("L_xi Gamma: component rule equals nabla nabla xi + R xi"));
  }
  {
    InstanceGenerator gen(base + 5);
    Tally t;
    for (int i = 0; i < kInstances; ++i) {
      const int n = 2;
      Chart ch = Chart::standard(n);
      FrameSet f = gen.frame(n);
      StructureFunctions c = extract_structure_functions(f, ch, ctx);
      ResidualReport rr = liealg3_residual(c, f, ch, ctx);
      t.add(rr.zero(), rr.check.max_residual, i);
    }
    r.checks.push_back(t.check("second Lie derivative of a frame field"));
  }
  {
    InstanceGenerator gen(base + 6);
    Tally cond, homo;
    const int eta[4] = {1, -1, -1, -1};
    for (int i = 0; i < kInstances; ++i) {
      Rational c0 = gen.small(4, 2);
      // Omega^s_p = eta^{ss} A_sp with A antisymmetric; F^{rs} = (x^r y^s - x^s y^r)/4 has d_r F^{rs} = y^s.
      std::vector<std::vector<Rational>> A(4, std::vector<Rational>(4));
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          A[u(a)][u(b)] = gen.small(3, 1);
          A[u(b)][u(a)] = -A[u(a)][u(b)];
        }
      std::vector<Expr> y(4);
      for (int s = 0; s < 4; ++s) {
        Expr v = 0;
        for (int p = 0; p < 4; ++p) v += Expr(Rational(eta[s]) * A[u(s)][u(p)]) * Expr::coord(p);
        y[u(s)] = v;
      }
      ExampleParams params{{"c0", c0.to_string()}};
      Chart ch4 = Chart::standard(4);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          Expr F = Rational(1, 4) * (Expr::coord(a) * y[u(b)] - Expr::coord(b) * y[u(a)]);
          params["F" + std::to_string(a) + std::to_string(b)] = to_string(F, ch4.names());
        }
      ExampleSpec s = instantiate("appendix3_solution", params);
      IntegrabilityReport ir = integrability_residuals(*s.metric, s.frame[0], s.chart, ctx, false);
      cond.add(ir.cond1a_check.all_zero, ir.cond1a_check.max_residual, i);
      GeneratorReport gr = classify_generator(*s.metric, s.frame[0], s.chart, ctx, "xi");
      // A motion is the homothety with lambda = 0.
      Expr lambda = gr.is_motion ? Expr(0) : gr.lambda;
      ZeroCheck lz = zero_test(std::vector<Expr>{lambda - Expr(Rational(2) * c0)}, s.chart, ctx);
      homo.add((gr.is_motion || gr.is_homothetic) && lz.all_zero, lz.max_residual, i);
    }
    r.checks.push_back(cond.check("homothetic solution satisfies the flat integrability condition"));
    r.checks.push_back(homo.check("homothetic solution has lambda = 2 c0"));
  }
}

void ac13(CriterionResult& r, const NumericContext& ctx) {
  ExampleSpec s = instantiate("weak_affine_minkowski");
  CollineationReport cr = collineation_analysis(*s.metric, s.frame[0], s.chart, ctx, false);
  r.checks.push_back({"flat weak affine condition = 0", cr.flat_condition_check.all_zero,
                      "max residual " + sci(cr.flat_condition_check.max_residual), cr.flat_condition_check.max_residual});
  r.checks.push_back({"flat condition agrees with the general weak affine residual", cr.flat_agreement.all_zero,
                      "max residual " + sci(cr.flat_agreement.max_residual), cr.flat_agreement.max_residual});
  r.checks.push_back(informational(flag("generator is a genuine weak affine collineation",
                                        cr.weak_affine_check.all_zero && !cr.affine_check.all_zero)));
}

struct Criterion {
  const char* id;
  const char* title;
  const char* expected;
  void (*run)(CriterionResult&, const NumericContext&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"AC-1", "Kasner dragging", "rank L_T g = 3; L_X g = 2 f' g_1(a delta_b)^0 with rank 2", ac1},
      {"AC-2", "Kasner vacuum", "Ricci <= 1e-8 relative at 10 points", ac2},
      {"AC-3", "G3 isometry", "L_xi g = 0 for all three; [X2,X3] = X1 exactly", ac3},
      {"AC-4", "Weakly static", "L_T L_T g = 0, L_T g != 0", ac4},
      {"AC-5", "Weak spherical symmetry", "def3 holds; component equations; witness sin x2 cos x2 eps1", ac5},
      {"AC-6", "Gaussian curvature", "K = K_paper; K = 1/eps2 at eps1 = 0", ac6},
      {"AC-7", "Scalar suites", "def3 / def2 / ninth condition; translations; rotation X f = -alpha1", ac7},
      {"AC-8", "Rigid body", "table match; Jacobi = 0; tau diagonal, rank 4, signature (1,3)", ac8},
      {"AC-9", "2-D extended algebra", "tau = 1/2 [(xi)^2]_,ij; aligned-case displays", ac9},
      {"AC-10", "Extended motions", "L_X g = L_Y g = 0 (rank 3); weak conditions with L_X g != 0", ac10},
      {"AC-11", "FRW substrate", "perfect fluid with p/mu = -1/9", ac11},
      {"AC-12", "Identity suites", "50 random instances per identity", ac12},
      {"AC-13", "Minkowski weak affine collineation", "flat condition = 0 and agrees with general residual", ac13},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& c : criteria()) out.push_back(c.id);
    return out;
  }();
  return ids;
}

CriterionResult run_criterion(const std::string& id, const NumericContext& ctx) {
  for (const auto& c : criteria()) {
    if (id != c.id) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.expected = c.expected;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(r, ctx);
    } catch (const ConventionMismatch&) {
      throw;
    } catch (const Error& e) {
      r.checks.push_back(flag("criterion raised an error", false, e.what()));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw Error("unknown criterion '" + id + "'");
}

std::vector<CriterionResult> run_acceptance(const NumericContext& ctx, const std::string& only) {
  std::vector<CriterionResult> out;
  if (!only.empty()) {
    out.push_back(run_criterion(only, ctx));
    return out;
  }
  for (const auto& id : criterion_ids()) out.push_back(run_criterion(id, ctx));
  return out;
}

}  // namespace weaklie
