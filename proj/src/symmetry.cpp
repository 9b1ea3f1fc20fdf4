#include "weaklie/symmetry.hpp"

#include <algorithm>

#include "weaklie/errors.hpp"

namespace weaklie {
namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

using ExprMatrix = std::vector<std::vector<Expr>>;

ExprMatrix matmul(const ExprMatrix& a, const ExprMatrix& b) {
  const std::size_t n = a.size();
  ExprMatrix r(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k)
        if (!a[i][k].is_zero() && !b[k][j].is_zero()) terms.push_back(a[i][k] * b[k][j]);
      r[i][j] = Expr::sum(std::move(terms));
    }
  return r;
}

ExprMatrix to_matrix(const TensorField& t) {
  const int n = t.dim();
  ExprMatrix m(u(n), std::vector<Expr>(u(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m[u(a)][u(b)] = t.components()[u(a * n + b)];
  return m;
}

bool coordinate_free(const TensorField& t) {
  return std::all_of(t.components().begin(), t.components().end(), [](const Expr& e) { return is_coordinate_free(e); });
}

const Expr kHalf(Rational(1, 2));

}  // namespace

TensorField lower_index(const TensorField& g, const VectorField& x) {
  const int n = g.dim();
  TensorField r(n, 0, 1);
  for (int a = 0; a < n; ++a) {
    std::vector<Expr> terms;
    for (int b = 0; b < n; ++b)
      if (!g(a, b).is_zero() && !x[b].is_zero()) terms.push_back(g(a, b) * x[b]);
    r.components()[u(a)] = Expr::sum(std::move(terms));
  }
  return r;
}

GeneratorReport classify_generator(const MetricField& g, const VectorField& x, const Chart& chart,
                                   const NumericContext& ctx, const std::string& name) {
  g.require_nondegenerate(chart, ctx);
  const int n = g.dim();
  GeneratorReport r;
  r.name = name;
  r.drag = lie_derivative(x, g.tensor());
  r.drag_check = zero_test(r.drag, chart, ctx);
  r.is_motion = r.drag_check.all_zero;
  r.drag2 = lie_derivative(x, r.drag);
  r.drag2_check = zero_test(r.drag2, chart, ctx);
  r.is_weak_motion = r.drag2_check.all_zero;
  r.is_genuine_weak = r.is_weak_motion && !r.is_motion;
  r.drag_rank = r.is_motion ? RankSignature{0, 0, 0, n, 0} : rank_and_signature(r.drag, chart, ctx);

  if (!r.is_motion) {
    // lambda from a structurally nonzero pivot entry; L g - lambda g == 0
    // is tested in the cross-multiplied form.
    int pa = 0, pb = 0;
    for (int a = n - 1; a >= 0; --a)
      for (int b = n - 1; b >= a; --b)
        if (!g(a, b).is_zero()) pa = a, pb = b;
    const Expr& gp = g(pa, pb);
    const Expr& dp = r.drag(pa, pb);
    r.lambda = dp / gp;
    r.conformal_check = zero_test(gp * r.drag - dp * g.tensor(), chart, ctx);
    r.is_conformal = r.conformal_check.all_zero;
    if (r.is_conformal) {
      std::vector<Expr> grad;
      for (int a = 0; a < n; ++a) grad.push_back(diff(r.lambda, a));
      r.is_homothetic = zero_test(grad, chart, ctx).all_zero;
      Expr factor = r.lambda * r.lambda + lie_derivative_scalar(x, r.lambda);
      r.isomet4_check = zero_test(r.drag2 - factor * g.tensor(), chart, ctx);
    }
  }

  // L L g^{-1} = g^{-1} (2 gamma g^{-1} gamma - L L g) g^{-1}; the middle
  // factor times det g is polynomial in the metric entries.
  const TensorField& adj = g.adjugate();
  TensorField inv2(n, 0, 2);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<Expr> terms;
      for (int s = 0; s < n; ++s) {
        if (r.drag(a, s).is_zero()) continue;
        for (int t = 0; t < n; ++t)
          if (!adj(s, t).is_zero() && !r.drag(t, b).is_zero())
            terms.push_back(Expr(2) * r.drag(a, s) * adj(s, t) * r.drag(t, b));
      }
      if (!r.drag2(a, b).is_zero()) terms.push_back(-g.determinant() * r.drag2(a, b));
      inv2(a, b) = inv2(b, a) = Expr::sum(std::move(terms));
    }
  r.inverse_drag2_check = zero_test(inv2, chart, ctx);
  r.is_super_weak = r.is_genuine_weak && r.inverse_drag2_check.all_zero;
  if (r.drag_rank.rank == 1) {
    DragResult d;
    d.gamma = r.drag;
    d.rank = 1;
    null_decompose(g, d, chart, ctx);
    r.null_decomposition = d.null_decomposition;
    r.phi = d.phi;
    r.k = d.k;
  }
  return r;
}

TensorField difsym_residual(const MetricField& g, const VectorField& x) {
  const int n = g.dim();
  const TensorField& gi = g.inverse();
  TensorField gamma = lie_derivative(x, g.tensor());
  TensorField gamma2 = lie_derivative(x, gamma);
  TensorField inv2 = lie_derivative(x, lie_derivative(x, gi));
  ExprMatrix G = to_matrix(gi);
  ExprMatrix raised2 = matmul(matmul(G, to_matrix(gamma2)), G);
  ExprMatrix Gg = matmul(G, to_matrix(gamma));
  ExprMatrix quad = matmul(matmul(Gg, Gg), G);
  TensorField r(n, 2, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r.components()[u(a * n + b)] = inv2.components()[u(a * n + b)] + raised2[u(a)][u(b)] -
                                     Expr(2) * quad[u(a)][u(b)];
  return r;
}

bool CompleteSetReport::all_zero() const {
  for (const auto& row : zero)
    for (bool z : row)
      if (!z) return false;
  return true;
}

CompleteSetReport complete_set_analysis(const TensorField& t, const FrameSet& frame, CompleteSetMode mode,
                                        const Chart& chart, const NumericContext& ctx) {
  const int m = frame.size();
  CompleteSetReport r;
  r.mode = mode;
  r.names = frame.names;
  std::vector<TensorField> single;
  for (int j = 0; j < m; ++j) {
    single.push_back(lie_derivative(frame[j], t));
    ZeroCheck z = zero_test(single.back(), chart, ctx);
    r.single_zero.push_back(z.all_zero);
    r.single_residual.push_back(z.max_residual);
    if (t.upper() == 0 && t.lower() == 2) r.ranks.push_back(rank_and_signature(single.back(), chart, ctx));
  }
  r.zero.assign(u(m), std::vector<bool>(u(m), false));
  r.residual.assign(u(m), std::vector<double>(u(m), 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ZeroCheck z = zero_test(lie_derivative(frame[i], single[u(j)]), chart, ctx);
      r.zero[u(i)][u(j)] = z.all_zero;
      r.residual[u(i)][u(j)] = z.max_residual;
    }
  const bool some_nonmotion = std::any_of(r.single_zero.begin(), r.single_zero.end(), [](bool z) { return !z; });
  const bool no_motion = std::none_of(r.single_zero.begin(), r.single_zero.end(), [](bool z) { return z; });
  bool upper = true;
  bool lower = true;
  bool diagonal = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (r.zero[u(i)][u(j)]) continue;
      if (i <= j) upper = false;
      if (i >= j) lower = false;
      if (i == j) diagonal = false;
    }
  r.def2_upper = upper && some_nonmotion && m > 1;
  r.def2_lower = lower && some_nonmotion && m > 1;
  r.def2_pass = r.def2_upper || r.def2_lower;
  r.def3_pass = diagonal && no_motion && m > 0;
  return r;
}

CompleteSetReport complete_set_analysis(const MetricField& g, const FrameSet& frame, CompleteSetMode mode,
                                        const Chart& chart, const NumericContext& ctx) {
  return complete_set_analysis(g.tensor(), frame, mode, chart, ctx);
}

CompleteSetReport scalar_weak_analysis(const Expr& f, const FrameSet& frame, CompleteSetMode mode,
                                       const Chart& chart, const NumericContext& ctx) {
  return complete_set_analysis(TensorField(chart.dim(), 0, 0, {f}), frame, mode, chart, ctx);
}

CommutatorReport commutator_consistency(const TensorField& g, const FrameSet& frame, const StructureFunctions& c,
                                        const Chart& chart, const NumericContext& ctx) {
  const int m = frame.size();
  const int n = g.dim();
  if (c.size() != m) throw Error("structure functions do not match the frame");
  CommutatorReport r;
  r.constant_structure =
      std::all_of(c.components().begin(), c.components().end(), [](const Expr& e) { return is_coordinate_free(e); });
  std::vector<TensorField> single;
  std::vector<TensorField> lowered;
  for (int k = 0; k < m; ++k) {
    single.push_back(lie_derivative(frame[k], g));
    lowered.push_back(lower_index(g, frame[k]));
  }
  std::vector<Expr> plain;
  std::vector<Expr> corrected;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      TensorField lhs = lie_derivative(frame[i], single[u(j)]) - lie_derivative(frame[j], single[u(i)]);
      for (int k = 0; k < m; ++k)
        if (!c(i, j, k).is_zero()) lhs = lhs - c(i, j, k) * single[u(k)];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<Expr> corr;
          for (int k = 0; k < m; ++k) {
            if (is_coordinate_free(c(i, j, k))) continue;
            corr.push_back(diff(c(i, j, k), a) * lowered[u(k)](b));
            corr.push_back(diff(c(i, j, k), b) * lowered[u(k)](a));
          }
          plain.push_back(lhs(a, b));
          corrected.push_back(lhs(a, b) - Expr::sum(std::move(corr)));
        }
    }
  r.plain = zero_test(plain, chart, ctx);
  r.corrected = zero_test(corrected, chart, ctx);
  return r;
}

TensorField flat_weak_affine_condition(const VectorField& x) {
  const int n = x.dim();
  // d1[c][a] = d_a xi^c, d2[c][a][b] = d_a d_b xi^c
  std::vector<std::vector<Expr>> d1(u(n), std::vector<Expr>(u(n)));
  std::vector<std::vector<std::vector<Expr>>> d2(u(n), std::vector<std::vector<Expr>>(u(n), std::vector<Expr>(u(n))));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a) {
      d1[u(c)][u(a)] = diff(x[c], a);
      for (int b = 0; b < n; ++b) d2[u(c)][u(a)][u(b)] = diff(d1[u(c)][u(a)], b);
    }
  TensorField r(n, 1, 2);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::vector<Expr> terms;
        for (int s = 0; s < n; ++s) {
          terms.push_back(x[s] * diff(d2[u(c)][u(a)][u(b)], s));
          terms.push_back(d2[u(c)][u(b)][u(s)] * d1[u(s)][u(a)]);
          terms.push_back(d2[u(c)][u(a)][u(s)] * d1[u(s)][u(b)]);
          terms.push_back(-(d2[u(s)][u(a)][u(b)] * d1[u(c)][u(s)]));
        }
        r(c, a, b) = Expr::sum(std::move(terms));
      }
  return r;
}

CollineationReport collineation_analysis(const MetricField& g, const VectorField& x, const Chart& chart,
                                         const NumericContext& ctx, bool weak_curvature) {
  g.require_nondegenerate(chart, ctx);
  const int n = g.dim();
  const TensorField& gi = g.inverse();
  TensorField G = christoffel(g);
  TensorField R = riemann_from_connection(G);
  TensorField ric(n, 0, 2);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      std::vector<Expr> terms;
      for (int a = 0; a < n; ++a) terms.push_back(R(a, b, a, d));
      ric(b, d) = Expr::sum(std::move(terms));
    }

  CollineationReport r;
  TensorField direct = lie_derivative_connection_direct(G, x);
  r.affine = lie_derivative_connection_identity(G, R, x);
  ZeroCheck agree = zero_test(direct - r.affine, chart, ctx);
  if (!agree.all_zero) throw ConventionMismatch("L_xi Gamma routes disagree");
  r.curvature = lie_derivative(x, R);
  r.ricci = lie_derivative(x, ric);
  r.weak_affine = lie_derivative(x, r.affine);
  r.weak_ricci = lie_derivative(x, r.ricci);
  r.affine_check = zero_test(r.affine, chart, ctx);
  r.curvature_check = zero_test(r.curvature, chart, ctx);
  r.ricci_check = zero_test(r.ricci, chart, ctx);
  r.weak_affine_check = zero_test(r.weak_affine, chart, ctx);
  r.weak_ricci_check = zero_test(r.weak_ricci, chart, ctx);
  if (weak_curvature) {
    r.weak_curvature = lie_derivative(x, r.curvature);
    r.weak_curvature_check = zero_test(r.weak_curvature, chart, ctx);
  }

  r.flat = coordinate_free(g.tensor());
  if (r.flat) {
    r.flat_condition = flat_weak_affine_condition(x);
    r.flat_condition_check = zero_test(r.flat_condition, chart, ctx);
    r.flat_agreement = zero_test(r.flat_condition - r.weak_affine, chart, ctx);
  }

  TensorField gamma = lie_derivative(x, g.tensor());
  TensorField lgamma = lie_derivative(x, gamma);
  TensorField dg = covariant_derivative(gamma, G);
  TensorField dlg = covariant_derivative(lgamma, G);
  // bracket(a,b,s) = nabla_(a T_b)s - 1/2 nabla_s U_ab
  auto bracket = [&](const TensorField& sym, const TensorField& half) {
    TensorField out(n, 0, 3);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s)
          out(a, b, s) = kHalf * (sym(b, s, a) + sym(a, s, b)) - kHalf * half(a, b, s);
    return out;
  };
  auto riemcollin = [&](const TensorField& first, const TensorField& second) {
    // first: contracted with -g^{cp} g^{sq} gamma_pq; second: with g^{cs}
    ExprMatrix G2 = matmul(matmul(to_matrix(gi), to_matrix(gamma)), to_matrix(gi));
    TensorField out(n, 1, 2);
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<Expr> terms;
          for (int s = 0; s < n; ++s) {
            if (!G2[u(c)][u(s)].is_zero()) terms.push_back(-(G2[u(c)][u(s)] * first(a, b, s)));
            if (gi(c, s).is_zero()) continue;
            std::vector<Expr> inner{second(a, b, s)};
            for (int t = 0; t < n; ++t)
              if (!r.affine(t, a, b).is_zero() && !gamma(s, t).is_zero())
                inner.push_back(-(r.affine(t, a, b) * gamma(s, t)));
            terms.push_back(gi(c, s) * Expr::sum(std::move(inner)));
          }
          out(c, a, b) = Expr::sum(std::move(terms));
        }
    return out;
  };
  TensorField printed = riemcollin(bracket(dg, dlg), bracket(dlg, dg));
  TensorField exchanged = riemcollin(bracket(dg, dg), bracket(dlg, dlg));
  r.riemcollin_printed = zero_test(printed - r.weak_affine, chart, ctx);
  r.riemcollin_exchanged = zero_test(exchanged - r.weak_affine, chart, ctx);
  return r;
}

IntegrabilityReport integrability_residuals(const MetricField& g, const VectorField& x, const Chart& chart,
                                            const NumericContext& ctx, bool with_cond2) {
  g.require_nondegenerate(chart, ctx);
  const int n = g.dim();
  TensorField G = christoffel(g);
  TensorField R = riemann_from_connection(G);
  TensorField gamma = lie_derivative(x, g.tensor());
  TensorField xi = lower_index(g.tensor(), x);
  TensorField d1 = covariant_derivative(xi, G);
  TensorField d2 = covariant_derivative(d1, G);  // d2(a,c,b) = nabla_b nabla_c xi_a
  TensorField dg = covariant_derivative(gamma, G);  // dg(x,y,z) = nabla_z gamma_xy

  IntegrabilityReport r;
  r.cond1 = TensorField(n, 0, 3);
  r.cond1_corrected = TensorField(n, 0, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        // The curvature term is read in the opposite-sign Riemann convention.
        std::vector<Expr> lhs{d2(a, c, b)};
        for (int d = 0; d < n; ++d)
          if (!xi(d).is_zero() && !R(d, b, c, a).is_zero()) lhs.push_back(-(xi(d) * R(d, b, c, a)));
        Expr left = Expr::sum(std::move(lhs));
        Expr common = dg(a, c, b) + dg(b, a, c);
        r.cond1(a, b, c) = left - kHalf * (common + dg(c, b, a));
        r.cond1_corrected(a, b, c) = left - kHalf * (common - dg(c, b, a));
      }
  r.cond1_check = zero_test(r.cond1, chart, ctx);
  r.cond1_corrected_check = zero_test(r.cond1_corrected, chart, ctx);

  r.flat = coordinate_free(g.tensor());
  if (r.flat) {
    // p[a][c] = d_c xi_a
    std::vector<std::vector<Expr>> p(u(n), std::vector<Expr>(u(n)));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) p[u(a)][u(c)] = diff(xi(a), c);
    auto sym = [&](int a, int c) { return kHalf * (p[u(a)][u(c)] + p[u(c)][u(a)]); };
    r.cond1a = TensorField(n, 0, 3);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          r.cond1a(a, b, c) = diff(p[u(a)][u(c)], b) - (diff(sym(a, c), b) + diff(sym(b, a), c) + diff(sym(c, b), a));
    r.cond1a_check = zero_test(r.cond1a, chart, ctx);
  }

  if (with_cond2) {
    TensorField d3 = covariant_derivative(d2, G);  // d3(a,c,b,d) = nabla_d nabla_b nabla_c xi_a
    TensorField ddg = covariant_derivative(dg, G);  // ddg(x,y,z,w) = nabla_w nabla_z gamma_xy
    r.cond2 = TensorField(n, 0, 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            std::vector<Expr> terms{d3(a, c, b, d), d3(c, d, b, a), d3(d, a, b, c),
                                    -(kHalf * (ddg(a, c, b, d) + ddg(c, d, b, a) + ddg(d, a, b, c)))};
            for (int s = 0; s < n; ++s) {
              terms.push_back(-(gamma(a, s) * R(s, b, c, d)));
              terms.push_back(-(gamma(c, s) * R(s, b, d, a)));
              terms.push_back(-(gamma(d, s) * R(s, b, a, c)));
            }
            r.cond2(a, b, c, d) = Expr::sum(std::move(terms));
          }
    r.cond2_check = zero_test(r.cond2, chart, ctx);
  }
  return r;
}

}  // namespace weaklie
