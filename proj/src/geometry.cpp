#include "weaklie/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "weaklie/errors.hpp"
#include "weaklie/linalg.hpp"

namespace weaklie {
namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

// Connected components of the structural nonzero pattern of g.
std::vector<std::vector<int>> blocks_of(const TensorField& g) {
  const int n = g.dim();
  std::vector<int> comp(u(n), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[u(s)] >= 0) continue;
    std::vector<int> members{s};
    comp[u(s)] = static_cast<int>(out.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (int b = 0; b < n; ++b) {
        if (comp[u(b)] < 0 && !g(members[k], b).is_zero()) {
          comp[u(b)] = comp[u(s)];
          members.push_back(b);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace

MetricField::MetricField(TensorField g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
  if (g_.upper() != 0 || g_.lower() != 2) throw InvariantViolation("metric must be a (0,2) tensor");
  for (int a = 0; a < g_.dim(); ++a)
    for (int b = a + 1; b < g_.dim(); ++b)
      if (!(g_(a, b) == g_(b, a))) throw InvariantViolation("metric components are not symmetric");
}

MetricField MetricField::from_matrix(const std::vector<std::vector<Expr>>& m) {
  return MetricField(TensorField::from_matrix(m));
}

MetricField MetricField::diagonal(const std::vector<Expr>& d) {
  const int n = static_cast<int>(d.size());
  TensorField t(n, 0, 2);
  for (int a = 0; a < n; ++a) t(a, a) = d[u(a)];
  return MetricField(std::move(t));
}

void MetricField::fill() const {
  std::call_once(cache_->once, [this] {
    const int n = g_.dim();
    TensorField inv(n, 2, 0);
    TensorField adj(n, 2, 0);
    std::vector<int> block_of(u(n));
    std::vector<Expr> dets;
    std::vector<std::vector<int>> blocks = blocks_of(g_);
    for (const auto& block : blocks) {
      const int k = static_cast<int>(block.size());
      if (k == 1) {
        const Expr& e = g_(block[0], block[0]);
        if (e.is_zero()) throw DegenerateMetric("metric determinant vanishes identically");
        inv(block[0], block[0]) = pow(e, Rational(-1));
        adj(block[0], block[0]) = 1;
        dets.push_back(e);
        continue;
      }
      std::vector<std::vector<Expr>> m(u(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m[u(i)].push_back(g_(block[u(i)], block[u(j)]));
      Expr det = symbolic_determinant(m);
      if (det.is_zero()) throw DegenerateMetric("metric determinant vanishes identically");
      Expr inv_det = pow(det, Rational(-1));
      for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
          // cofactor of (j,i) = transpose entry of the adjugate
          std::vector<std::vector<Expr>> minor;
          for (int r = 0; r < k; ++r) {
            if (r == j) continue;
            std::vector<Expr> row;
            for (int c = 0; c < k; ++c)
              if (c != i) row.push_back(m[u(r)][u(c)]);
            minor.push_back(std::move(row));
          }
          Expr cof = symbolic_determinant(minor);
          if ((i + j) % 2 != 0) cof = -cof;
          Expr e = cof * inv_det;
          inv(block[u(i)], block[u(j)]) = e;
          inv(block[u(j)], block[u(i)]) = e;
          adj(block[u(i)], block[u(j)]) = cof;
          adj(block[u(j)], block[u(i)]) = cof;
        }
      }
      dets.push_back(det);
    }
    // Entries of one block carry the determinants of all other blocks.
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
      for (int a : blocks[bi]) block_of[u(a)] = static_cast<int>(bi);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (adj(a, b).is_zero()) continue;
        std::vector<Expr> f{adj(a, b)};
        for (std::size_t bi = 0; bi < blocks.size(); ++bi)
          if (static_cast<int>(bi) != block_of[u(a)]) f.push_back(dets[bi]);
        adj(a, b) = Expr::product(std::move(f));
      }
    cache_->det = Expr::product(std::move(dets));
    cache_->inv = std::move(inv);
    cache_->adj = std::move(adj);
  });
}

const Expr& MetricField::determinant() const {
  fill();
  return cache_->det;
}

const TensorField& MetricField::inverse() const {
  fill();
  return cache_->inv;
}

const TensorField& MetricField::adjugate() const {
  fill();
  return cache_->adj;
}

void MetricField::require_nondegenerate(const Chart& chart, const NumericContext& ctx) const {
  if (is_identically_zero(determinant(), chart, ctx)) {
    throw DegenerateMetric("metric determinant vanishes identically");
  }
}

TensorField MetricField::inverse_residual() const {
  const int n = dim();
  const TensorField& gi = inverse();
  TensorField r(n, 1, 1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::vector<Expr> terms;
      for (int c = 0; c < n; ++c) terms.push_back(gi(a, c) * g_(c, b));
      if (a == b) terms.push_back(Expr(-1));
      r(a, b) = Expr::sum(std::move(terms));
    }
  }
  return r;
}

TensorField christoffel(const MetricField& g) {
  const int n = g.dim();
  const TensorField& gi = g.inverse();
  // dg[s][a][b] = d_s g_ab
  std::vector<TensorField> dg;
  for (int s = 0; s < n; ++s) {
    TensorField d(n, 0, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d(a, b) = diff(g(a, b), s);
    dg.push_back(std::move(d));
  }
  const Expr half(Rational(1, 2));
  TensorField first(n, 0, 3);  // Gamma_{s,ab}
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Expr e = half * (dg[u(b)](s, a) + dg[u(a)](s, b) - dg[u(s)](a, b));
        first(s, a, b) = e;
        first(s, b, a) = e;
      }
  TensorField gamma(n, 1, 2);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        std::vector<Expr> terms;
        for (int s = 0; s < n; ++s)
          if (!gi(c, s).is_zero() && !first(s, a, b).is_zero()) terms.push_back(gi(c, s) * first(s, a, b));
        Expr e = Expr::sum(std::move(terms));
        gamma(c, a, b) = e;
        gamma(c, b, a) = e;
      }
  return gamma;
}

TensorField riemann_from_connection(const TensorField& G) {
  const int n = G.dim();
  TensorField r(n, 1, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          std::vector<Expr> terms{diff(G(a, d, b), c), -diff(G(a, c, b), d)};
          for (int e = 0; e < n; ++e) {
            if (!G(a, c, e).is_zero() && !G(e, d, b).is_zero()) terms.push_back(G(a, c, e) * G(e, d, b));
            if (!G(a, d, e).is_zero() && !G(e, c, b).is_zero()) terms.push_back(-(G(a, d, e) * G(e, c, b)));
          }
          Expr v = Expr::sum(std::move(terms));
          r(a, b, c, d) = v;
          r(a, b, d, c) = -v;
        }
  return r;
}

CurvatureBundle curvature(const MetricField& g) {
  const int n = g.dim();
  CurvatureBundle out;
  out.riemann = riemann_from_connection(christoffel(g));
  out.ricci = TensorField(n, 0, 2);
  for (int b = 0; b < n; ++b)
    for (int d = b; d < n; ++d) {
      std::vector<Expr> terms;
      for (int a = 0; a < n; ++a) terms.push_back(out.riemann(a, b, a, d));
      Expr e = Expr::sum(std::move(terms));
      out.ricci(b, d) = e;
      out.ricci(d, b) = e;
    }
  const TensorField& gi = g.inverse();
  std::vector<Expr> terms;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      if (!gi(b, d).is_zero()) terms.push_back(gi(b, d) * out.ricci(b, d));
  out.scalar = Expr::sum(std::move(terms));
  out.einstein = out.ricci - (Expr(Rational(1, 2)) * out.scalar) * g.tensor();
  return out;
}

TensorField covariant_derivative(const TensorField& t, const TensorField& G) {
  const int n = t.dim();
  if (G.dim() != n || G.upper() != 1 || G.lower() != 2) throw Error("covariant_derivative needs a (1,2) connection");
  TensorField r(n, t.upper(), t.lower() + 1);
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<int> idx = r.unflatten(k);
    const int c = idx.back();
    std::vector<int> src(idx.begin(), idx.end() - 1);
    std::vector<Expr> terms{diff(t.at(src), c)};
    for (int s = 0; s < t.rank(); ++s) {
      const int orig = src[u(s)];
      const bool up = s < t.upper();
      for (int e = 0; e < n; ++e) {
        const Expr& coeff = up ? G(orig, c, e) : G(e, c, orig);
        if (coeff.is_zero()) continue;
        src[u(s)] = e;
        const Expr& te = t.at(src);
        if (!te.is_zero()) terms.push_back(up ? coeff * te : -(coeff * te));
      }
      src[u(s)] = orig;
    }
    r.components()[k] = Expr::sum(std::move(terms));
  }
  return r;
}

TensorField lie_derivative_connection_direct(const TensorField& G, const VectorField& x) {
  TensorField r = lie_derivative(x, G);
  const int n = G.dim();
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r(c, a, b) = r(c, a, b) + diff(diff(x[c], a), b);
  return r;
}

TensorField lie_derivative_connection_identity(const TensorField& G, const TensorField& riemann,
                                               const VectorField& x) {
  const int n = G.dim();
  TensorField dd = covariant_derivative(covariant_derivative(TensorField::from_vector(x), G), G);
  TensorField r(n, 1, 2);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::vector<Expr> terms{dd(c, b, a)};
        for (int d = 0; d < n; ++d)
          if (!x[d].is_zero() && !riemann(c, b, d, a).is_zero()) terms.push_back(riemann(c, b, d, a) * x[d]);
        r(c, a, b) = Expr::sum(std::move(terms));
      }
  return r;
}

TensorField lie_derivative_connection(const MetricField& g, const VectorField& x, const Chart& chart,
                                      const NumericContext& ctx) {
  TensorField G = christoffel(g);
  TensorField direct = lie_derivative_connection_direct(G, x);
  TensorField via = lie_derivative_connection_identity(G, riemann_from_connection(G), x);
  ZeroCheck z = zero_test(direct - via, chart, ctx);
  if (!z.all_zero) {
    throw ConventionMismatch("L_xi Gamma: direct and nabla-nabla-xi + R xi routes differ (residual " +
                             std::to_string(z.max_residual) + ")");
  }
  return via;
}

Expr gaussian_curvature_2d(const MetricField& g) {
  if (g.dim() != 2) throw Error("gaussian_curvature_2d needs a 2-dimensional metric");
  return Expr(Rational(1, 2)) * curvature(g).scalar;
}

RankSignature rank_and_signature(const std::vector<std::vector<Expr>>& form, const Chart& chart,
                                 const NumericContext& ctx) {
  const std::size_t m = form.size();
  std::vector<Expr> flat;
  for (const auto& row : form) {
    if (row.size() != m) throw Error("bilinear form must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  RankSignature out;
  out.zero = static_cast<int>(m);
  if (m == 0) return out;
  bool all_zero = std::all_of(flat.begin(), flat.end(), [](const Expr& e) { return e.is_zero(); });
  if (all_zero) return out;
  SampledValues sv = sample_values(flat, chart, ctx, ctx.samples);
  int best = -1;
  for (std::size_t s = 0; s < sv.values.size(); ++s) {
    Matrix a(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i][j] = 0.5 * (sv.values[s][i * m + j] + sv.values[s][j * m + i]);
    Inertia in = inertia(jacobi_eigenvalues(a), ctx.tolerance);
    const int rank = in.plus + in.minus;
    if (rank > best) {
      best = rank;
      out.rank = rank;
      out.plus = in.plus;
      out.minus = in.minus;
      out.zero = in.zero;
      out.sample = static_cast<int>(s);
    }
  }
  return out;
}

RankSignature rank_and_signature(const TensorField& form, const Chart& chart, const NumericContext& ctx) {
  return rank_and_signature(form.matrix(), chart, ctx);
}

void null_decompose(const MetricField& g, DragResult& d, const Chart& chart, const NumericContext& ctx) {
  d.null_decomposition = false;
  if (d.rank != 1) return;
  const int n = g.dim();
  std::vector<Expr> diag;
  for (int a = 0; a < n; ++a) diag.push_back(d.gamma(a, a));
  ZeroCheck z = zero_test(diag, chart, ctx);
  int row = -1;
  for (int a = 0; a < n; ++a)
    if (!z.zero[u(a)]) {
      row = a;
      break;
    }
  if (row < 0) return;
  d.k.clear();
  for (int a = 0; a < n; ++a) d.k.push_back(d.gamma(row, a));
  d.phi = pow(d.gamma(row, row), Rational(-1));
  std::vector<Expr> residual;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) residual.push_back(d.gamma(a, b) - d.phi * d.k[u(a)] * d.k[u(b)]);
  const TensorField& gi = g.inverse();
  std::vector<Expr> norm;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!gi(a, b).is_zero()) norm.push_back(gi(a, b) * d.k[u(a)] * d.k[u(b)]);
  residual.push_back(Expr::sum(std::move(norm)));
  d.null_decomposition = zero_test(residual, chart, ctx).all_zero;
}

DragResult drag(const MetricField& g, const VectorField& x, const Chart& chart, const NumericContext& ctx,
                const std::string& generator, const std::string& metric) {
  DragResult d;
  d.gamma = lie_derivative(x, g.tensor());
  d.generator = generator;
  d.metric = metric;
  d.rank = rank_and_signature(d.gamma, chart, ctx).rank;
  null_decompose(g, d, chart, ctx);
  return d;
}

}  // namespace weaklie
