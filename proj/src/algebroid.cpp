#include "weaklie/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "weaklie/errors.hpp"
#include "weaklie/linalg.hpp"

namespace weaklie {
namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

struct Part {
  Expr free;
  Expr coefficient;
};

// Groups the terms of e by the product of their factors that involve a
// coordinate outside `structure`; the remaining factors form the coefficient.
std::vector<Part> split_free(const Expr& e, const std::vector<int>& free_coords) {
  std::vector<Part> parts;
  if (e.is_zero()) return parts;
  std::vector<Expr> terms = e.kind() == Kind::Sum ? e.children() : std::vector<Expr>{e};
  std::unordered_map<Expr, std::size_t, ExprHash> where;
  for (const Expr& t : terms) {
    std::vector<Expr> factors = t.kind() == Kind::Product ? t.children() : std::vector<Expr>{t};
    std::vector<Expr> fv;
    std::vector<Expr> cv;
    for (const Expr& f : factors) {
      bool free = std::any_of(free_coords.begin(), free_coords.end(), [&](int c) { return depends_on_coord(f, c); });
      (free ? fv : cv).push_back(f);
    }
    Expr v = Expr::product(std::move(fv));
    Expr c = Expr::product(std::move(cv));
    auto it = where.find(v);
    if (it == where.end()) {
      where.emplace(v, parts.size());
      parts.push_back({v, c});
    } else {
      parts[it->second].coefficient += c;
    }
  }
  return parts;
}

struct RowKey {
  int component;
  Expr free;
};

struct LinearSystem {
  std::vector<RowKey> rows;
  // entries[r][k]: coefficient of c^k in row r
  std::vector<std::vector<Expr>> entries;

  int find(int a, const Expr& v) const {
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].component == a && rows[r].free == v) return static_cast<int>(r);
    return -1;
  }
};

LinearSystem build_system(const FrameSet& frame, const std::vector<int>& free_coords) {
  const int m = frame.size();
  const int n = frame[0].dim();
  LinearSystem sys;
  for (int k = 0; k < m; ++k) {
    for (int a = 0; a < n; ++a) {
      for (const Part& p : split_free(frame[k][a], free_coords)) {
        int r = sys.find(a, p.free);
        if (r < 0) {
          r = static_cast<int>(sys.rows.size());
          sys.rows.push_back({a, p.free});
          sys.entries.emplace_back(u(m), Expr(0));
        }
        sys.entries[u(r)][u(k)] += p.coefficient;
      }
    }
  }
  return sys;
}

double abs_det(const Matrix& full, const std::vector<int>& rows) {
  Matrix sub;
  for (int r : rows) sub.push_back(full[u(r)]);
  return std::abs(determinant(sub));
}

// Exhaustive search for the largest |det| when the subset count is small,
// greedy orthogonal selection otherwise.
std::vector<int> choose_pivots(const Matrix& a, int m) {
  const int rows = static_cast<int>(a.size());
  double count = 1.0;
  for (int i = 0; i < m; ++i) count = count * (rows - i) / (i + 1);
  std::vector<int> best;
  if (count <= 20000.0) {
    std::vector<int> pick(u(m));
    std::iota(pick.begin(), pick.end(), 0);
    double best_det = -1.0;
    while (true) {
      double d = abs_det(a, pick);
      if (d > best_det) {
        best_det = d;
        best = pick;
      }
      int i = m - 1;
      while (i >= 0 && pick[u(i)] == rows - m + i) --i;
      if (i < 0) break;
      ++pick[u(i)];
      for (int j = i + 1; j < m; ++j) pick[u(j)] = pick[u(j - 1)] + 1;
    }
    return best;
  }
  std::vector<std::vector<double>> basis;
  std::vector<bool> used(u(rows), false);
  for (int step = 0; step < m; ++step) {
    int arg = -1;
    double norm = -1.0;
    std::vector<double> arg_vec;
    for (int r = 0; r < rows; ++r) {
      if (used[u(r)]) continue;
      std::vector<double> v = a[u(r)];
      for (const auto& b : basis) {
        double dot = std::inner_product(v.begin(), v.end(), b.begin(), 0.0);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= dot * b[k];
      }
      double nn = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      if (nn > norm) {
        norm = nn;
        arg = r;
        arg_vec = v;
      }
    }
    if (arg < 0 || norm == 0.0) break;
    for (double& x : arg_vec) x /= norm;
    basis.push_back(arg_vec);
    used[u(arg)] = true;
    best.push_back(arg);
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<int> free_coordinates(const Chart& chart, const ExtractionOptions& options) {
  std::vector<int> out;
  if (options.structure_coordinates.empty()) return out;
  for (int c = 0; c < chart.dim(); ++c)
    if (!options.structure_coordinates.count(c)) out.push_back(c);
  return out;
}

StructureFunctions solve(const FrameSet& frame, const Chart& chart, const NumericContext& ctx,
                         const ExtractionOptions& options) {
  const int m = frame.size();
  if (m < 1) throw RankDeficientFrame("empty frame");
  const int n = frame[0].dim();
  if (n != chart.dim()) throw Error("frame dimension does not match the chart");
  const std::vector<int> free_coords = free_coordinates(chart, options);
  LinearSystem sys = build_system(frame, free_coords);
  const int rows = static_cast<int>(sys.rows.size());
  if (rows < m) throw RankDeficientFrame("frame spans fewer than " + std::to_string(m) + " independent directions");

  std::vector<Expr> flat;
  for (const auto& row : sys.entries) flat.insert(flat.end(), row.begin(), row.end());
  SampledValues sv = sample_values(flat, chart, ctx, ctx.samples);
  int full_sample = -1;
  int generic_rank = 0;
  std::vector<Matrix> numeric(sv.values.size(), Matrix(u(rows), std::vector<double>(u(m))));
  for (std::size_t s = 0; s < sv.values.size(); ++s) {
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < m; ++k) numeric[s][u(r)][u(k)] = sv.values[s][u(r * m + k)];
    int rank = numeric_rank(numeric[s], ctx.tolerance);
    generic_rank = std::max(generic_rank, rank);
    if (rank == m && full_sample < 0) full_sample = static_cast<int>(s);
  }
  if (full_sample < 0) {
    throw RankDeficientFrame("frame component matrix has generic rank " + std::to_string(generic_rank) + " < " +
                             std::to_string(m));
  }
  std::vector<int> pivots = choose_pivots(numeric[u(full_sample)], m);

  std::vector<std::vector<Expr>> a(u(m));
  for (int i = 0; i < m; ++i) a[u(i)] = sys.entries[u(pivots[u(i)])];
  Expr det = symbolic_determinant(a);
  if (det.is_zero()) throw RankDeficientFrame("pivot block is singular");
  Expr inv_det = pow(det, Rational(-1));
  // adj[k][r] = (-1)^(k+r) det(a without row r and column k)
  std::vector<std::vector<Expr>> adj(u(m), std::vector<Expr>(u(m)));
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k < m; ++k) {
      std::vector<std::vector<Expr>> minor;
      for (int i = 0; i < m; ++i) {
        if (i == r) continue;
        std::vector<Expr> row;
        for (int j = 0; j < m; ++j)
          if (j != k) row.push_back(a[u(i)][u(j)]);
        minor.push_back(std::move(row));
      }
      Expr d = symbolic_determinant(minor);
      adj[u(k)][u(r)] = (k + r) % 2 == 0 ? d : -d;
    }
  }

  StructureFunctions c(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      VectorField br = lie_bracket(frame[i], frame[j]);
      std::vector<Expr> rhs(u(m), Expr(0));
      for (int a_ = 0; a_ < n; ++a_) {
        for (const Part& p : split_free(br[a_], free_coords)) {
          for (int r = 0; r < m; ++r) {
            const RowKey& key = sys.rows[u(pivots[u(r)])];
            if (key.component == a_ && key.free == p.free) rhs[u(r)] += p.coefficient;
          }
        }
      }
      for (int k = 0; k < m; ++k) {
        std::vector<Expr> terms;
        for (int r = 0; r < m; ++r)
          if (!adj[u(k)][u(r)].is_zero() && !rhs[u(r)].is_zero()) terms.push_back(adj[u(k)][u(r)] * rhs[u(r)]);
        c.set(i, j, k, Expr::sum(std::move(terms)) * inv_det);
      }
    }
  }
  return c;
}

}  // namespace

void StructureFunctions::set(int i, int j, int k, const Expr& value) {
  (*this)(i, j, k) = value;
  (*this)(j, i, k) = -value;
}

std::vector<Expr> structure_residual(const StructureFunctions& c, const FrameSet& frame) {
  const int m = frame.size();
  std::vector<Expr> out;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      VectorField br = lie_bracket(frame[i], frame[j]);
      for (int a = 0; a < br.dim(); ++a) {
        std::vector<Expr> terms{br[a]};
        for (int k = 0; k < m; ++k)
          if (!c(i, j, k).is_zero() && !frame[k][a].is_zero()) terms.push_back(-(c(i, j, k) * frame[k][a]));
        out.push_back(Expr::sum(std::move(terms)));
      }
    }
  }
  return out;
}

Extraction try_extract_structure_functions(const FrameSet& frame, const Chart& chart, const NumericContext& ctx,
                                           const ExtractionOptions& options) {
  Extraction out;
  try {
    out.c = solve(frame, chart, ctx, options);
  } catch (const RankDeficientFrame& e) {
    out.rank_deficient = true;
    out.message = e.what();
    return out;
  }
  ZeroCheck z = zero_test(structure_residual(out.c, frame), chart, ctx);
  out.c.residual_max = z.max_residual;
  out.involutive = z.all_zero;
  if (!out.involutive) {
    out.message = "bracket leaves the span of the frame (relative residual " + std::to_string(z.max_residual) + ")";
  }
  return out;
}

StructureFunctions extract_structure_functions(const FrameSet& frame, const Chart& chart, const NumericContext& ctx,
                                               const ExtractionOptions& options) {
  Extraction e = try_extract_structure_functions(frame, chart, ctx, options);
  if (e.rank_deficient) throw RankDeficientFrame(e.message);
  if (!e.involutive) throw NotInvolutive(e.message);
  return e.c;
}

bool is_lie_algebra(const StructureFunctions& c, const Chart& chart, const NumericContext& ctx) {
  std::vector<Expr> derivs;
  for (const Expr& e : c.components()) {
    if (is_coordinate_free(e)) continue;
    for (int a = 0; a < chart.dim(); ++a) derivs.push_back(diff(e, a));
  }
  return derivs.empty() || zero_test(derivs, chart, ctx).all_zero;
}

std::vector<Expr> jacobi_expressions(const StructureFunctions& c, const FrameSet& frame) {
  const int m = c.size();
  std::vector<Expr> out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int mm = 0; mm < m; ++mm) {
          std::vector<Expr> terms;
          for (int l = 0; l < m; ++l) {
            terms.push_back(c(j, k, l) * c(i, l, mm));
            terms.push_back(c(i, j, l) * c(k, l, mm));
            terms.push_back(c(k, i, l) * c(j, l, mm));
          }
          terms.push_back(lie_derivative_scalar(frame[i], c(j, k, mm)));
          terms.push_back(lie_derivative_scalar(frame[k], c(i, j, mm)));
          terms.push_back(lie_derivative_scalar(frame[j], c(k, i, mm)));
          out.push_back(Expr::sum(std::move(terms)));
        }
  return out;
}

ResidualReport jacobi_residual(const StructureFunctions& c, const FrameSet& frame, const Chart& chart,
                               const NumericContext& ctx) {
  ResidualReport r;
  r.residual = jacobi_expressions(c, frame);
  r.check = zero_test(r.residual, chart, ctx);
  return r;
}

ResidualReport liealg3_residual(const StructureFunctions& c, const FrameSet& frame, const Chart& chart,
                                const NumericContext& ctx) {
  const int m = c.size();
  ResidualReport r;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        VectorField lhs = lie_bracket(frame[i], lie_bracket(frame[j], frame[k]));
        std::vector<Expr> coef(u(m));
        for (int mm = 0; mm < m; ++mm) {
          std::vector<Expr> terms{lie_derivative_scalar(frame[i], c(j, k, mm))};
          for (int l = 0; l < m; ++l) terms.push_back(c(j, k, l) * c(i, l, mm));
          coef[u(mm)] = Expr::sum(std::move(terms));
        }
        for (int a = 0; a < lhs.dim(); ++a) {
          std::vector<Expr> terms{lhs[a]};
          for (int mm = 0; mm < m; ++mm) terms.push_back(-(coef[u(mm)] * frame[mm][a]));
          r.residual.push_back(Expr::sum(std::move(terms)));
        }
      }
  r.check = zero_test(r.residual, chart, ctx);
  return r;
}

AlgebraForm cartan_killing_sigma(const StructureFunctions& c) {
  const int m = c.size();
  AlgebraForm s(u(m), std::vector<Expr>(u(m)));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      std::vector<Expr> terms;
      for (int l = 0; l < m; ++l)
        for (int mm = 0; mm < m; ++mm)
          if (!c(i, l, mm).is_zero() && !c(j, mm, l).is_zero()) terms.push_back(c(i, l, mm) * c(j, mm, l));
      s[u(i)][u(j)] = s[u(j)][u(i)] = Expr::sum(std::move(terms));
    }
  return s;
}

AlgebraForm extended_cartan_killing_tau(const StructureFunctions& c, const FrameSet& frame,
                                        TauConvention convention) {
  const int m = c.size();
  if (frame.size() != m) throw Error("frame size does not match the structure functions");
  AlgebraForm t = cartan_killing_sigma(c);
  std::vector<Expr> trace(u(m));
  for (int j = 0; j < m; ++j) {
    std::vector<Expr> terms;
    for (int mm = 0; mm < m; ++mm) terms.push_back(c(j, mm, mm));
    trace[u(j)] = Expr::sum(std::move(terms));
  }
  const Expr weight = convention == TauConvention::worked_examples ? Expr(Rational(1, 2)) : Expr(1);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Expr d = lie_derivative_scalar(frame[i], trace[u(j)]) + lie_derivative_scalar(frame[j], trace[u(i)]);
      t[u(i)][u(j)] = t[u(j)][u(i)] = t[u(i)][u(j)] + weight * d;
    }
  return t;
}

StructureFunctions inner_product_structure_functions(const FrameSet& frame, const TensorField& g) {
  const int m = frame.size();
  if (g.upper() != 0 || g.lower() != 2) throw Error("inner product needs a (0,2) tensor");
  StructureFunctions c(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::vector<Expr> terms;
      for (int r = 0; r < g.dim(); ++r)
        for (int s = 0; s < g.dim(); ++s)
          if (!g(r, s).is_zero()) terms.push_back(frame[i][r] * frame[j][s] * g(r, s));
      Expr dot = Expr::sum(std::move(terms));
      c.set(i, j, i, dot);
      c.set(i, j, j, -dot);
    }
  return c;
}

}  // namespace weaklie
