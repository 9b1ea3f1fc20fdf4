#include "weaklie/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "weaklie/errors.hpp"

namespace weaklie {

std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw Error("jacobi_eigenvalues needs a square matrix");
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += a[i][j] * a[i][j];
        if (i != j) off += a[i][j] * a[i][j];
      }
    }
    if (off <= 1e-30 * total || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

Inertia inertia(const std::vector<double>& eigenvalues, double rel_tol) {
  double largest = 0.0;
  for (double v : eigenvalues) largest = std::max(largest, std::abs(v));
  Inertia out;
  for (double v : eigenvalues) {
    if (largest == 0.0 || std::abs(v) <= rel_tol * largest) {
      ++out.zero;
    } else if (v > 0) {
      ++out.plus;
    } else {
      ++out.minus;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(m[0].size());
  Eigen::MatrixXd e(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(m[static_cast<std::size_t>(i)].size()) != cols) throw Error("ragged matrix");
    for (Eigen::Index j = 0; j < cols; ++j) e(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return e;
}

}  // namespace

int numeric_rank(const Matrix& m, double rel_tol) {
  if (m.empty() || m[0].empty()) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(m));
  lu.setThreshold(rel_tol);
  return static_cast<int>(lu.rank());
}

double determinant(const Matrix& m) {
  if (m.empty()) return 1.0;
  Eigen::MatrixXd e = to_eigen(m);
  if (e.rows() != e.cols()) throw Error("determinant needs a square matrix");
  return e.fullPivLu().determinant();
}

Expr symbolic_determinant(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error("symbolic_determinant needs a square matrix");
  if (n == 0) return Expr(1);
  if (n > 16) throw Error("matrix too large for symbolic determinant");
  std::unordered_map<std::uint32_t, Expr> memo;
  // det of the rows [n - popcount(mask), n) restricted to the columns in mask
  std::function<Expr(std::uint32_t)> det = [&](std::uint32_t mask) -> Expr {
    const int cols = __builtin_popcount(mask);
    if (cols == 0) return Expr(1);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const std::size_t row = n - static_cast<std::size_t>(cols);
    std::vector<Expr> terms;
    int position = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const Expr& entry = m[row][c];
      if (!entry.is_zero()) {
        Expr minor = det(mask & ~(1u << c));
        if (!minor.is_zero()) {
          Expr t = entry * minor;
          terms.push_back(position % 2 == 0 ? t : -t);
        }
      }
      ++position;
    }
    Expr r = Expr::sum(std::move(terms));
    memo.emplace(mask, r);
    return r;
  };
  return det((n == 32 ? 0u : (1u << n)) - 1u);
}

}  // namespace weaklie
