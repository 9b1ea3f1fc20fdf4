#pragma once

#include <vector>

#include "weaklie/expr.hpp"

namespace weaklie {

using Matrix = std::vector<std::vector<double>>;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(Matrix a);

struct Inertia {
  int plus = 0;
  int minus = 0;
  int zero = 0;
};

/// Counts eigenvalue signs; |lambda| <= rel_tol * max|lambda| counts as zero.
Inertia inertia(const std::vector<double>& eigenvalues, double rel_tol);

/// Numeric rank of a general rectangular matrix (full-pivot LU).
int numeric_rank(const Matrix& m, double rel_tol);

double determinant(const Matrix& m);

/// Exact determinant by Laplace expansion with minor memoization.
Expr symbolic_determinant(const std::vector<std::vector<Expr>>& m);

}  // namespace weaklie
