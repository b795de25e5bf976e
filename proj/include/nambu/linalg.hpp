#pragma once

#include "nambu/scalars.hpp"

#include <vector>

namespace nambu {

// Thin wrappers over the numeric and exact linear algebra the engine needs:
// SVD-based numerical rank, dense solves, and exact rational rank / span
// membership for restriction subbundles and Lie-algebra checks.

using Mat = std::vector<std::vector<double>>;  // row-major dense

/// Numerical rank via SVD with threshold rel_tol * sigma_max.
int numerical_rank(const Mat& m, double rel_tol = 1e-10);

/// Largest singular value (0 for empty matrices).
double sigma_max(const Mat& m);

/// Solves the square system a x = b; throws StructuralError when singular.
std::vector<double> solve_dense(const Mat& a, const std::vector<double>& b);

/// Inverse of a square matrix.
Mat invert_dense(const Mat& a);

double det_dense(const Mat& a);

/// Least-squares solution of a x = b (possibly over/under-determined).
std::vector<double> solve_least_squares(const Mat& a, const std::vector<double>& b);

using RatMat = std::vector<std::vector<Rat>>;

/// Exact rank by fraction-free Gaussian elimination.
int rational_rank(const RatMat& m);

/// Whether v lies in the row span of m, exactly.
bool in_row_span(const RatMat& m, const std::vector<Rat>& v);

/// Exact solve of the square system a x = b; empty optional when singular.
std::vector<Rat> rational_solve(const RatMat& a, const std::vector<Rat>& b);

/// Basis of the null space of m (as column vectors), exact.
std::vector<std::vector<Rat>> rational_nullspace(const RatMat& m);

}  // namespace nambu
