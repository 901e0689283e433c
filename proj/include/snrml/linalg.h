#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace snrml {

// Small dense symmetric positive definite helpers on row-major flat storage.
// The matrices here are basis Gram matrices of a handful of rows and columns,
// so a textbook Cholesky plus cyclic Jacobi is both adequate and dependency
// free.

// Lower-triangular Cholesky factor of the n x n SPD matrix a. Throws
// IllConditioned when a pivot falls below eps_rel times the largest diagonal
// entry (the matrix is not positive definite to working precision).
std::vector<double> cholesky(const std::vector<double>& a, int n, double eps_rel = 1e-13);

// Solve L L^T x = b in place given the lower factor.
void cholesky_solve(const std::vector<double>& l, int n, double* b);

// Same solve applied separately to real and imaginary parts.
void cholesky_solve(const std::vector<double>& l, int n, std::complex<double>* b);

// Eigenvalues of a symmetric n x n matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

// Spectral condition number lambda_max / lambda_min. Returns +infinity when
// the smallest eigenvalue is not positive.
double symmetric_condition(const std::vector<double>& a, int n);

}  // namespace snrml
