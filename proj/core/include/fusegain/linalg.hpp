#pragma once

#include <Eigen/Dense>

#include "fusegain/rng.hpp"

namespace fusegain {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// log det of a symmetric positive definite matrix via Cholesky;
// throws NumericalFailure if the factorization breaks down
double logdet_pd(const Matrix& a);

// Cholesky-based inverse; `what` names the matrix in the SingularMatrix error
Matrix inv_pd(const Matrix& a, const char* what);

// X = A^-1 B for symmetric positive definite A
Matrix solve_pd(const Matrix& a, const Matrix& b, const char* what);

double min_eigenvalue_sym(const Matrix& a);

struct SymEigen {
  Vector values;   // sorted per request
  Matrix vectors;  // columns follow values
};

// Symmetric eigendecomposition with a deterministic convention: each
// eigenvector's first component of magnitude > 1e-12 is made positive, ties
// keep their original index order, and numerically diagonal input short-
// circuits to signed unit vectors so degenerate spectra stay canonical.
SymEigen sym_eigen_sorted(const Matrix& a, bool ascending);

// true iff a = sigma2 * I within tol * max(1, |sigma2|) entrywise;
// sigma2 receives the mean diagonal value
bool is_scaled_identity(const Matrix& a, double tol, double* sigma2);

// Haar-ish random orthogonal matrix: QR of a gaussian matrix with the R
// diagonal sign fix
Matrix random_orthogonal(int n, Rng& rng);

int numerical_rank_svd(const Matrix& g, double rel_tol);

}  // namespace fusegain
