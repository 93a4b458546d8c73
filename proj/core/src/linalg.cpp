#include "fusegain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fusegain/errors.hpp"

namespace fusegain {

double logdet_pd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("log-determinant: matrix is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Matrix inv_pd(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw SingularMatrix(std::string("cannot invert ") + what);
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

Matrix solve_pd(const Matrix& a, const Matrix& b, const char* what) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw SingularMatrix(std::string("cannot solve against ") + what);
  }
  return llt.solve(b);
}

double min_eigenvalue_sym(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolve failed");
  }
  return es.eigenvalues().minCoeff();
}

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

bool numerically_diagonal(const Matrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  double off = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(a(i, j)));
  return off <= 1e-13 * scale;
}

}  // namespace

SymEigen sym_eigen_sorted(const Matrix& a, bool ascending) {
  const Eigen::Index n = a.rows();
  Vector vals(n);
  Matrix vecs(n, n);
  if (numerically_diagonal(a)) {
    vals = a.diagonal();
    vecs = Matrix::Identity(n, n);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    if (es.info() != Eigen::Success) {
      throw NumericalFailure("symmetric eigensolve failed");
    }
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return ascending ? vals[i] < vals[j] : vals[i] > vals[j];
                   });

  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = vals[order[static_cast<std::size_t>(k)]];
    out.vectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
    fix_sign(out.vectors.col(k));
  }
  return out;
}

bool is_scaled_identity(const Matrix& a, double tol, double* sigma2) {
  if (a.rows() != a.cols()) return false;
  const double s2 = a.diagonal().mean();
  if (sigma2) *sigma2 = s2;
  const double bound = tol * std::max(1.0, std::abs(s2));
  Matrix resid = a - s2 * Matrix::Identity(a.rows(), a.cols());
  return resid.cwiseAbs().maxCoeff() <= bound;
}

Matrix random_orthogonal(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

int numerical_rank_svd(const Matrix& g, double rel_tol) {
  if (g.rows() == 0 || g.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(g);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double cut = rel_tol * sv[0];
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut) ++r;
  }
  return r;
}

}  // namespace fusegain
