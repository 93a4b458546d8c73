#include "fusegain/gain.hpp"

#include <cmath>
#include <string>

#include "fusegain/errors.hpp"

namespace fusegain {

namespace {

void check_shape(const Matrix& G, const DerivedQuantities& d) {
  const Eigen::Index t = d.Q_vv.rows();
  const Eigen::Index q = d.M.rows();
  if (G.rows() != t || G.cols() != q) {
    throw ShapeMismatch("channel matrix must be " + std::to_string(t) + "x" +
                        std::to_string(q) + ", got " +
                        std::to_string(G.rows()) + "x" +
                        std::to_string(G.cols()));
  }
}

// Cholesky factor of Z = G Q_phph_th G' + Q_vv
Eigen::LLT<Matrix> output_cov_llt(const Matrix& G, const DerivedQuantities& d) {
  Matrix Z = symmetrize(G * d.Q_phph_th * G.transpose() + d.Q_vv);
  Eigen::LLT<Matrix> llt(Z);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("output covariance is not positive definite");
  }
  return llt;
}

}  // namespace

double information_gain(const Matrix& G, const DerivedQuantities& d) {
  check_shape(G, d);
  auto llt_z = output_cov_llt(G, d);

  const Matrix GM = G * d.M;                        // t x p
  const Matrix A = GM.transpose() * llt_z.solve(GM);  // p x p, PSD

  // logdet(I + A Q_thth_x) = logdet(I + L' A L) with Q_thth_x = L L'
  Eigen::LLT<Matrix> llt_q(symmetrize(d.Q_thth_x));
  if (llt_q.info() != Eigen::Success) {
    throw NumericalFailure("posterior covariance is not positive definite");
  }
  const Matrix L = llt_q.matrixL();
  const Eigen::Index p = d.Q_thth_x.rows();
  return 0.5 * logdet_pd(Matrix::Identity(p, p) + L.transpose() * A * L);
}

double information_gain_snr(const Matrix& G, const DerivedQuantities& d) {
  check_shape(G, d);
  auto llt_z = output_cov_llt(G, d);
  const Matrix L = llt_z.matrixL();

  const Matrix omega = symmetrize(G * d.S * G.transpose());
  // X = L^-1 omega L^-T
  const Matrix half = L.triangularView<Eigen::Lower>()
                          .solve(omega)
                          .transpose()
                          .eval();
  Matrix X = L.triangularView<Eigen::Lower>().solve(half);
  const Eigen::Index t = d.Q_vv.rows();
  return 0.5 * logdet_pd(Matrix::Identity(t, t) + symmetrize(X));
}

double upper_bound(const DerivedQuantities& d) {
  return 0.5 * (logdet_pd(d.Q_phph_th + d.S) - logdet_pd(d.Q_phph_th));
}

Matrix gradient(const Matrix& G, const DerivedQuantities& d) {
  check_shape(G, d);
  const Matrix Y = d.Q_vv_inv * G;  // t x q
  const Matrix GtY = symmetrize(G.transpose() * Y);
  const Matrix K = symmetrize(d.Q_phph_th_inv + GtY);
  const Matrix KmB = symmetrize(GtY + d.Q_phph_th_S_inv);

  const Matrix BKinv = solve_pd(K, d.B, "gradient kernel K").transpose();
  return Y * solve_pd(KmB, BKinv, "gradient kernel K - B");
}

Matrix fd_gradient(const Matrix& G, const DerivedQuantities& d, double step) {
  check_shape(G, d);
  const double h = step > 0.0 ? step : 1e-6 * (1.0 + G.norm());
  Matrix out(G.rows(), G.cols());
  Matrix work = G;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      const double g0 = work(i, j);
      work(i, j) = g0 + h;
      const double up = information_gain(work, d);
      work(i, j) = g0 - h;
      const double dn = information_gain(work, d);
      work(i, j) = g0;
      out(i, j) = (up - dn) / (2.0 * h);
    }
  }
  return out;
}

}  // namespace fusegain
