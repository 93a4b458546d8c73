#include "fusegain/model.hpp"

#include <cmath>
#include <string>

#include "fusegain/errors.hpp"

namespace fusegain {

namespace {

void require_shape(const Matrix& m, int rows, int cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(std::string(name) + " must be " +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

void require_pd(const Matrix& m, const char* name) {
  Eigen::LLT<Matrix> llt(symmetrize(m));
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(name);
}

}  // namespace

const TwoChannelSystem& validate_system(const TwoChannelSystem& sys) {
  if (sys.p < 1 || sys.q < 1 || sys.s < 1 || sys.t < 1) {
    throw DimensionMismatch("dimensions p, q, s, t must all be >= 1");
  }
  if (!(sys.P > 0.0) || !std::isfinite(sys.P)) {
    throw ValidationError("power budget P must be positive and finite");
  }
  require_shape(sys.F, sys.s, sys.p, "F");
  require_shape(sys.Q_uu, sys.s, sys.s, "Q_uu");
  require_shape(sys.Q_vv, sys.t, sys.t, "Q_vv");
  require_shape(sys.Q_thth, sys.p, sys.p, "Q_thth");
  require_shape(sys.Q_thph, sys.p, sys.q, "Q_thph");
  require_shape(sys.Q_phph, sys.q, sys.q, "Q_phph");

  require_pd(sys.Q_uu, "Q_uu");
  require_pd(sys.Q_vv, "Q_vv");
  require_pd(sys.Q_thth, "Q_thth");
  require_pd(sys.Q_phph, "Q_phph");

  const int n = sys.p + sys.q;
  Matrix joint(n, n);
  joint.topLeftCorner(sys.p, sys.p) = sys.Q_thth;
  joint.topRightCorner(sys.p, sys.q) = sys.Q_thph;
  joint.bottomLeftCorner(sys.q, sys.p) = sys.Q_thph.transpose();
  joint.bottomRightCorner(sys.q, sys.q) = sys.Q_phph;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(joint),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("eigensolve of the joint covariance failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-10 * std::max(1.0, hi)) {
    throw JointCovarianceInvalid(
        "joint (theta, phi) covariance is not positive semidefinite; "
        "smallest eigenvalue " +
        std::to_string(lo));
  }
  return sys;
}

DerivedQuantities derive(const TwoChannelSystem& sys) {
  DerivedQuantities d;

  const Matrix Q_thth_inv = inv_pd(sys.Q_thth, "Q_thth");
  d.M = sys.Q_thph.transpose() * Q_thth_inv;

  const Matrix Q_uu_inv = inv_pd(sys.Q_uu, "Q_uu");
  // information form; the covariance-form identity is checked in tests
  d.Q_thth_x = inv_pd(Q_thth_inv + sys.F.transpose() * Q_uu_inv * sys.F,
                      "Q_thth posterior information");

  d.Q_phph_th =
      symmetrize(sys.Q_phph - sys.Q_thph.transpose() * Q_thth_inv * sys.Q_thph);
  {
    Eigen::LLT<Matrix> llt(d.Q_phph_th);
    if (llt.info() != Eigen::Success) {
      throw SingularConditionalCovariance(
          "conditional covariance of phi given theta is singular");
    }
  }

  d.S = symmetrize(d.M * d.Q_thth_x * d.M.transpose());

  d.Q_phph_th_inv = inv_pd(d.Q_phph_th, "Q_phph_th");
  d.Q_phph_th_S_inv = inv_pd(d.Q_phph_th + d.S, "Q_phph_th + S");
  // B = W^-1 S (I + W^-1 S)^-1 W^-1 in its symmetric difference form
  d.B = symmetrize(d.Q_phph_th_inv - d.Q_phph_th_S_inv);

  d.Q_vv = sys.Q_vv;
  d.Q_vv_inv = inv_pd(sys.Q_vv, "Q_vv");
  return d;
}

TwoChannelSystem gen_example1(int scenario) {
  if (scenario < 1 || scenario > 3) {
    throw InvalidInput("example1 scenario must be 1, 2, or 3");
  }
  Vector w(5);
  if (scenario == 1) {
    w << 1, 1, 1, 1, 1;
  } else if (scenario == 2) {
    w << 25, 16, 9, 4, 1;
  } else {
    w << 81, 64, 49, 4, 1;
  }

  TwoChannelSystem sys;
  sys.p = sys.q = sys.s = sys.t = 5;
  sys.P = 1.0;
  sys.F = Matrix::Identity(5, 5) / std::sqrt(5.0);
  sys.Q_uu = Matrix::Identity(5, 5);
  sys.Q_vv = Matrix::Identity(5, 5);
  sys.Q_thth = Matrix::Identity(5, 5);
  // phi = Diag(sqrt w) theta + unit noise
  sys.Q_thph = w.cwiseSqrt().asDiagonal();
  sys.Q_phph = Matrix(w.asDiagonal()) + Matrix::Identity(5, 5);
  return sys;
}

TwoChannelSystem gen_ar_system(double rho) {
  Matrix L = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      L(i, j) = std::pow(rho, i - j + 1);
    }
  }

  TwoChannelSystem sys;
  sys.p = sys.q = 4;
  sys.s = sys.t = 3;
  sys.P = 1.0;
  sys.F = Matrix::Zero(3, 4);
  sys.F.leftCols(3) = Matrix::Identity(3, 3);
  sys.Q_uu = Matrix::Identity(3, 3);
  sys.Q_vv = 0.1 * Matrix::Identity(3, 3);
  sys.Q_thth = 2.0 * Matrix::Identity(4, 4);
  sys.Q_thph = sys.Q_thth * L.transpose();
  sys.Q_phph = L * sys.Q_thth * L.transpose() + Matrix::Identity(4, 4);
  return sys;
}

namespace {

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

}  // namespace

TwoChannelSystem gen_random_system(std::uint64_t seed, const RandomDims& dims,
                                   ConditionalKind conditional,
                                   double band_diag, double band_off) {
  if (dims.p < 1 || dims.q < 1 || dims.s < 1 || dims.t < 1) {
    throw DimensionMismatch("random instance dimensions must all be >= 1");
  }
  Rng rng(seed);

  TwoChannelSystem sys;
  sys.p = dims.p;
  sys.q = dims.q;
  sys.s = dims.s;
  sys.t = dims.t;
  sys.P = 1.0;

  sys.F = gaussian_matrix(dims.s, dims.p, rng);
  sys.F /= sys.F.norm();

  const Matrix a = gaussian_matrix(dims.p, dims.p, rng);
  sys.Q_thth = symmetrize(a * a.transpose()) +
               1e-3 * Matrix::Identity(dims.p, dims.p);

  const Matrix m = gaussian_matrix(dims.q, dims.p, rng);

  Matrix w;
  if (conditional == ConditionalKind::Identity) {
    w = Matrix::Identity(dims.q, dims.q);
  } else {
    w = band_diag * Matrix::Identity(dims.q, dims.q);
    for (int i = 0; i + 1 < dims.q; ++i) {
      w(i, i + 1) = band_off;
      w(i + 1, i) = band_off;
    }
  }

  sys.Q_thph = sys.Q_thth * m.transpose();
  sys.Q_phph = symmetrize(m * sys.Q_thth * m.transpose()) + w;
  sys.Q_uu = Matrix::Identity(dims.s, dims.s);
  sys.Q_vv = Matrix::Identity(dims.t, dims.t);
  return sys;
}

TwoChannelSystem with_output_dim(const TwoChannelSystem& sys, int k) {
  if (k < 1) throw DimensionMismatch("output dimension k must be >= 1");
  double sigma2 = 0.0;
  if (!is_scaled_identity(sys.Q_vv, 1e-8, &sigma2)) {
    throw UnsupportedNoise(
        "output-dimension change requires Q_vv proportional to identity");
  }
  TwoChannelSystem out = sys;
  out.t = k;
  out.Q_vv = sigma2 * Matrix::Identity(k, k);
  return out;
}

}  // namespace fusegain
