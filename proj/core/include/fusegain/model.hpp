#pragma once

#include <cstdint>

#include "fusegain/linalg.hpp"

namespace fusegain {

// Two jointly gaussian measurement channels of a latent pair (theta, phi):
//   x = F theta + u   (fixed primary observation, dim s)
//   y = G phi + v     (designable secondary observation, dim t)
// theta has dim p, phi dim q. All covariances are stored explicitly; the
// cross block Q_thph is cov(theta, phi), shape p x q. P is the Frobenius
// power budget trace(G G') for the design problem.
struct TwoChannelSystem {
  int p = 0;
  int q = 0;
  int s = 0;
  int t = 0;
  double P = 1.0;
  Matrix F;       // s x p
  Matrix Q_uu;    // s x s
  Matrix Q_vv;    // t x t
  Matrix Q_thth;  // p x p
  Matrix Q_thph;  // p x q
  Matrix Q_phph;  // q x q
};

// Quantities fixed by the system alone (no G): the regression matrix
// M = Q_phth Q_thth^-1, the primary-posterior covariance Q_thth_x, the
// conditional covariance Q_phph_th = Q_phph - Q_phth Q_thth^-1 Q_thph,
// the effective signal spectrum S = M Q_thth_x M', and the gradient
// kernel B = Q_phph_th^-1 - (Q_phph_th + S)^-1.
struct DerivedQuantities {
  Matrix M;               // q x p
  Matrix Q_thth_x;        // p x p
  Matrix Q_phph_th;       // q x q
  Matrix S;               // q x q
  Matrix B;               // q x q
  Matrix Q_vv;            // t x t, copied so gain evaluation is self-contained
  Matrix Q_vv_inv;        // t x t
  Matrix Q_phph_th_inv;   // q x q, cached for the gradient
  Matrix Q_phph_th_S_inv;  // (Q_phph_th + S)^-1, cached for the gradient
};

// Checks shapes, positive definiteness of the four marginal covariances,
// P > 0, and positive semidefiniteness of the joint (theta, phi) covariance
// (smallest eigenvalue >= -1e-10 relative to the largest). Returns the
// instance unchanged on success.
const TwoChannelSystem& validate_system(const TwoChannelSystem& sys);

DerivedQuantities derive(const TwoChannelSystem& sys);

// Symmetric five-channel benchmark family: F = (1/sqrt 5) I, unit noise and
// prior, phi_i = sqrt(w_i) theta_i + unit noise. Scenario selects the weight
// spread w: (1,...,1), (25,16,9,4,1), or (81,64,49,4,1), which makes the
// signal spectrum S = (5/6) Diag(w).
TwoChannelSystem gen_example1(int scenario);

// Autoregressive coupling phi_i = sum_{j<=i} rho^(i-j+1) theta_j + tau_i with
// unit tau: p = q = 4, s = t = 3, Q_thth = 2I, Q_uu = I, Q_vv = 0.1 I, and F
// observing the first three components. Q_phph_th is exactly I_4 for any rho.
TwoChannelSystem gen_ar_system(double rho);

struct RandomDims {
  int p = 0;
  int q = 0;
  int s = 0;
  int t = 0;
};

enum class ConditionalKind { Identity, Banded };

// Seeded random instance: F gaussian scaled to unit Frobenius norm,
// Q_thth = A A' + 1e-3 I with gaussian A, phi = M theta + w for gaussian M,
// where cov(w) is I_q or the tridiagonal band Toeplitz(d1, d0, d1).
// Noise covariances are identity; P = 1. Matrices are filled row-major from
// a single stream, so a seed pins the instance bit-for-bit.
TwoChannelSystem gen_random_system(std::uint64_t seed, const RandomDims& dims,
                                   ConditionalKind conditional,
                                   double band_diag = 2.0,
                                   double band_off = 0.2);

// Copy of sys with the secondary output dimension replaced by k and
// Q_vv = sigma2 I_k, where sigma2 comes from the original Q_vv. Requires the
// original Q_vv to be a scaled identity (within 1e-8); used by the output-
// dimension sweep. G matrices for the result are k x q.
TwoChannelSystem with_output_dim(const TwoChannelSystem& sys, int k);

}  // namespace fusegain
