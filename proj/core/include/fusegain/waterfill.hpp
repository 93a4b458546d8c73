#pragma once

#include <vector>

#include "fusegain/gain.hpp"
#include "fusegain/linalg.hpp"
#include "fusegain/model.hpp"

namespace fusegain {

// Eigendecompositions that diagonalize the design problem when
// Q_phph_th = sigma2_cond * I: noise modes ascending, signal modes
// descending, so subchannel i pairs the i-th strongest signal direction
// with the i-th quietest noise direction.
struct EigenStructure {
  Matrix U_v;          // t x t eigenvectors of Q_vv
  Vector sigma2_v;     // t noise eigenvalues, ascending
  Matrix U_xi;         // q x q eigenvectors of S
  Vector sigma2_xi;    // q signal eigenvalues, descending
  int rho_rank = 0;    // eigenvalues of S above 1e-12 * max
  double sigma2_cond = 1.0;
};

// Per-subchannel solid/mercury/water levels of the two-phase vessel:
// base = 2 b / a, everything stacks to the water line 1/mu for channels
// that receive power. Heights live in the conditionally-normalized problem;
// lambda2 is the actual allocated power.
struct VesselLevel {
  int index = 0;
  double a = 0.0;
  double b = 0.0;
  double base = 0.0;
  double mercury = 0.0;
  double water = 0.0;
  double water_top = 0.0;
  double lambda2 = 0.0;
};

struct MuSolution {
  double mu = 0.0;
  int kappa = 0;
};

struct WaterfillDesign {
  EigenStructure eig;
  Vector lambda2;  // length t, actual subchannel powers, zero past min(t, q)
  double mu = 0.0;
  int kappa = 0;
  Matrix G_star;  // t x q
  double gain = 0.0;
  std::vector<VesselLevel> vessel;
};

// Requires Q_phph_th = sigma2 * I_q within 1e-8 (throws UnsupportedStructure
// otherwise). Eigenvector signs follow the first-nonzero-positive convention;
// ties keep index order.
EigenStructure eigen_structure(const DerivedQuantities& d,
                               const TwoChannelSystem& sys);

// Closed-form optimal subchannel powers at water level 1/mu. Inputs are the
// normalized signal variances a_i = sigma2_xi_i / sigma2_cond and noise
// variances b_i; channel i is active iff mu < a_i / (2 b_i), in which case
// its normalized power is the positive root of
//   (1+a) x^2 + (2+a) b x + b^2 - a b / (2 mu) = 0,
// and the returned lambda2_i = x_i / sigma2_cond. total is the sum.
struct PowerAllocation {
  Vector lambda2;
  double total = 0.0;
};
PowerAllocation power_at_mu(double mu, const Vector& a, const Vector& b,
                            double sigma2_cond);

// Bisects mu over (0, max_i a_i / (2 b_i)] until the allocated total matches
// P to 1e-12 relative or the bracket shrinks to 1e-15 relative. Total power
// is non-increasing in mu, so the bracket is valid throughout. Throws
// NoInformativeChannel when every a_i <= 0.
MuSolution solve_mu(const Vector& a, const Vector& b, double sigma2_cond,
                    double P);

// Full analytic design G* = U_v Lambda U_xi' for systems with
// Q_phph_th = sigma2 * I_q.
WaterfillDesign analytic_design(const TwoChannelSystem& sys,
                                const DerivedQuantities& d);

// Vessel levels recomputed from a design's stored spectra and multiplier.
std::vector<VesselLevel> vessel_report(const WaterfillDesign& design);

// Same computation from raw per-channel data; lambda2 holds actual powers.
std::vector<VesselLevel> vessel_levels(const Vector& a, const Vector& b,
                                       const Vector& lambda2, double mu,
                                       double sigma2_cond);

// Separable objective 1/2 sum log(1 + a x / (x + b)) over normalized powers
// x_i; the coordinates the waterfilling solution optimizes in.
double separable_gain(const Vector& a, const Vector& b,
                      const Vector& x_normalized);

}  // namespace fusegain
