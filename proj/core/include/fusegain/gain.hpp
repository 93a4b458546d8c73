#pragma once

#include "fusegain/linalg.hpp"
#include "fusegain/model.hpp"

namespace fusegain {

// Secondary-channel design candidate; power is the Frobenius budget
// trace(G G').
struct ChannelMatrix {
  Matrix G;

  double power() const { return G.squaredNorm(); }
  bool feasible(double P) const { return power() <= P + 1e-9; }
};

// Information the secondary observation y = G phi + v adds about theta once
// x is already known, in nats:
//   1/2 log det(I_p + M' G' (G Q_phph_th G' + Q_vv)^-1 G M Q_thth_x).
// Evaluated with Cholesky factorizations on symmetrized arguments.
double information_gain(const Matrix& G, const DerivedQuantities& d);

// Same quantity through the output-SNR identity
//   1/2 log det(I_t + Z^-1/2 (G S G') Z^-1/2),  Z = G Q_phph_th G' + Q_vv.
double information_gain_snr(const Matrix& G, const DerivedQuantities& d);

// Power-independent ceiling 1/2 log det(I_q + Q_phph_th^-1 S); the gain of
// any G stays below it.
double upper_bound(const DerivedQuantities& d);

// Euclidean gradient of the gain in G:
//   Q_vv^-1 G (K - B)^-1 B K^-1,  K = Q_phph_th^-1 + G' Q_vv^-1 G.
// K - B equals G' Q_vv^-1 G + (Q_phph_th + S)^-1 and is positive definite,
// which is the form used here.
Matrix gradient(const Matrix& G, const DerivedQuantities& d);

// Central-difference gradient; step <= 0 selects 1e-6 * (1 + |G|_F).
Matrix fd_gradient(const Matrix& G, const DerivedQuantities& d,
                   double step = 0.0);

inline double information_gain(const ChannelMatrix& g,
                               const DerivedQuantities& d) {
  return information_gain(g.G, d);
}
inline double information_gain_snr(const ChannelMatrix& g,
                                   const DerivedQuantities& d) {
  return information_gain_snr(g.G, d);
}
inline Matrix gradient(const ChannelMatrix& g, const DerivedQuantities& d) {
  return gradient(g.G, d);
}

}  // namespace fusegain
