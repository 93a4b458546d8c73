#include "fusegain/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fusegain/errors.hpp"

namespace fusegain {

EigenStructure eigen_structure(const DerivedQuantities& d,
                               const TwoChannelSystem& sys) {
  EigenStructure eig;
  if (!is_scaled_identity(d.Q_phph_th, 1e-8, &eig.sigma2_cond)) {
    throw UnsupportedStructure(
        "analytic design requires the conditional covariance of phi given "
        "theta to be a scaled identity");
  }
  if (eig.sigma2_cond <= 0.0) {
    throw UnsupportedStructure("conditional covariance scale must be positive");
  }

  SymEigen ev = sym_eigen_sorted(sys.Q_vv, /*ascending=*/true);
  eig.U_v = ev.vectors;
  eig.sigma2_v = ev.values;

  SymEigen ex = sym_eigen_sorted(d.S, /*ascending=*/false);
  eig.U_xi = ex.vectors;
  eig.sigma2_xi = ex.values;

  const double top = std::max(0.0, eig.sigma2_xi.size() > 0
                                       ? eig.sigma2_xi[0]
                                       : 0.0);
  eig.rho_rank = 0;
  for (Eigen::Index i = 0; i < eig.sigma2_xi.size(); ++i) {
    if (eig.sigma2_xi[i] > 1e-12 * top && eig.sigma2_xi[i] > 0.0) {
      ++eig.rho_rank;
    }
  }
  return eig;
}

PowerAllocation power_at_mu(double mu, const Vector& a, const Vector& b,
                            double sigma2_cond) {
  if (a.size() != b.size()) {
    throw LengthMismatch("signal and noise spectra must have equal length");
  }
  if (!(mu > 0.0)) {
    throw InvalidInput("water level parameter mu must be positive");
  }
  PowerAllocation out;
  out.lambda2 = Vector::Zero(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    const double bi = b[i];
    if (ai <= 0.0 || mu >= ai / (2.0 * bi)) continue;
    const double disc =
        (2.0 + ai) * (2.0 + ai) -
        4.0 * (1.0 + ai) * (1.0 - ai / (2.0 * mu * bi));
    // disc > (2+a)^2 exactly when the channel is active; the root is the
    // normalized power, rescaled to the original conditional variance
    const double x =
        bi * (std::sqrt(std::max(disc, 0.0)) - (2.0 + ai)) / (2.0 * (1.0 + ai));
    out.lambda2[i] = std::max(x, 0.0) / sigma2_cond;
  }
  out.total = out.lambda2.sum();
  return out;
}

MuSolution solve_mu(const Vector& a, const Vector& b, double sigma2_cond,
                    double P) {
  if (a.size() != b.size()) {
    throw LengthMismatch("signal and noise spectra must have equal length");
  }
  if (!(P > 0.0)) {
    throw InvalidInput("power budget must be positive");
  }
  double mu_hi = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) mu_hi = std::max(mu_hi, a[i] / (2.0 * b[i]));
  }
  if (mu_hi <= 0.0) {
    throw NoInformativeChannel(
        "every subchannel has zero conditional signal variance");
  }

  auto total_at = [&](double mu) {
    return power_at_mu(mu, a, b, sigma2_cond).total;
  };

  // total(mu_hi) = 0; shrink the lower end until it over-allocates
  double lo = 0.5 * mu_hi;
  while (total_at(lo) < P) {
    lo *= 0.5;
    if (lo < 1e-300) break;
  }
  double hi = mu_hi;
  double mu = 0.5 * (lo + hi);
  for (int iter = 0; iter < 2000; ++iter) {
    const double tot = total_at(mu);
    if (std::abs(tot - P) <= 1e-12 * P) break;
    if (tot >= P) {
      lo = mu;
    } else {
      hi = mu;
    }
    if (hi - lo <= 1e-15 * mu_hi) break;
    mu = 0.5 * (lo + hi);
  }

  MuSolution out;
  out.mu = mu;
  const PowerAllocation alloc = power_at_mu(mu, a, b, sigma2_cond);
  for (Eigen::Index i = 0; i < alloc.lambda2.size(); ++i) {
    if (alloc.lambda2[i] > 0.0) ++out.kappa;
  }
  return out;
}

std::vector<VesselLevel> vessel_levels(const Vector& a, const Vector& b,
                                       const Vector& lambda2, double mu,
                                       double sigma2_cond) {
  if (a.size() != b.size() || a.size() != lambda2.size()) {
    throw LengthMismatch("vessel inputs must have equal length");
  }
  std::vector<VesselLevel> out;
  out.reserve(static_cast<std::size_t>(a.size()));
  const double top = 1.0 / mu;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    VesselLevel v;
    v.index = static_cast<int>(i);
    v.a = a[i];
    v.b = b[i];
    v.base = a[i] > 0.0 ? 2.0 * b[i] / a[i]
                        : std::numeric_limits<double>::infinity();
    v.lambda2 = lambda2[i];
    v.water = lambda2[i] * sigma2_cond;  // height in normalized units
    // active vessels fill with mercury up to the water line minus the water
    // column; dry vessels have their base at or above the line
    v.mercury = lambda2[i] > 0.0 ? std::max(top - v.base - v.water, 0.0) : 0.0;
    v.water_top = top;
    out.push_back(v);
  }
  return out;
}

std::vector<VesselLevel> vessel_report(const WaterfillDesign& design) {
  const Eigen::Index n =
      std::min(design.eig.sigma2_v.size(), design.eig.sigma2_xi.size());
  Vector a(n), b(n), lam(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a[i] = std::max(design.eig.sigma2_xi[i], 0.0) / design.eig.sigma2_cond;
    b[i] = design.eig.sigma2_v[i];
    lam[i] = design.lambda2[i];
  }
  return vessel_levels(a, b, lam, design.mu, design.eig.sigma2_cond);
}

WaterfillDesign analytic_design(const TwoChannelSystem& sys,
                                const DerivedQuantities& d) {
  WaterfillDesign design;
  design.eig = eigen_structure(d, sys);
  const double sigma2 = design.eig.sigma2_cond;

  const Eigen::Index n = std::min<Eigen::Index>(sys.t, sys.q);
  Vector a(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a[i] = std::max(design.eig.sigma2_xi[i], 0.0) / sigma2;
    b[i] = design.eig.sigma2_v[i];
  }

  const MuSolution sol = solve_mu(a, b, sigma2, sys.P);
  design.mu = sol.mu;
  design.kappa = sol.kappa;

  const PowerAllocation alloc = power_at_mu(sol.mu, a, b, sigma2);
  design.lambda2 = Vector::Zero(sys.t);
  design.lambda2.head(n) = alloc.lambda2;

  Matrix lambda = Matrix::Zero(sys.t, sys.q);
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda(i, i) = std::sqrt(alloc.lambda2[i]);
  }
  design.G_star = design.eig.U_v * lambda * design.eig.U_xi.transpose();
  design.gain = information_gain(design.G_star, d);
  design.vessel = vessel_levels(a, b, alloc.lambda2, sol.mu, sigma2);
  return design;
}

double separable_gain(const Vector& a, const Vector& b,
                      const Vector& x_normalized) {
  if (a.size() != b.size() || a.size() != x_normalized.size()) {
    throw LengthMismatch("separable gain inputs must have equal length");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = x_normalized[i];
    sum += std::log1p(a[i] * x / (x + b[i]));
  }
  return 0.5 * sum;
}

}  // namespace fusegain
