#pragma once

#include <cstdint>
#include <vector>

#include "fusegain/gain.hpp"
#include "fusegain/model.hpp"
#include "fusegain/rng.hpp"
#include "fusegain/sphere.hpp"

namespace fusegain {

// Extrinsic: gradient step in matrix space followed by radial rescaling to
// the power sphere. Intrinsic: Riemannian step on the unit sphere of
// vec(G)/sqrt(P) via tangent projection and geodesic retraction.
enum class Algorithm { Extrinsic, Intrinsic };

// Constant step uses delta as is. LineSearch maximizes along the geodesic
// each iteration and applies to the intrinsic algorithm only.
enum class StepMode { Constant, LineSearch };

enum class StopReason { Converged, MaxIters, Stalled };

struct OptimConfig {
  int max_iters = 2000;
  StepMode step_mode = StepMode::Constant;
  double delta = 0.1;
  double tol_grad = 1e-8;     // on the tangential gradient norm
  double tol_stall = 1e-12;   // gain change across stall_window iterations
  int stall_window = 20;
  std::uint64_t seed = 0;
  int restarts = 5;
};

struct TraceRow {
  int iter = 0;
  double gain = 0.0;
  double grad_norm = 0.0;     // Euclidean gradient, Frobenius norm
  double tangent_norm = 0.0;  // norm of the gradient's tangential component
  double step = 0.0;          // step applied leaving this iterate; 0 if none
  double power = 0.0;
};

struct OptimTrace {
  std::vector<TraceRow> rows;
  StopReason stop = StopReason::MaxIters;
};

struct RunResult {
  ChannelMatrix G;     // best-seen iterate
  double gain = 0.0;   // its gain
  OptimTrace trace;
  int restart_index = 0;
};

// Gaussian t x q matrix rescaled to power exactly P.
ChannelMatrix init_matrix(const TwoChannelSystem& sys, Rng& rng);

// G_next = (G + delta * grad D(G)) * sqrt(P) / |G + delta * grad D(G)|_F.
// Throws ZeroIterate if the update lands at the origin.
ChannelMatrix extrinsic_step(const ChannelMatrix& G,
                             const DerivedQuantities& d, double delta,
                             double P);

struct IntrinsicStep {
  Vector g_next;
  double delta_used = 0.0;
  double tangent_norm = 0.0;
};

// One step of the intrinsic algorithm from unit-sphere point g.
IntrinsicStep intrinsic_step(const Vector& g, const DerivedQuantities& d,
                             double P, const OptimConfig& config);

// Gradient ascent until the tangential gradient norm falls below tol_grad,
// the gain stalls (change < tol_stall across stall_window iterates), or
// max_iters is reached. Returns the best-seen iterate; with line search the
// recorded gains are non-decreasing by construction.
RunResult run(const TwoChannelSystem& sys, const DerivedQuantities& d,
              Algorithm algo, const OptimConfig& config);

// config.restarts independent starts (restart 0 reuses config.seed, restart
// r > 0 derives a child seed); returns the best run by gain.
RunResult run_multistart(const TwoChannelSystem& sys,
                         const DerivedQuantities& d, Algorithm algo,
                         const OptimConfig& config);

}  // namespace fusegain
