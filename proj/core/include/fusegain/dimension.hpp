#pragma once

#include <vector>

#include "fusegain/model.hpp"
#include "fusegain/optimize.hpp"

namespace fusegain {

struct RankReduction {
  Matrix G_reduced;  // r x q; 0 x q when G = 0
  int r = 0;
};

// Lossless output compression for white measurement noise Q_vv = sigma2 I:
// with G = U Diag(d) V' and numerical rank r (threshold 1e-10 * d_max), the
// channel Diag(d_1..d_r) V_r' observed through sigma2 I_r carries the same
// information at the same power. Throws UnsupportedNoise otherwise.
RankReduction reduce_rank(const Matrix& G, const TwoChannelSystem& sys);

enum class SweepSolver { Analytic, Extrinsic, Intrinsic };

struct SweepRecord {
  int k = 0;
  double gain = 0.0;
  int rank = 0;
};

struct DimensionSweep {
  std::vector<SweepRecord> records;  // k = 1..q
  double c = 0.0;
  int t_hat = 0;     // smallest k whose gain is within c of the k = q gain
  int max_rank = 0;  // numerical rank of the k = q design
};

// Designs a channel for every output dimension k = 1..q on copies of sys
// with t = k and Q_vv = sigma2 I_k (sigma2 from the original Q_vv, which must
// be a scaled identity). Per-k solves run concurrently, capped at `workers`
// threads (0 picks the hardware count); results are deterministic for a
// fixed config regardless of scheduling. Iterative solvers use multistart
// per k with child seeds derived from config.seed and k.
DimensionSweep dimension_sweep(const TwoChannelSystem& sys, SweepSolver solver,
                               double c = 1e-3,
                               const OptimConfig& config = OptimConfig{},
                               int workers = 0);

}  // namespace fusegain
