#include "fusegain/dimension.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "fusegain/errors.hpp"
#include "fusegain/waterfill.hpp"

namespace fusegain {

RankReduction reduce_rank(const Matrix& G, const TwoChannelSystem& sys) {
  if (G.rows() != sys.t || G.cols() != sys.q) {
    throw ShapeMismatch("channel matrix does not match the system dimensions");
  }
  double sigma2 = 0.0;
  if (!is_scaled_identity(sys.Q_vv, 1e-8, &sigma2)) {
    throw UnsupportedNoise(
        "rank reduction requires white measurement noise Q_vv = sigma2 I");
  }

  RankReduction out;
  Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) {
    out.r = 0;
    out.G_reduced = Matrix::Zero(0, sys.q);
    return out;
  }
  const double cut = 1e-10 * sv[0];
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut) ++r;
  }
  out.r = r;
  out.G_reduced = sv.head(r).asDiagonal() *
                  svd.matrixV().leftCols(r).transpose();
  return out;
}

namespace {

SweepRecord solve_one(const TwoChannelSystem& base, int k, SweepSolver solver,
                      const OptimConfig& config) {
  const TwoChannelSystem sys_k = with_output_dim(base, k);
  const DerivedQuantities d = derive(sys_k);

  SweepRecord rec;
  rec.k = k;
  if (solver == SweepSolver::Analytic) {
    const WaterfillDesign design = analytic_design(sys_k, d);
    rec.gain = design.gain;
    rec.rank = numerical_rank_svd(design.G_star, 1e-10);
  } else {
    OptimConfig c = config;
    // independent, reproducible stream per output dimension
    c.seed = Rng(config.seed).child(static_cast<std::uint64_t>(k)).seed();
    const Algorithm algo = solver == SweepSolver::Extrinsic
                               ? Algorithm::Extrinsic
                               : Algorithm::Intrinsic;
    const RunResult run = run_multistart(sys_k, d, algo, c);
    rec.gain = run.gain;
    rec.rank = numerical_rank_svd(run.G.G, 1e-10);
  }
  return rec;
}

}  // namespace

DimensionSweep dimension_sweep(const TwoChannelSystem& sys, SweepSolver solver,
                               double c, const OptimConfig& config,
                               int workers) {
  validate_system(sys);
  double sigma2 = 0.0;
  if (!is_scaled_identity(sys.Q_vv, 1e-8, &sigma2)) {
    throw UnsupportedNoise(
        "the output-dimension sweep requires Q_vv proportional to identity");
  }

  DimensionSweep sweep;
  sweep.c = c;
  sweep.records.resize(static_cast<std::size_t>(sys.q));

  int n_workers = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, sys.q));

  std::atomic<int> next_k{1};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto work = [&]() {
    for (;;) {
      const int k = next_k.fetch_add(1);
      if (k > sys.q) return;
      try {
        sweep.records[static_cast<std::size_t>(k - 1)] =
            solve_one(sys, k, solver, config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const double full_gain = sweep.records.back().gain;
  sweep.max_rank = sweep.records.back().rank;
  sweep.t_hat = sys.q;
  for (const SweepRecord& rec : sweep.records) {
    if (full_gain - rec.gain <= c) {
      sweep.t_hat = rec.k;
      break;
    }
  }
  return sweep;
}

}  // namespace fusegain
