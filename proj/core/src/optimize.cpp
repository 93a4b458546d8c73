#include "fusegain/optimize.hpp"

#include <cmath>

#include "fusegain/errors.hpp"

namespace fusegain {

ChannelMatrix init_matrix(const TwoChannelSystem& sys, Rng& rng) {
  Matrix g(sys.t, sys.q);
  for (int i = 0; i < sys.t; ++i)
    for (int j = 0; j < sys.q; ++j) g(i, j) = rng.gaussian();
  const double n = g.norm();
  if (n == 0.0) throw ZeroIterate("degenerate random start");
  return ChannelMatrix{g * (std::sqrt(sys.P) / n)};
}

ChannelMatrix extrinsic_step(const ChannelMatrix& G,
                             const DerivedQuantities& d, double delta,
                             double P) {
  Matrix stepped = G.G + delta * gradient(G.G, d);
  const double n = stepped.norm();
  if (!(n > 1e-300)) {
    throw ZeroIterate("gradient step collapsed the iterate to zero");
  }
  return ChannelMatrix{stepped * (std::sqrt(P) / n)};
}

IntrinsicStep intrinsic_step(const Vector& g, const DerivedQuantities& d,
                             double P, const OptimConfig& config) {
  const Eigen::Index t = d.Q_vv.rows();
  const Eigen::Index q = d.M.rows();
  const double root_p = std::sqrt(P);

  const Matrix G = devectorize(root_p * g, static_cast<int>(t),
                               static_cast<int>(q));
  // chain rule through G = sqrt(P) * unvec(g)
  const Vector grad_g = root_p * vectorize(gradient(G, d));
  const Vector eta = tangent_project(g, grad_g);

  IntrinsicStep out;
  out.tangent_norm = eta.norm();
  if (out.tangent_norm == 0.0) {
    out.g_next = g;
    return out;
  }

  if (config.step_mode == StepMode::Constant) {
    out.delta_used = config.delta;
  } else {
    auto objective = [&](const Vector& point) {
      return information_gain(
          devectorize(root_p * point, static_cast<int>(t),
                      static_cast<int>(q)),
          d);
    };
    out.delta_used = line_search(g, eta, objective).delta;
  }
  out.g_next = retract(g, out.delta_used * eta);
  return out;
}

namespace {

RunResult run_single(const TwoChannelSystem& sys, const DerivedQuantities& d,
                     Algorithm algo, const OptimConfig& config) {
  if (algo == Algorithm::Extrinsic &&
      config.step_mode == StepMode::LineSearch) {
    throw InvalidInput("line search applies to the intrinsic algorithm only");
  }

  Rng rng(config.seed);
  ChannelMatrix current = init_matrix(sys, rng);
  const double root_p = std::sqrt(sys.P);
  Vector g;
  if (algo == Algorithm::Intrinsic) {
    g = vectorize(current.G) / root_p;
  }

  RunResult result;
  result.gain = -1.0;
  result.trace.stop = StopReason::MaxIters;

  for (int iter = 0;; ++iter) {
    const double gain_k = information_gain(current.G, d);
    const Matrix grad_k = gradient(current.G, d);

    double tangent_norm;
    Vector eta;
    if (algo == Algorithm::Intrinsic) {
      eta = tangent_project(g, root_p * vectorize(grad_k));
      tangent_norm = eta.norm();
    } else {
      // component orthogonal to the radial direction; vanishes at a
      // constrained stationary point even though the full gradient does not
      const double radial = (grad_k.array() * current.G.array()).sum() / sys.P;
      tangent_norm = (grad_k - radial * current.G).norm();
    }

    if (gain_k > result.gain) {
      result.gain = gain_k;
      result.G = current;
    }

    TraceRow row;
    row.iter = iter;
    row.gain = gain_k;
    row.grad_norm = grad_k.norm();
    row.tangent_norm = tangent_norm;
    row.power = current.power();

    if (tangent_norm <= config.tol_grad) {
      result.trace.rows.push_back(row);
      result.trace.stop = StopReason::Converged;
      break;
    }
    if (iter >= config.stall_window &&
        std::abs(gain_k -
                 result.trace.rows[static_cast<std::size_t>(
                                       iter - config.stall_window)]
                     .gain) < config.tol_stall) {
      result.trace.rows.push_back(row);
      result.trace.stop = StopReason::Stalled;
      break;
    }
    if (iter >= config.max_iters) {
      result.trace.rows.push_back(row);
      result.trace.stop = StopReason::MaxIters;
      break;
    }

    if (algo == Algorithm::Extrinsic) {
      row.step = config.delta;
      Matrix stepped = current.G + config.delta * grad_k;
      const double n = stepped.norm();
      if (!(n > 1e-300)) {
        throw ZeroIterate("gradient step collapsed the iterate to zero");
      }
      current.G = stepped * (root_p / n);
    } else {
      IntrinsicStep step;
      step.tangent_norm = tangent_norm;
      if (config.step_mode == StepMode::Constant) {
        step.delta_used = config.delta;
        step.g_next = retract(g, config.delta * eta);
      } else {
        auto objective = [&](const Vector& point) {
          return information_gain(devectorize(root_p * point, sys.t, sys.q),
                                  d);
        };
        step.delta_used = line_search(g, eta, objective).delta;
        step.g_next = retract(g, step.delta_used * eta);
      }
      row.step = step.delta_used;
      g = step.g_next;
      current.G = devectorize(root_p * g, sys.t, sys.q);
    }
    result.trace.rows.push_back(row);
  }
  return result;
}

}  // namespace

RunResult run(const TwoChannelSystem& sys, const DerivedQuantities& d,
              Algorithm algo, const OptimConfig& config) {
  return run_single(sys, d, algo, config);
}

RunResult run_multistart(const TwoChannelSystem& sys,
                         const DerivedQuantities& d, Algorithm algo,
                         const OptimConfig& config) {
  if (config.restarts < 1) {
    throw InvalidInput("multistart needs at least one restart");
  }
  const Rng base(config.seed);
  RunResult best;
  bool have = false;
  for (int r = 0; r < config.restarts; ++r) {
    OptimConfig c = config;
    c.seed = r == 0 ? config.seed : base.child(static_cast<std::uint64_t>(r)).seed();
    RunResult candidate = run_single(sys, d, algo, c);
    candidate.restart_index = r;
    if (!have || candidate.gain > best.gain) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

}  // namespace fusegain
