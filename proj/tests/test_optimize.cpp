#include <cmath>

#include "doctest.h"
#include "fusegain/errors.hpp"
#include "fusegain/gain.hpp"
#include "fusegain/model.hpp"
#include "fusegain/optimize.hpp"
#include "fusegain/rng.hpp"
#include "fusegain/waterfill.hpp"

using namespace fusegain;

TEST_CASE("initial matrices sit on the power sphere deterministically") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  Rng a(42), b(42), c(43);
  const ChannelMatrix ga = init_matrix(sys, a);
  const ChannelMatrix gb = init_matrix(sys, b);
  const ChannelMatrix gc = init_matrix(sys, c);
  CHECK(ga.G.rows() == 3);
  CHECK(ga.G.cols() == 4);
  CHECK(ga.power() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((ga.G - gb.G).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ga.G - gc.G).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("uninformative coupling is a fixed point") {
  const TwoChannelSystem sys = gen_ar_system(0.0);
  const DerivedQuantities d = derive(sys);
  Rng rng(1);
  const ChannelMatrix g0 = init_matrix(sys, rng);
  const ChannelMatrix g1 = extrinsic_step(g0, d, 0.1, sys.P);
  CHECK((g1.G - g0.G).cwiseAbs().maxCoeff() < 1e-14);

  OptimConfig config;
  config.seed = 7;
  const RunResult res = run(sys, d, Algorithm::Extrinsic, config);
  CHECK(res.trace.stop == StopReason::Converged);
  CHECK(res.trace.rows.size() == 1);
  CHECK(res.gain == doctest::Approx(0.0));
}

TEST_CASE("iterates keep the power budget") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 11;
  config.max_iters = 200;

  SUBCASE("extrinsic") {
    const RunResult res = run(sys, d, Algorithm::Extrinsic, config);
    for (const TraceRow& row : res.trace.rows)
      CHECK(row.power == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.G.power() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("intrinsic") {
    config.step_mode = StepMode::LineSearch;
    const RunResult res = run(sys, d, Algorithm::Intrinsic, config);
    for (const TraceRow& row : res.trace.rows)
      CHECK(row.power == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.G.power() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("line-searched ascent never loses gain") {
  const TwoChannelSystem sys = gen_ar_system(0.9);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 3;
  config.step_mode = StepMode::LineSearch;
  const RunResult res = run(sys, d, Algorithm::Intrinsic, config);
  REQUIRE(res.trace.rows.size() >= 2);
  for (size_t i = 1; i < res.trace.rows.size(); ++i)
    CHECK(res.trace.rows[i].gain >= res.trace.rows[i - 1].gain);
}

TEST_CASE("analytic reference values for the autoregressive family") {
  const double rhos[3] = {0.1, 0.5, 0.9};
  const double gains[3] = {0.013405, 0.355689, 1.123101};
  double prev = 0.0;
  for (int i = 0; i < 3; ++i) {
    const TwoChannelSystem sys = gen_ar_system(rhos[i]);
    const DerivedQuantities d = derive(sys);
    const WaterfillDesign design = analytic_design(sys, d);
    CHECK(design.kappa == 3);
    CHECK(design.gain == doctest::Approx(gains[i]).epsilon(5e-5));
    CHECK(design.gain > prev);
    prev = design.gain;
  }
}

TEST_CASE("both iterative algorithms reach the analytic optimum") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  const double target = analytic_design(sys, d).gain;

  OptimConfig config;
  config.seed = 2026;

  const RunResult ext = run_multistart(sys, d, Algorithm::Extrinsic, config);
  CHECK(ext.gain == doctest::Approx(target).epsilon(1e-3));
  CHECK(ext.gain <= target + 1e-9);

  config.step_mode = StepMode::LineSearch;
  const RunResult intr = run_multistart(sys, d, Algorithm::Intrinsic, config);
  CHECK(intr.gain == doctest::Approx(target).epsilon(1e-3));
  CHECK(intr.gain <= target + 1e-9);

  CHECK(std::abs(ext.gain - intr.gain) < 1e-3);
}

TEST_CASE("result reports the best iterate seen") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 9;
  config.max_iters = 300;
  const RunResult res = run(sys, d, Algorithm::Extrinsic, config);
  double best = 0.0;
  for (const TraceRow& row : res.trace.rows) best = std::max(best, row.gain);
  CHECK(res.gain == best);
  CHECK(information_gain(res.G, d) == doctest::Approx(res.gain).epsilon(1e-12));
}

TEST_CASE("line search stalls out once the gain is flat") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 4;
  config.step_mode = StepMode::LineSearch;
  config.tol_grad = 1e-30;  // unreachable, so the stall rule must fire
  const RunResult res = run(sys, d, Algorithm::Intrinsic, config);
  CHECK(res.trace.stop == StopReason::Stalled);
  CHECK(res.trace.rows.size() < 2000);
}

TEST_CASE("runs are reproducible and restarts are distinct") {
  const TwoChannelSystem sys = gen_ar_system(0.9);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.seed = 77;
  config.max_iters = 150;

  const RunResult r1 = run_multistart(sys, d, Algorithm::Extrinsic, config);
  const RunResult r2 = run_multistart(sys, d, Algorithm::Extrinsic, config);
  CHECK(r1.gain == r2.gain);
  CHECK((r1.G.G - r2.G.G).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r1.restart_index == r2.restart_index);
  REQUIRE(r1.trace.rows.size() == r2.trace.rows.size());
  for (size_t i = 0; i < r1.trace.rows.size(); ++i)
    CHECK(r1.trace.rows[i].gain == r2.trace.rows[i].gain);

  config.restarts = 1;
  const RunResult single = run_multistart(sys, d, Algorithm::Extrinsic, config);
  const RunResult direct = run(sys, d, Algorithm::Extrinsic, config);
  CHECK(single.gain == direct.gain);
}

TEST_CASE("extrinsic updates reject a line search") {
  const TwoChannelSystem sys = gen_ar_system(0.5);
  const DerivedQuantities d = derive(sys);
  OptimConfig config;
  config.step_mode = StepMode::LineSearch;
  CHECK_THROWS_AS(run(sys, d, Algorithm::Extrinsic, config), InvalidInput);
}
