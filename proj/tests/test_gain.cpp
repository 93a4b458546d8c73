#include <cmath>

#include "doctest.h"
#include "fusegain/errors.hpp"
#include "fusegain/gain.hpp"
#include "fusegain/linalg.hpp"
#include "fusegain/model.hpp"
#include "fusegain/rng.hpp"

using namespace fusegain;

namespace {

TwoChannelSystem scalar_unit_system() {
  TwoChannelSystem sys;
  sys.p = sys.q = sys.s = sys.t = 1;
  sys.P = 1.0;
  sys.F = Matrix::Constant(1, 1, 1.0);
  sys.Q_uu = Matrix::Constant(1, 1, 2.0);
  sys.Q_vv = Matrix::Constant(1, 1, 1.0);
  sys.Q_thth = Matrix::Constant(1, 1, 2.0);
  sys.Q_thph = Matrix::Constant(1, 1, 2.0);
  sys.Q_phph = Matrix::Constant(1, 1, 3.0);
  return sys;
}

Matrix random_channel(int t, int q, Rng& rng) {
  Matrix g(t, q);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < q; ++j) g(i, j) = rng.gaussian();
  return g;
}

}  // namespace

TEST_CASE("zero channel adds nothing") {
  const DerivedQuantities d = derive(gen_example1(2));
  CHECK(information_gain(Matrix::Zero(5, 5), d) == doctest::Approx(0.0));
  CHECK(information_gain_snr(Matrix::Zero(5, 5), d) == doctest::Approx(0.0));
  CHECK(gradient(Matrix::Zero(5, 5), d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scalar unit system at g = 1") {
  const DerivedQuantities d = derive(scalar_unit_system());
  const Matrix g = Matrix::Constant(1, 1, 1.0);
  // 1/2 ln(1 + 1/(1+1))
  const double expected = 0.5 * std::log(1.5);
  CHECK(expected == doctest::Approx(0.2027325540540822).epsilon(1e-14));
  CHECK(information_gain(g, d) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(information_gain_snr(g, d) ==
        doctest::Approx(expected).epsilon(1e-12));

  // d/dg [ 1/2 ln((2g^2+1)/(g^2+1)) ] at g = 1 is 2/3 - 1/2
  CHECK(gradient(g, d)(0, 0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(fd_gradient(g, d)(0, 0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-6));
}

TEST_CASE("symmetric five-channel system at the uniform design") {
  const DerivedQuantities d = derive(gen_example1(1));
  const Matrix g = Matrix::Identity(5, 5) / std::sqrt(5.0);
  // per channel: 1/2 ln(1 + (5/6)(1/5) / ((1/5) + 1)) = 1/2 ln(41/36)
  double per_channel = 0.5 * std::log1p((5.0 / 6.0) * (1.0 / 5.0) / (1.2));
  const double expected = 5.0 * per_channel;
  CHECK(expected == doctest::Approx(2.5 * std::log(41.0 / 36.0)).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.32513282060355).epsilon(1e-10));
  CHECK(information_gain(g, d) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(information_gain_snr(g, d) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("both objective forms agree on random systems") {
  Rng rng(2024);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ConditionalKind kind =
        seed % 2 == 0 ? ConditionalKind::Identity : ConditionalKind::Banded;
    const TwoChannelSystem sys = gen_random_system(
        seed + 100, RandomDims{4, 5, 3, 4}, kind);
    const DerivedQuantities d = derive(sys);
    const Matrix g = random_channel(sys.t, sys.q, rng);
    const double a = information_gain(g, d);
    const double b = information_gain_snr(g, d);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("upper bound values and dominance") {
  const DerivedQuantities ds = derive(scalar_unit_system());
  CHECK(upper_bound(ds) ==
        doctest::Approx(0.34657359027997264).epsilon(1e-12));  // 1/2 ln 2

  const DerivedQuantities d1 = derive(gen_example1(1));
  CHECK(upper_bound(d1) ==
        doctest::Approx(2.5 * std::log(11.0 / 6.0)).epsilon(1e-12));

  const DerivedQuantities dar = derive(gen_ar_system(0.0));
  CHECK(upper_bound(dar) == doctest::Approx(0.0));

  Rng rng(7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TwoChannelSystem sys = gen_random_system(
        seed + 55, RandomDims{3, 4, 3, 3}, ConditionalKind::Banded);
    const DerivedQuantities d = derive(sys);
    const double ub = upper_bound(d);
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix g = 3.0 * random_channel(sys.t, sys.q, rng);
      CHECK(information_gain(g, d) <= ub + 1e-9);
    }
  }
}

TEST_CASE("gain is non-decreasing under channel scaling") {
  Rng rng(11);
  const TwoChannelSystem sys = gen_random_system(
      8, RandomDims{4, 4, 3, 3}, ConditionalKind::Identity);
  const DerivedQuantities d = derive(sys);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix g = random_channel(sys.t, sys.q, rng);
    double prev = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double lam = 0.3 * i;
      const double val = information_gain(lam * g, d);
      CHECK(val >= prev - 1e-12);
      prev = val;
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(99);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const ConditionalKind kind =
        seed % 2 == 0 ? ConditionalKind::Identity : ConditionalKind::Banded;
    const int t = 2 + static_cast<int>(seed % 4);
    const int q = 3 + static_cast<int>(seed % 3);
    const TwoChannelSystem sys = gen_random_system(
        seed + 500, RandomDims{4, q, 3, t}, kind);
    const DerivedQuantities d = derive(sys);
    const Matrix g = random_channel(t, q, rng);
    const Matrix an = gradient(g, d);
    const Matrix fd = fd_gradient(g, d);
    const double rel = (an - fd).norm() / std::max(1e-30, fd.norm());
    CHECK(rel < 1e-6);
  }
}

TEST_CASE("left orthogonal rotations leave the gain unchanged under white noise") {
  Rng rng(31);
  TwoChannelSystem sys = gen_random_system(
      12, RandomDims{4, 5, 3, 4}, ConditionalKind::Banded);
  sys.Q_vv = 0.7 * Matrix::Identity(4, 4);
  const DerivedQuantities d = derive(sys);
  for (int rep = 0; rep < 8; ++rep) {
    const Matrix g = random_channel(4, 5, rng);
    const Matrix u = random_orthogonal(4, rng);
    const double base = information_gain(g, d);
    const double rotated = information_gain(u * g, d);
    CHECK(std::abs(base - rotated) <= 1e-10 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("wrong channel shapes are rejected") {
  const DerivedQuantities d = derive(gen_ar_system(0.5));
  CHECK_THROWS_AS(information_gain(Matrix::Zero(4, 4), d), ShapeMismatch);
  CHECK_THROWS_AS(gradient(Matrix::Zero(3, 3), d), ShapeMismatch);
  CHECK_THROWS_AS(fd_gradient(Matrix::Zero(2, 4), d), ShapeMismatch);
}
