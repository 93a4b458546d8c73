#include <cmath>

#include "doctest.h"
#include "fusegain/errors.hpp"
#include "fusegain/rng.hpp"
#include "fusegain/sphere.hpp"

using namespace fusegain;

namespace {

Vector random_unit(int n, Rng& rng) {
  Vector g(n);
  for (int i = 0; i < n; ++i) g(i) = rng.gaussian();
  return g / g.norm();
}

}  // namespace

TEST_CASE("flattening is row-major and invertible") {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  const Vector v = vectorize(m);
  CHECK(v(0) == 1);
  CHECK(v(1) == 2);
  CHECK(v(2) == 3);
  CHECK(v(3) == 4);
  CHECK((devectorize(v, 2, 2) - m).cwiseAbs().maxCoeff() == 0.0);

  Matrix wide(2, 3);
  wide << 1, 2, 3, 4, 5, 6;
  CHECK((devectorize(vectorize(wide), 2, 3) - wide).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(vectorize(wide)(3) == 4);

  CHECK_THROWS_AS(devectorize(v, 2, 3), LengthMismatch);
}

TEST_CASE("tangent projection removes the radial component") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector g = random_unit(6, rng);
    Vector grad(6);
    for (int i = 0; i < 6; ++i) grad(i) = rng.gaussian();
    const Vector eta = tangent_project(g, grad);
    CHECK(std::abs(eta.dot(g)) < 1e-12);
    // projecting twice changes nothing
    CHECK((tangent_project(g, eta) - eta).norm() < 1e-12);
  }

  Vector not_unit = Vector::Constant(3, 1.0);
  CHECK_THROWS_AS(tangent_project(not_unit, not_unit), InvalidInput);
}

TEST_CASE("retraction walks the great circle") {
  Vector g(2), eta(2);
  g << 1, 0;

  SUBCASE("quarter turn") {
    eta << 0, M_PI / 2;
    const Vector r = retract(g, eta);
    CHECK(r(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r(1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("half turn") {
    eta << 0, M_PI;
    const Vector r = retract(g, eta);
    CHECK(r(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(r(1)) < 1e-12);
  }

  SUBCASE("zero step is exact") {
    eta << 0, 0;
    const Vector r = retract(g, eta);
    CHECK(r(0) == g(0));
    CHECK(r(1) == g(1));
  }

  SUBCASE("stays on the sphere and is first-order correct") {
    Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
      const Vector gu = random_unit(7, rng);
      Vector raw(7);
      for (int i = 0; i < 7; ++i) raw(i) = rng.gaussian();
      const Vector tang = tangent_project(gu, raw);
      const Vector r = retract(gu, tang);
      CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-12));

      const double h = 1e-7;
      const Vector small = retract(gu, h * tang);
      CHECK((small - (gu + h * tang)).norm() < 1e-8 * (1.0 + tang.norm()));
    }
  }
}

TEST_CASE("line search finds the best angle on the geodesic") {
  Vector g(2), eta(2);
  g << 1, 0;
  eta << 0, 2.0;  // |eta| = 2, period pi

  SUBCASE("constant objective keeps the current point") {
    const LineSearchResult res =
        line_search(g, eta, [](const Vector&) { return 3.5; });
    CHECK(res.delta == 0.0);
    CHECK(res.value == 3.5);
  }

  SUBCASE("peak at a known angle") {
    // objective maximized when the point reaches angle 1.0 on the circle
    auto objective = [](const Vector& x) {
      const double angle = std::atan2(x(1), x(0));
      return std::cos(angle - 1.0);
    };
    const LineSearchResult res = line_search(g, eta, objective);
    CHECK(res.delta * eta.norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("never returns less than the starting value") {
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
      const Vector gu = random_unit(5, rng);
      Vector raw(5);
      for (int i = 0; i < 5; ++i) raw(i) = rng.gaussian();
      const Vector tang = tangent_project(gu, raw);
      Matrix quad(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) quad(i, j) = rng.gaussian();
      auto objective = [&](const Vector& x) {
        return x.dot(quad.selfadjointView<Eigen::Lower>() * x);
      };
      const double start = objective(gu);
      const LineSearchResult res = line_search(gu, tang, objective);
      CHECK(res.value >= start);
    }
  }
}
