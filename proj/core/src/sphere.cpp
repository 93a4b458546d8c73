#include "fusegain/sphere.hpp"

#include <cmath>
#include <string>

#include "fusegain/errors.hpp"

namespace fusegain {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

void check_unit(const Vector& g) {
  if (std::abs(g.norm() - 1.0) > 1e-8) {
    throw InvalidInput("sphere point must have unit norm");
  }
}

}  // namespace

Vector vectorize(const Matrix& G) {
  Vector g(G.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) g[k++] = G(i, j);
  return g;
}

Matrix devectorize(const Vector& g, int t, int q) {
  if (t < 0 || q < 0 || g.size() != static_cast<Eigen::Index>(t) * q) {
    throw LengthMismatch("vector of length " + std::to_string(g.size()) +
                         " cannot fill a " + std::to_string(t) + "x" +
                         std::to_string(q) + " matrix");
  }
  Matrix G(t, q);
  Eigen::Index k = 0;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < q; ++j) G(i, j) = g[k++];
  return G;
}

Vector tangent_project(const Vector& g, const Vector& grad) {
  if (g.size() != grad.size()) {
    throw LengthMismatch("point and gradient must have equal length");
  }
  check_unit(g);
  return grad - g.dot(grad) * g;
}

Vector retract(const Vector& g, const Vector& eta) {
  if (g.size() != eta.size()) {
    throw LengthMismatch("point and tangent must have equal length");
  }
  const double n = eta.norm();
  if (n == 0.0) return g;
  return std::cos(n) * g + (std::sin(n) / n) * eta;
}

LineSearchResult line_search(
    const Vector& g, const Vector& eta,
    const std::function<double(const Vector&)>& objective) {
  check_unit(g);
  const double n = eta.norm();
  LineSearchResult best;
  best.delta = 0.0;
  best.value = objective(g);
  if (n == 0.0) return best;

  const double period = kTwoPi / n;
  auto eval = [&](double delta) { return objective(retract(g, delta * eta)); };

  constexpr int kGrid = 64;
  int best_j = 0;
  for (int j = 1; j < kGrid; ++j) {
    const double delta = period * j / kGrid;
    const double v = eval(delta);
    if (v > best.value) {
      best.value = v;
      best.delta = delta;
      best_j = j;
    }
  }

  // golden-section refinement in the two grid cells around the best sample;
  // the objective is periodic so the bracket may extend below zero
  const double golden = 0.6180339887498948482;
  double lo = period * (best_j - 1) / kGrid;
  double hi = period * (best_j + 1) / kGrid;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int iter = 0; iter < 41; ++iter) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = eval(x1);
    }
    const double xb = f1 >= f2 ? x1 : x2;
    const double fb = f1 >= f2 ? f1 : f2;
    if (fb > best.value) {
      best.value = fb;
      best.delta = xb;
    }
  }
  return best;
}

}  // namespace fusegain
