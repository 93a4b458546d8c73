#pragma once

#include <functional>

#include "fusegain/linalg.hpp"

namespace fusegain {

// Row-major flattening: vec(G) = (G(0,0), ..., G(0,q-1), G(1,0), ...).
Vector vectorize(const Matrix& G);

Matrix devectorize(const Vector& g, int t, int q);

// Orthogonal projection onto the tangent space of the unit sphere at g:
// eta = (I - g g') grad. g must be unit length.
Vector tangent_project(const Vector& g, const Vector& grad);

// Geodesic retraction R_g(eta) = g cos|eta| + (eta/|eta|) sin|eta|;
// eta = 0 returns g unchanged.
Vector retract(const Vector& g, const Vector& eta);

struct LineSearchResult {
  double delta = 0.0;
  double value = 0.0;
};

// Maximizes f(delta) = objective(R_g(delta * eta)) over one geodesic period
// [0, 2 pi / |eta|): 64-point grid scan followed by 41 golden-section
// refinements around the best grid cell. delta = 0 is always a candidate,
// so the returned value is never below objective at g itself.
LineSearchResult line_search(const Vector& g, const Vector& eta,
                             const std::function<double(const Vector&)>& objective);

}  // namespace fusegain
