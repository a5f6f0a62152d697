#pragma once

#include <cstddef>
#include <span>

#include "matron/grid_function.hpp"
#include "matron/point_set.hpp"

namespace matron {

struct LegendreResult {
  GridFunction conjugate;
  // Second-order bound on how far the sampled supremum can fall below the
  // supremum over the sampled box: L * sum_i h_i^2 / 8, with L a Gershgorin
  // bound on the finite-difference Hessian of f.
  double grid_error = 0.0;
  // Dual nodes whose maximiser sits on the outer boundary of the primal grid
  // while f is finite there; the conjugate may be truncated at such nodes.
  std::size_t saturated_nodes = 0;
  bool boundary_saturation = false;
};

// conj(p) = max over lattice nodes s of <p, s> - f(s), at every node of the
// dual lattice.
LegendreResult legendre_transform(const GridFunction& f, const GridFunction::Axes& dual_axes);

// Estimate used by legendre_transform; exposed for tests and duality bands.
double sampling_error_bound(const GridFunction& f);

// Dual nodes p with |f*(p) + f(s) - <p, s>| <= tol. `s` must be a lattice node
// of f with f(s) finite.
PointSet subdifferential(const GridFunction& f, std::span<const double> s,
                         const GridFunction::Axes& dual_axes, double tol = 1e-9);

}  // namespace matron
