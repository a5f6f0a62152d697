#pragma once

#include <cstddef>
#include <vector>

#include "matron/grid_function.hpp"
#include "matron/order_report.hpp"

namespace matron {

// Coordinate index set D, 0-based.
using IndexSet = std::vector<std::size_t>;

// f(p ^ p') + g(p v p') <= f(p) + g(p') + tol for p in dom f, p' in dom g.
OrderReport check_p_order(const GridFunction& f, const GridFunction& g,
                          const OrderOptions& opts = {});

// check_p_order(f, f).
OrderReport check_submodular(const GridFunction& f, const OrderOptions& opts = {});

// Exchange form of f <=_Q g: for q in dom f, q' in dom g and every lattice
// delta1 in [0, (q-q')^+] some lattice delta2 in [0, (q-q')^-] satisfies
//   f(q - delta1 + delta2) + g(q' + delta1 - delta2) <= f(q) + g(q') + tol.
// Requires uniformly spaced, identical axes.
OrderReport check_q_order_functions(const GridFunction& f, const GridFunction& g,
                                    const OrderOptions& opts = {});

// (eps, D) variant: delta1 supported on D, delta2 restricted on D to
// [0, (q-q')^-] and free off D; strict inequality with slack eps.
OrderReport check_eps_d_q_order(const GridFunction& f, const GridFunction& g, double eps,
                                const IndexSet& D, const OrderOptions& opts = {});

// f(l + a ^ b) + g(l + a v b) < f(l + a) + g(l + b) + eps over lattice l and
// a, b supported on D; equivalently over node pairs that agree off D.
OrderReport check_eps_d_p_order(const GridFunction& f, const GridFunction& g, double eps,
                                const IndexSet& D, const OrderOptions& opts = {});

struct DualityReport {
  OrderReport q_side;  // check_eps_d_q_order(f, g)
  OrderReport p_side;  // check_eps_d_p_order(g*, f*)
  // 2x the larger sampling-error bound of the two conjugates.
  double band = 0.0;
  bool agree = false;
  // agree, or a disagreement whose defect sits within `band` of the threshold.
  bool consistent = false;
};

DualityReport duality_check(const GridFunction& f, const GridFunction& g, double eps,
                            const IndexSet& D, const GridFunction::Axes& dual_axes,
                            const OrderOptions& opts = {});

}  // namespace matron
