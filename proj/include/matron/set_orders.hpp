#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "matron/order_report.hpp"
#include "matron/point_set.hpp"

namespace matron {

// X <=_Q Y: for x in X, y in Y and lattice delta1 in [0, (x-y)^+] there is a
// lattice delta2 in [0, (x-y)^-] with x - delta1 + delta2 in X and
// y + delta1 - delta2 in Y. worst_violation counts failing triples.
OrderReport check_q_order_sets(const PointSet& X, const PointSet& Y,
                               const SetOrderOptions& opts = {});

OrderReport check_matron(const PointSet& X, const SetOrderOptions& opts = {});

// Single-coordinate exchange along e_i - e_j (e_0 := 0) with step multiples
// a in {step, 2 step, ...} up to the coordinate span of X. step <= 0 infers
// the smallest coordinate gap.
OrderReport check_m_natural(const PointSet& X, double step = 0.0, double tol = 1e-9);

// Dense tables indexed by bitmask over {0, ..., n-1}; n <= 16.
struct SetFunctionPair {
  std::size_t n = 0;
  std::vector<double> g;  // supermodular
  std::vector<double> h;  // submodular
};

// Pre-checks h submodular and g supermodular, then
//   h(A) - g(B) >= h(A \ B) - g(B \ A) for all A, B.
OrderReport check_paramodular(const SetFunctionPair& pair, const OrderOptions& opts = {});

double support_function(const PointSet& X, std::span<const double> d);

}  // namespace matron
