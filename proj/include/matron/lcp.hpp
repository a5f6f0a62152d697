#pragma once

#include "matron/extended.hpp"

namespace matron {

// Find r, tau >= 0 with r = S tau + rho and r'tau = 0.
struct LCPInstance {
  Matrix S;
  Vector rho;
};

struct LCPSolution {
  Vector r;
  Vector tau;
  std::size_t sweeps = 0;
  bool polished = false;  // final iterate came from the exact active-set solve
};

struct LCPOptions {
  double relaxation = 1.0;
  std::size_t max_sweeps = 10'000;
  double tol = 1e-10;
};

// Projected Gauss-Seidel followed by an exact solve on the detected support.
// Throws IterationLimitError when the complementarity residual stays above
// tol after max_sweeps.
LCPSolution lcp_solve(const LCPInstance& inst, const LCPOptions& opts = {});

// max(|r'tau|, -min(r), -min(tau)).
double lcp_residual(const LCPInstance& inst, const Vector& r, const Vector& tau);

// min 1/2 x'Ax - b'x over lo <= x <= hi (entries of hi may be +inf), A
// symmetric positive definite. Same solver as lcp_solve.
Vector box_qp_solve(const Matrix& A, const Vector& b, const Vector& lo, const Vector& hi,
                    const LCPOptions& opts = {});

struct QuadraticResidual {
  Vector r;    // caps left unused, q_bar - q
  Vector tau;  // multipliers of q <= q_bar
};

// LCP with S = inv(A), rho = q_bar - S p.
QuadraticResidual quadratic_residual(const Vector& p, const Vector& q_bar, const Matrix& A,
                                     const LCPOptions& opts = {});

}  // namespace matron
