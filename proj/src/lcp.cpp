#include "matron/lcp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "matron/error.hpp"

namespace matron {

namespace {

// Projected-gradient stationarity measure of x for min 1/2 x'Ax - b'x on the box.
double stationarity(const Matrix& A, const Vector& b, const Vector& lo, const Vector& hi,
                    const Vector& x) {
  const Vector g = A * x - b;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = std::clamp(x(i) - g(i), lo(i), hi(i));
    worst = std::max(worst, std::abs(x(i) - step));
  }
  return worst;
}

// Exact solve with the free set read off x; returns false if the result
// leaves the box.
bool polish(const Matrix& A, const Vector& b, const Vector& lo, const Vector& hi, Vector& x) {
  const Eigen::Index n = x.size();
  std::vector<Eigen::Index> free;
  Vector fixed = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double slack = 1e-12 * (1.0 + std::abs(x(i)));
    if (x(i) <= lo(i) + slack) {
      fixed(i) = lo(i);
    } else if (x(i) >= hi(i) - slack) {
      fixed(i) = hi(i);
    } else {
      free.push_back(i);
    }
  }
  Vector z = fixed;
  if (!free.empty()) {
    const auto k = static_cast<Eigen::Index>(free.size());
    Matrix Aff(k, k);
    Vector rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      rhs(a) = b(free[a]);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::find(free.begin(), free.end(), j) == free.end()) {
          rhs(a) -= A(free[a], j) * fixed(j);
        }
      }
      for (Eigen::Index c = 0; c < k; ++c) Aff(a, c) = A(free[a], free[c]);
    }
    const Vector y = Aff.partialPivLu().solve(rhs);
    if (!y.allFinite()) return false;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double v = y(a);
      const double slack = 1e-12 * (1.0 + std::abs(v));
      if (v < lo(free[a]) - slack || v > hi(free[a]) + slack) return false;
      z(free[a]) = std::clamp(v, lo(free[a]), hi(free[a]));
    }
  }
  if (stationarity(A, b, lo, hi, z) > stationarity(A, b, lo, hi, x)) return false;
  x = z;
  return true;
}

struct BoxSolve {
  Vector x;
  std::size_t sweeps = 0;
  bool polished = false;
  double residual = 0.0;
};

BoxSolve solve_box(const Matrix& A, const Vector& b, const Vector& lo, const Vector& hi,
                   const LCPOptions& opts) {
  const Eigen::Index n = b.size();
  if (A.rows() != n || A.cols() != n || lo.size() != n || hi.size() != n) {
    throw ShapeError("box QP dimensions");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(A(i, i) > 0.0)) throw ConditioningError("nonpositive diagonal entry");
    if (lo(i) > hi(i)) throw DomainError("empty box");
  }
  BoxSolve out;
  out.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) out.x(i) = std::clamp(0.0, lo(i), hi(i));
  if (n == 0) return out;

  const double target = 1e-2 * opts.tol;
  for (std::size_t sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = b(i) - A.row(i).dot(out.x);
      const double next =
          std::clamp(out.x(i) + opts.relaxation * g / A(i, i), lo(i), hi(i));
      change = std::max(change, std::abs(next - out.x(i)));
      out.x(i) = next;
    }
    out.sweeps = sweep;
    if (change < 1e-6 || sweep % 16 == 0) {
      Vector trial = out.x;
      if (polish(A, b, lo, hi, trial) && stationarity(A, b, lo, hi, trial) <= target) {
        out.x = trial;
        out.polished = true;
        break;
      }
    }
    if (change == 0.0) break;
  }
  out.residual = stationarity(A, b, lo, hi, out.x);
  return out;
}

}  // namespace

double lcp_residual(const LCPInstance& inst, const Vector& r, const Vector& tau) {
  (void)inst;
  double res = std::abs(r.dot(tau));
  if (r.size() > 0) res = std::max({res, -r.minCoeff(), -tau.minCoeff()});
  return res;
}

LCPSolution lcp_solve(const LCPInstance& inst, const LCPOptions& opts) {
  const Eigen::Index n = inst.rho.size();
  if (inst.S.rows() != n || inst.S.cols() != n) throw ShapeError("S vs rho");
  const Vector lo = Vector::Zero(n);
  const Vector hi = Vector::Constant(n, kInf);
  auto sol = solve_box(inst.S, -inst.rho, lo, hi, opts);
  LCPSolution out;
  out.tau = sol.x;
  out.r = inst.S * out.tau + inst.rho;
  out.sweeps = sol.sweeps;
  out.polished = sol.polished;
  // Entries of r on the support are zero up to round-off.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.tau(i) > 0.0 && std::abs(out.r(i)) <= 1e-12 * (1.0 + std::abs(inst.rho(i)))) {
      out.r(i) = 0.0;
    }
  }
  const double res = lcp_residual(inst, out.r, out.tau);
  if (res > opts.tol) throw IterationLimitError("LCP did not reach tolerance", res);
  return out;
}

Vector box_qp_solve(const Matrix& A, const Vector& b, const Vector& lo, const Vector& hi,
                    const LCPOptions& opts) {
  auto sol = solve_box(A, b, lo, hi, opts);
  if (sol.residual > opts.tol) throw IterationLimitError("box QP did not reach tolerance", sol.residual);
  return sol.x;
}

QuadraticResidual quadratic_residual(const Vector& p, const Vector& q_bar, const Matrix& A,
                                     const LCPOptions& opts) {
  const Eigen::Index n = p.size();
  if (q_bar.size() != n || A.rows() != n || A.cols() != n) throw ShapeError("p, q_bar, A");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw ConditioningError("A must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 1e-12 * std::max(1.0, lmax))) throw ConditioningError("A is singular or indefinite");
  const Matrix S = A.llt().solve(Matrix::Identity(n, n));
  const LCPInstance inst{S, q_bar - S * p};
  const auto sol = lcp_solve(inst, opts);
  return {sol.r, sol.tau};
}

}  // namespace matron
