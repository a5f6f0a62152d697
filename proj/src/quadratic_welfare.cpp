#include "matron/quadratic_welfare.hpp"

#include <algorithm>
#include <cmath>

#include "matron/error.hpp"
#include "matron/lcp.hpp"

namespace matron {

namespace {
constexpr double kBoxSlack = 1e-12;
}

QuadraticWelfare::QuadraticWelfare(Matrix A, Matrix cap, Side side)
    : A_(std::move(A)), cap_(std::move(cap)), side_(side) {
  const Eigen::Index k = cap_.size();
  if (A_.rows() != k || A_.cols() != k) throw ShapeError("A must be |X||Y| square");
  if (!A_.allFinite() || !cap_.allFinite()) throw DomainError("A and cap must be finite");
  if ((cap_.array() < 0.0).any()) throw DomainError("cap must be nonnegative");
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A_.cwiseAbs().maxCoeff())) {
    throw ConditioningError("A must be symmetric");
  }
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A_);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) throw ConditioningError("A must be positive definite");
  }
}

Vector QuadraticWelfare::vec(const Matrix& m) const {
  Vector v(m.size());
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index y = 0; y < m.cols(); ++y) v(x * m.cols() + y) = m(x, y);
  }
  return v;
}

Matrix QuadraticWelfare::unvec(const Vector& v) const {
  Matrix m(rows(), cols());
  for (Eigen::Index x = 0; x < rows(); ++x) {
    for (Eigen::Index y = 0; y < cols(); ++y) m(x, y) = v(x * cols() + y);
  }
  return m;
}

double QuadraticWelfare::value(const ExtendedMatrix& U) const {
  check_shape(U, "U");
  Vector b = vec(U);
  Vector hi = vec(cap_);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b(i) == -kInf) {
      b(i) = 0.0;
      hi(i) = 0.0;
    }
  }
  const Vector mu = box_qp_solve(A_, b, Vector::Zero(b.size()), hi);
  return b.dot(mu) - 0.5 * mu.dot(A_ * mu);
}

double QuadraticWelfare::conjugate(const Matrix& mu) const {
  check_shape(mu, "mu");
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double v = mu.data()[i];
    const double c = cap_.data()[i];
    if (!(v >= -kBoxSlack) || v > c + kBoxSlack * (1.0 + c)) return kInf;
  }
  const Vector v = vec(mu);
  return 0.5 * v.dot(A_ * v);
}

Matrix QuadraticWelfare::constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                                            const Matrix& mu_lo) const {
  check_shape(alpha, "alpha");
  check_shape(mu_bar, "mu_bar");
  check_shape(mu_lo, "mu_lo");
  const Vector hi = vec(mu_bar.cwiseMin(cap_).cwiseMax(0.0));
  const Vector lo = vec(mu_lo.cwiseMax(0.0)).cwiseMin(hi);
  return unvec(box_qp_solve(A_, vec(alpha), lo, hi));
}

ExtendedMatrix QuadraticWelfare::multipliers(const Matrix& alpha, const Matrix& mu_bar) const {
  const Matrix mu = constrained_demand(alpha, mu_bar);
  const Matrix grad = alpha - unvec(A_ * vec(mu));
  ExtendedMatrix tau = ExtendedMatrix::Zero(rows(), cols());
  for (Eigen::Index x = 0; x < rows(); ++x) {
    for (Eigen::Index y = 0; y < cols(); ++y) {
      const double bar = std::max(0.0, mu_bar(x, y));
      if (bar < cap_(x, y) && mu(x, y) >= bar - kBoxSlack * (1.0 + bar)) {
        tau(x, y) = std::max(0.0, grad(x, y));
      }
    }
  }
  return tau;
}

Vector QuadraticWelfare::unmatched(const Matrix& mu) const {
  check_shape(mu, "mu");
  return Vector::Zero(side_ == Side::rows ? rows() : cols());
}

}  // namespace matron
