#include "matron/market.hpp"

#include <algorithm>
#include <cmath>

#include "matron/error.hpp"

namespace matron {

namespace {

std::vector<std::string> default_labels(const char* prefix, Eigen::Index count) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void require_nonnegative(const Vector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      throw DomainError(std::string(what) + " must be finite and nonnegative");
    }
  }
}

}  // namespace

MarketInstance::MarketInstance(std::vector<std::string> types_x,
                               std::vector<std::string> types_y, Vector n, Vector m,
                               Matrix alpha, Matrix gamma)
    : MarketInstance(std::move(types_x), std::move(types_y), n, m, std::move(alpha),
                     Vector::Zero(n.size()), std::move(gamma), Vector::Zero(m.size())) {}

MarketInstance::MarketInstance(std::vector<std::string> types_x,
                               std::vector<std::string> types_y, Vector n, Vector m,
                               Matrix alpha, Vector alpha_x0, Matrix gamma, Vector gamma_0y)
    : types_x_(std::move(types_x)),
      types_y_(std::move(types_y)),
      n_(std::move(n)),
      m_(std::move(m)),
      alpha_(std::move(alpha)),
      alpha_x0_(std::move(alpha_x0)),
      gamma_(std::move(gamma)),
      gamma_0y_(std::move(gamma_0y)) {
  validate();
}

MarketInstance MarketInstance::unlabeled(Vector n, Vector m, Matrix alpha, Matrix gamma) {
  auto tx = default_labels("x", n.size());
  auto ty = default_labels("y", m.size());
  return MarketInstance(std::move(tx), std::move(ty), std::move(n), std::move(m),
                        std::move(alpha), std::move(gamma));
}

void MarketInstance::validate() const {
  const auto nx = n_.size();
  const auto ny = m_.size();
  if (static_cast<Eigen::Index>(types_x_.size()) != nx) throw ShapeError("types_x vs n");
  if (static_cast<Eigen::Index>(types_y_.size()) != ny) throw ShapeError("types_y vs m");
  if (alpha_.rows() != nx || alpha_.cols() != ny) throw ShapeError("alpha must be |X| x |Y|");
  if (gamma_.rows() != nx || gamma_.cols() != ny) throw ShapeError("gamma must be |X| x |Y|");
  if (alpha_x0_.size() != nx) throw ShapeError("alpha_x0 must have |X| entries");
  if (gamma_0y_.size() != ny) throw ShapeError("gamma_0y must have |Y| entries");
  require_nonnegative(n_, "n");
  require_nonnegative(m_, "m");
  if (!alpha_.allFinite() || !gamma_.allFinite() || !alpha_x0_.allFinite() ||
      !gamma_0y_.allFinite()) {
    throw DomainError("systematic utilities must be finite");
  }
}

Matching::Matching(Matrix mu, Vector mu_x0, Vector mu_0y)
    : mu_(std::move(mu)), mu_x0_(std::move(mu_x0)), mu_0y_(std::move(mu_0y)) {
  if (mu_x0_.size() != mu_.rows() || mu_0y_.size() != mu_.cols()) {
    throw ShapeError("unmatched masses must match the pair matrix");
  }
  const auto check = [](const auto& a, const char* what) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (!(a.data()[i] >= 0.0) || !std::isfinite(a.data()[i])) {
        throw DomainError(std::string(what) + " entries must be finite and nonnegative");
      }
    }
  };
  check(mu_, "mu");
  check(mu_x0_, "mu_x0");
  check(mu_0y_, "mu_0y");
}

Matching Matching::from_pairs(const Matrix& mu, const Vector& n, const Vector& m) {
  if (mu.rows() != n.size() || mu.cols() != m.size()) throw ShapeError("mu vs masses");
  Vector x0 = (n - mu.rowwise().sum()).cwiseMax(0.0);
  Vector y0 = (m - mu.colwise().sum().transpose()).cwiseMax(0.0);
  return Matching(mu.cwiseMax(0.0), std::move(x0), std::move(y0));
}

Matching Matching::autarky(const Vector& n, const Vector& m) {
  return Matching(Matrix::Zero(n.size(), m.size()), n, m);
}

double feasibility_residual(const Matching& mu, const MarketInstance& inst) {
  if (mu.mu().rows() != inst.num_x() || mu.mu().cols() != inst.num_y()) {
    throw ShapeError("matching does not match the instance");
  }
  double worst = 0.0;
  for (Eigen::Index x = 0; x < inst.num_x(); ++x) {
    const double r = mu.mu().row(x).sum() + mu.mu_x0()[x] - inst.n()[x];
    worst = std::max(worst, std::abs(r));
  }
  for (Eigen::Index y = 0; y < inst.num_y(); ++y) {
    const double r = mu.mu().col(y).sum() + mu.mu_0y()[y] - inst.m()[y];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ClassicalCheckReport classical_equilibrium_check(const Matching& mu, const Vector& u,
                                                 const Vector& v, const MarketInstance& inst,
                                                 double tol) {
  if (u.size() != inst.num_x() || v.size() != inst.num_y()) {
    throw ShapeError("payoff vectors vs instance");
  }
  ClassicalCheckReport rep;
  rep.feasibility = feasibility_residual(mu, inst);
  rep.stability_margin = kInf;
  rep.reservation_margin = kInf;

  for (Eigen::Index x = 0; x < inst.num_x(); ++x) {
    for (Eigen::Index y = 0; y < inst.num_y(); ++y) {
      const double gap = std::max(u[x] - inst.alpha()(x, y), v[y] - inst.gamma()(x, y));
      if (gap < rep.stability_margin) {
        rep.stability_margin = gap;
        rep.worst_pair = {x, y};
      }
      if (mu.mu()(x, y) > tol) rep.complementarity_gap = std::max(rep.complementarity_gap, std::abs(gap));
    }
    rep.reservation_margin = std::min(rep.reservation_margin, u[x] - inst.alpha_x0()[x]);
    if (mu.mu_x0()[x] > tol) {
      rep.complementarity_gap =
          std::max(rep.complementarity_gap, std::abs(u[x] - inst.alpha_x0()[x]));
    }
  }
  for (Eigen::Index y = 0; y < inst.num_y(); ++y) {
    rep.reservation_margin = std::min(rep.reservation_margin, v[y] - inst.gamma_0y()[y]);
    if (mu.mu_0y()[y] > tol) {
      rep.complementarity_gap =
          std::max(rep.complementarity_gap, std::abs(v[y] - inst.gamma_0y()[y]));
    }
  }
  rep.pass = rep.feasibility <= tol && rep.stability_margin >= -tol &&
             rep.reservation_margin >= -tol && rep.complementarity_gap <= tol;
  return rep;
}

std::pair<ExtendedMatrix, ExtendedMatrix> uv_from_scalar(const Vector& u, const Vector& v,
                                                         const Matrix& alpha,
                                                         const Matrix& gamma) {
  if (alpha.rows() != u.size() || gamma.cols() != v.size() || alpha.rows() != gamma.rows() ||
      alpha.cols() != gamma.cols()) {
    throw ShapeError("uv_from_scalar");
  }
  ExtendedMatrix U(alpha.rows(), alpha.cols());
  ExtendedMatrix V(alpha.rows(), alpha.cols());
  for (Eigen::Index x = 0; x < alpha.rows(); ++x) {
    for (Eigen::Index y = 0; y < alpha.cols(); ++y) {
      U(x, y) = std::min(u[x], alpha(x, y));
      V(x, y) = std::min(v[y], gamma(x, y));
    }
  }
  return {std::move(U), std::move(V)};
}

Matrix stability_gap(const ExtendedMatrix& U, const ExtendedMatrix& V, const Matrix& alpha,
                     const Matrix& gamma) {
  if (U.rows() != alpha.rows() || U.cols() != alpha.cols() || V.rows() != gamma.rows() ||
      V.cols() != gamma.cols()) {
    throw ShapeError("stability_gap");
  }
  // -inf - finite stays -inf, so an entry closed on one side is decided by the other.
  return (U - alpha).cwiseMax(V - gamma);
}

}  // namespace matron
