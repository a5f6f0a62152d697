#include "matron/grid_welfare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matron/error.hpp"

namespace matron {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kPivotTol = 1e-12;
constexpr double kCapNudge = 1e-9;

// Dense tableau simplex, Bland's rule, for
//   max sum_i lambda_i v_i  s.t.  sum_i lambda_i mu_i + s = b,  sum_i lambda_i = 1,
// started from the basis {lambda_origin, s}. Returns the dual prices of the
// first K rows.
Vector cap_prices(const std::vector<double>& nodes, const std::vector<double>& v, std::size_t K,
                  std::size_t origin, const Vector& b) {
  const std::size_t N = v.size();
  const std::size_t cols = N + K;
  const std::size_t R = K + 1;
  // Row-major tableau with an extra column for the right-hand side.
  std::vector<double> T(R * (cols + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return T[r * (cols + 1) + c]; };
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < K; ++k) at(k, i) = nodes[i * K + k];
    at(K, i) = 1.0;
  }
  for (std::size_t k = 0; k < K; ++k) {
    at(k, N + k) = 1.0;
    at(k, cols) = b(static_cast<Eigen::Index>(k));
  }
  at(K, cols) = 1.0;
  std::vector<std::size_t> basis(R);
  for (std::size_t k = 0; k < K; ++k) basis[k] = N + k;
  basis[K] = origin;

  // Reduced costs d_j = c_B B^-1 a_j - c_j; the origin column has zero
  // coordinates so the starting tableau is already canonical.
  std::vector<double> d(cols, 0.0);
  for (std::size_t i = 0; i < N; ++i) d[i] = v[origin] - v[i];

  const std::size_t max_pivots = 50 * (cols + R);
  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw IterationLimitError("simplex pivot cap", 0.0);
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (d[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = R;
    double best = kInf;
    for (std::size_t r = 0; r < R; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = at(r, cols) / a;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == R) throw DomainError("unbounded multiplier LP");
    const double piv = at(leave, enter);
    for (std::size_t c = 0; c <= cols; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r < R; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(leave, c);
    }
    const double f = d[enter];
    for (std::size_t c = 0; c < cols; ++c) d[c] -= f * at(leave, c);
    basis[leave] = enter;
  }
  Vector prices(static_cast<Eigen::Index>(K));
  for (std::size_t k = 0; k < K; ++k) prices(static_cast<Eigen::Index>(k)) = std::max(0.0, d[N + k]);
  return prices;
}

Vector flatten(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index y = 0; y < m.cols(); ++y) v(x * m.cols() + y) = m(x, y);
  }
  return v;
}

}  // namespace

GridWelfare::GridWelfare(GridFunction conjugate, Matrix cap, Side side, std::size_t node_budget)
    : grid_(std::move(conjugate)), cap_(std::move(cap)), side_(side) {
  const auto K = static_cast<std::size_t>(cap_.size());
  if (grid_.dims() != K) throw ShapeError("conjugate grid dimension must be |X||Y|");
  if (grid_.size() > node_budget) {
    throw SizeError("lattice of " + std::to_string(grid_.size()) + " nodes exceeds budget");
  }
  const Vector capv = flatten(cap_);
  const std::vector<double> origin(K, 0.0);
  const auto z = grid_.find_node(origin);
  if (z < 0 || !grid_.finite_at(static_cast<std::size_t>(z))) {
    throw ContractError("conjugate must be finite at the origin");
  }
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    if (!grid_.finite_at(node)) continue;
    const auto p = grid_.point(node);
    for (std::size_t k = 0; k < K; ++k) {
      const double c = capv(static_cast<Eigen::Index>(k));
      if (p[k] < -kBoundSlack || p[k] > c + kBoundSlack * (1.0 + c)) {
        throw ContractError("conjugate domain exceeds [0, cap]");
      }
    }
    if (node == static_cast<std::size_t>(z)) zero_ = costs_.size();
    nodes_.insert(nodes_.end(), p.begin(), p.end());
    costs_.push_back(grid_.value(node));
  }
}

double GridWelfare::value(const ExtendedMatrix& U) const {
  check_shape(U, "U");
  const Vector u = flatten(U);
  const std::size_t K = static_cast<std::size_t>(u.size());
  double best = -kInf;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    double s = -costs_[i];
    for (std::size_t k = 0; k < K; ++k) s += ext::mul(nodes_[i * K + k], u(static_cast<Eigen::Index>(k)));
    best = std::max(best, s);
  }
  return best;
}

double GridWelfare::conjugate(const Matrix& mu) const {
  check_shape(mu, "mu");
  const Vector v = flatten(mu);
  const auto node = grid_.find_node(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
  return node < 0 ? kInf : grid_.value(static_cast<std::size_t>(node));
}

Matrix GridWelfare::constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                                       const Matrix& mu_lo) const {
  check_shape(alpha, "alpha");
  check_shape(mu_bar, "mu_bar");
  check_shape(mu_lo, "mu_lo");
  const Vector a = flatten(alpha);
  const Vector hi = flatten(mu_bar);
  const Vector lo = flatten(mu_lo);
  const std::size_t K = static_cast<std::size_t>(a.size());
  double best = -kInf;
  std::size_t arg = costs_.size();
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    bool inside = true;
    double s = -costs_[i];
    for (std::size_t k = 0; k < K && inside; ++k) {
      const double c = nodes_[i * K + k];
      const auto e = static_cast<Eigen::Index>(k);
      inside = c <= hi(e) + kBoundSlack * (1.0 + std::abs(hi(e))) &&
               c >= lo(e) - kBoundSlack * (1.0 + std::abs(lo(e)));
      s += ext::mul(c, a(e));
    }
    if (inside && s > best) {
      best = s;
      arg = i;
    }
  }
  if (arg == costs_.size()) throw ContractError("no lattice node within the demand bounds");
  Matrix out(rows(), cols());
  for (Eigen::Index x = 0; x < rows(); ++x) {
    for (Eigen::Index y = 0; y < cols(); ++y) out(x, y) = nodes_[arg * K + static_cast<std::size_t>(x * cols() + y)];
  }
  return out;
}

ExtendedMatrix GridWelfare::multipliers(const Matrix& alpha, const Matrix& mu_bar) const {
  check_shape(alpha, "alpha");
  check_shape(mu_bar, "mu_bar");
  const Vector a = flatten(alpha);
  const std::size_t K = static_cast<std::size_t>(a.size());
  std::vector<double> v(costs_.size());
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    double s = -costs_[i];
    for (std::size_t k = 0; k < K; ++k) s += ext::mul(nodes_[i * K + k], a(static_cast<Eigen::Index>(k)));
    v[i] = s;
  }
  // Nodes carrying mass on a -inf utility never enter.
  std::vector<double> nodes;
  std::vector<double> vals;
  std::size_t origin = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == -kInf) continue;
    if (i == zero_) origin = vals.size();
    nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(i * K),
                 nodes_.begin() + static_cast<std::ptrdiff_t>((i + 1) * K));
    vals.push_back(v[i]);
  }
  const Vector b = flatten(mu_bar).cwiseMax(0.0).array() + kCapNudge;
  const Vector prices = cap_prices(nodes, vals, K, origin, b);
  ExtendedMatrix tau(rows(), cols());
  for (Eigen::Index x = 0; x < rows(); ++x) {
    for (Eigen::Index y = 0; y < cols(); ++y) tau(x, y) = prices(x * cols() + y);
  }
  return tau;
}

Vector GridWelfare::unmatched(const Matrix& mu) const {
  check_shape(mu, "mu");
  return Vector::Zero(side_ == Side::rows ? rows() : cols());
}

std::shared_ptr<GridWelfare> grid_welfare_from_conjugate(GridFunction conjugate, Matrix cap,
                                                         Side side) {
  return std::make_shared<GridWelfare>(std::move(conjugate), std::move(cap), side);
}

}  // namespace matron
