#include "matron/logit_welfare.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "matron/error.hpp"

namespace matron {

namespace {

constexpr double kBisectTol = 1e-13;
constexpr int kBisectCap = 200;

double reservation_at(const Vector& r, Eigen::Index x) { return r.size() == 0 ? 0.0 : r(x); }

void check_inputs(const Matrix& alpha, const Vector& n, const Vector& reservation) {
  if (alpha.rows() != n.size()) throw ShapeError("alpha rows vs masses");
  if (reservation.size() != 0 && reservation.size() != n.size()) {
    throw ShapeError("reservation utilities vs masses");
  }
}

// Solves t + sum_y clamp(t w_y, lo_y, hi_y) = n for t in [0, n] and writes
// the clamped row into `mu`. Returns t.
double solve_row(const std::vector<double>& w, const std::vector<double>& lo,
                 const std::vector<double>& hi, double n, std::vector<double>& mu) {
  const std::size_t k = w.size();
  mu.assign(k, 0.0);
  auto excess = [&](double t) {
    double s = t;
    for (std::size_t y = 0; y < k; ++y) s += std::clamp(t * w[y], lo[y], hi[y]);
    return s - n;
  };
  double sum_lo = 0.0;
  for (double v : lo) sum_lo += v;
  if (sum_lo > n + 1e-12 * std::max(1.0, n)) {
    throw ContractError("lower bounds exceed the row mass");
  }
  double t = 0.0;
  if (excess(0.0) < 0.0) {
    double a = 0.0;
    double b = n;
    for (int it = 0; it < kBisectCap && b - a > kBisectTol; ++it) {
      const double mid = 0.5 * (a + b);
      if (excess(mid) < 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    t = 0.5 * (a + b);

    // Exact solve on the clamping pattern found by bisection.
    double fixed = 0.0;
    double slope = 1.0;
    for (std::size_t y = 0; y < k; ++y) {
      const double v = t * w[y];
      if (v <= lo[y]) {
        fixed += lo[y];
      } else if (v >= hi[y]) {
        fixed += hi[y];
      } else {
        slope += w[y];
      }
    }
    const double exact = (n - fixed) / slope;
    if (exact >= 0.0 && std::abs(excess(exact)) <= std::abs(excess(t))) t = exact;
  }
  for (std::size_t y = 0; y < k; ++y) mu[y] = std::clamp(t * w[y], lo[y], hi[y]);
  return t;
}

}  // namespace

double logit_value(const ExtendedMatrix& alpha, const Vector& n, const Vector& reservation) {
  check_inputs(alpha, n, reservation);
  double total = 0.0;
  for (Eigen::Index x = 0; x < alpha.rows(); ++x) {
    if (n(x) == 0.0) continue;
    const double a0 = reservation_at(reservation, x);
    double shift = a0;
    for (Eigen::Index y = 0; y < alpha.cols(); ++y) shift = std::max(shift, alpha(x, y));
    double s = std::exp(a0 - shift);
    for (Eigen::Index y = 0; y < alpha.cols(); ++y) {
      if (alpha(x, y) > -kInf) s += std::exp(alpha(x, y) - shift);
    }
    total += n(x) * (shift + std::log(s));
  }
  return total;
}

double logit_conjugate(const Matrix& mu, const Vector& n, const Vector& reservation) {
  check_inputs(mu, n, reservation);
  auto xlogx = [](double v, double scale) { return v == 0.0 ? 0.0 : v * std::log(v / scale); };
  double total = 0.0;
  for (Eigen::Index x = 0; x < mu.rows(); ++x) {
    double row = 0.0;
    double sum = 0.0;
    for (Eigen::Index y = 0; y < mu.cols(); ++y) {
      const double v = mu(x, y);
      if (!(v >= 0.0) || std::isinf(v)) return kInf;
      sum += v;
    }
    const double nx = n(x);
    if (nx == 0.0) {
      if (sum > 0.0) return kInf;
      continue;
    }
    double mu0 = nx - sum;
    if (mu0 < 0.0) {
      if (mu0 < -1e-12 * std::max(1.0, nx)) return kInf;
      mu0 = 0.0;
    }
    for (Eigen::Index y = 0; y < mu.cols(); ++y) row += xlogx(mu(x, y), nx);
    row += xlogx(mu0, nx) - reservation_at(reservation, x) * mu0;
    total += row;
  }
  return total;
}

LogitDemand logit_constrained_demand(const Matrix& alpha, const Matrix& mu_bar, const Vector& n,
                                     const Matrix& mu_lo, const Vector& reservation) {
  check_inputs(alpha, n, reservation);
  if (mu_bar.rows() != alpha.rows() || mu_bar.cols() != alpha.cols()) {
    throw ShapeError("mu_bar vs alpha");
  }
  const bool has_lo = mu_lo.size() != 0;
  if (has_lo && (mu_lo.rows() != alpha.rows() || mu_lo.cols() != alpha.cols())) {
    throw ShapeError("mu_lo vs alpha");
  }
  if ((mu_bar.array() < 0.0).any()) throw DomainError("mu_bar must be nonnegative");

  const Eigen::Index X = alpha.rows();
  const Eigen::Index Y = alpha.cols();
  LogitDemand out{Matrix::Zero(X, Y), Vector::Zero(X)};
  std::vector<double> w(Y), lo(Y), hi(Y), row;
  for (Eigen::Index x = 0; x < X; ++x) {
    if (n(x) == 0.0) continue;
    const double a0 = reservation_at(reservation, x);
    for (Eigen::Index y = 0; y < Y; ++y) {
      w[y] = alpha(x, y) > -kInf ? std::exp(alpha(x, y) - a0) : 0.0;
      hi[y] = mu_bar(x, y);
      lo[y] = has_lo ? std::clamp(mu_lo(x, y), 0.0, hi[y]) : 0.0;
    }
    out.mu_x0(x) = solve_row(w, lo, hi, n(x), row);
    for (Eigen::Index y = 0; y < Y; ++y) out.mu(x, y) = row[y];
  }
  return out;
}

ExtendedMatrix logit_multipliers(const Matrix& alpha, const Matrix& mu_bar, const Vector& n,
                                 const Vector& reservation) {
  const auto dem = logit_constrained_demand(alpha, mu_bar, n, {}, reservation);
  ExtendedMatrix tau = ExtendedMatrix::Zero(alpha.rows(), alpha.cols());
  for (Eigen::Index x = 0; x < alpha.rows(); ++x) {
    if (n(x) == 0.0) continue;
    const double t = dem.mu_x0(x);
    const double a0 = reservation_at(reservation, x);
    for (Eigen::Index y = 0; y < alpha.cols(); ++y) {
      const double a = alpha(x, y);
      if (a == -kInf || t == 0.0) continue;
      if (mu_bar(x, y) == 0.0) {
        tau(x, y) = kInf;
        continue;
      }
      tau(x, y) = std::max(0.0, a - a0 + std::log(t / mu_bar(x, y)));
    }
  }
  return tau;
}

LogitWelfare::LogitWelfare(Vector masses, Eigen::Index other, Side side, Vector reservation)
    : masses_(std::move(masses)), other_(other), side_(side), reservation_(std::move(reservation)) {
  if (other_ < 0) throw ShapeError("negative dimension");
  if (reservation_.size() == 0) reservation_ = Vector::Zero(masses_.size());
  if (reservation_.size() != masses_.size()) throw ShapeError("reservation vs masses");
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    if (!(masses_(i) >= 0.0) || std::isinf(masses_(i))) {
      throw DomainError("masses must be finite and nonnegative");
    }
    if (!std::isfinite(reservation_(i))) throw DomainError("reservation utilities must be finite");
  }
}

Eigen::Index LogitWelfare::rows() const { return side_ == Side::rows ? masses_.size() : other_; }
Eigen::Index LogitWelfare::cols() const { return side_ == Side::rows ? other_ : masses_.size(); }

Matrix LogitWelfare::orient(const Matrix& m) const {
  return side_ == Side::rows ? m : Matrix(m.transpose());
}

double LogitWelfare::value(const ExtendedMatrix& U) const {
  check_shape(U, "U");
  return logit_value(orient(U), masses_, reservation_);
}

double LogitWelfare::conjugate(const Matrix& mu) const {
  check_shape(mu, "mu");
  return logit_conjugate(orient(mu), masses_, reservation_);
}

Matrix LogitWelfare::demand_cap() const {
  Matrix cap(masses_.size(), other_);
  for (Eigen::Index i = 0; i < masses_.size(); ++i) cap.row(i).setConstant(masses_(i));
  return orient(cap);
}

Matrix LogitWelfare::constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                                        const Matrix& mu_lo) const {
  check_shape(alpha, "alpha");
  check_shape(mu_bar, "mu_bar");
  check_shape(mu_lo, "mu_lo");
  return orient(
      logit_constrained_demand(orient(alpha), orient(mu_bar), masses_, orient(mu_lo), reservation_)
          .mu);
}

ExtendedMatrix LogitWelfare::multipliers(const Matrix& alpha, const Matrix& mu_bar) const {
  check_shape(alpha, "alpha");
  check_shape(mu_bar, "mu_bar");
  return orient(logit_multipliers(orient(alpha), orient(mu_bar), masses_, reservation_));
}

Vector LogitWelfare::unmatched(const Matrix& mu) const {
  check_shape(mu, "mu");
  const Vector sums = side_ == Side::rows ? Vector(mu.rowwise().sum()) : Vector(mu.colwise().sum().transpose());
  return (masses_ - sums).cwiseMax(0.0);
}

}  // namespace matron
