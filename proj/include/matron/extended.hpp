#pragma once

// Extended-real helpers. Infinite entries are stored as IEEE infinities;
// every product that may meet an infinity goes through ext::mul so that the
// convention 0 * (+-inf) = 0 holds.

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace matron {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Matrix over X x Y whose entries live in R u {+inf} (multipliers tau) or
// R u {-inf} (utilities U, V).
using ExtendedMatrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTol = 1e-8;

namespace ext {

inline double mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// Sum of elementwise products with the 0 * inf = 0 convention.
// Returns NaN only if +inf and -inf terms meet.
inline double dot(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += mul(a.data()[i], b.data()[i]);
  return s;
}

// a - b where b may be +inf (gives -inf) and a is finite or -inf.
inline Matrix sub(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i];
    const double y = b.data()[i];
    if (std::isinf(y) && y > 0) {
      out.data()[i] = -kInf;
    } else if (std::isinf(x) && x < 0) {
      out.data()[i] = -kInf;
    } else {
      out.data()[i] = x - y;
    }
  }
  return out;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace ext
}  // namespace matron
