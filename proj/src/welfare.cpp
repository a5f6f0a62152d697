#include "matron/welfare.hpp"

#include <cmath>
#include <string>

#include "matron/error.hpp"

namespace matron {

void WelfareFunction::check_shape(const Matrix& m, const char* what) const {
  if (m.rows() != rows() || m.cols() != cols()) {
    throw ShapeError(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", welfare is " + std::to_string(rows()) + "x" +
                     std::to_string(cols()));
  }
}

double welfare_fenchel_residual(const WelfareFunction& W, const ExtendedMatrix& U,
                                const Matrix& mu) {
  if (U.rows() != mu.rows() || U.cols() != mu.cols()) throw ShapeError("U vs mu");
  const double conj = W.conjugate(mu);
  if (std::isinf(conj)) return kInf;
  const double pairing = ext::dot(mu, U);
  if (std::isinf(pairing)) return kInf;
  return W.value(U) + conj - pairing;
}

}  // namespace matron
