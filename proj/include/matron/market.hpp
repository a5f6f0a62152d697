#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matron/extended.hpp"

namespace matron {

// Aggregated two-sided market: masses per observable type plus systematic
// utilities. Rows follow types_x, columns follow types_y.
class MarketInstance {
 public:
  MarketInstance(std::vector<std::string> types_x, std::vector<std::string> types_y,
                 Vector n, Vector m, Matrix alpha, Matrix gamma);
  MarketInstance(std::vector<std::string> types_x, std::vector<std::string> types_y,
                 Vector n, Vector m, Matrix alpha, Vector alpha_x0, Matrix gamma,
                 Vector gamma_0y);

  // Unlabelled instance; types are named x0.., y0...
  static MarketInstance unlabeled(Vector n, Vector m, Matrix alpha, Matrix gamma);

  const std::vector<std::string>& types_x() const { return types_x_; }
  const std::vector<std::string>& types_y() const { return types_y_; }
  const Vector& n() const { return n_; }
  const Vector& m() const { return m_; }
  const Matrix& alpha() const { return alpha_; }
  const Vector& alpha_x0() const { return alpha_x0_; }
  const Matrix& gamma() const { return gamma_; }
  const Vector& gamma_0y() const { return gamma_0y_; }

  Eigen::Index num_x() const { return n_.size(); }
  Eigen::Index num_y() const { return m_.size(); }

 private:
  void validate() const;

  std::vector<std::string> types_x_;
  std::vector<std::string> types_y_;
  Vector n_;
  Vector m_;
  Matrix alpha_;
  Vector alpha_x0_;
  Matrix gamma_;
  Vector gamma_0y_;
};

// Mass of xy pairs plus unmatched masses on each side.
class Matching {
 public:
  Matching(Matrix mu, Vector mu_x0, Vector mu_0y);

  // Fills the unmatched masses from the marginals, clamping round-off at 0.
  static Matching from_pairs(const Matrix& mu, const Vector& n, const Vector& m);
  static Matching autarky(const Vector& n, const Vector& m);

  const Matrix& mu() const { return mu_; }
  const Vector& mu_x0() const { return mu_x0_; }
  const Vector& mu_0y() const { return mu_0y_; }

 private:
  Matrix mu_;
  Vector mu_x0_;
  Vector mu_0y_;
};

struct EquilibriumOutcome {
  Matching mu;
  ExtendedMatrix U;
  ExtendedMatrix V;
  ExtendedMatrix tau_alpha;
  ExtendedMatrix tau_gamma;
  std::map<std::string, double> residuals;
};

// Sup-norm of the two marginal-constraint residuals; 0 means feasible.
double feasibility_residual(const Matching& mu, const MarketInstance& inst);

struct ClassicalCheckReport {
  bool pass = false;
  double feasibility = 0.0;
  // min over pairs of max(u_x - alpha_xy, v_y - gamma_xy); negative means a
  // blocking pair.
  double stability_margin = 0.0;
  // min over types of u_x - alpha_x0 and v_y - gamma_0y.
  double reservation_margin = 0.0;
  // worst |.| of the complementarity equalities over positive-mass arrangements.
  double complementarity_gap = 0.0;
  std::pair<Eigen::Index, Eigen::Index> worst_pair{-1, -1};
};

ClassicalCheckReport classical_equilibrium_check(const Matching& mu, const Vector& u,
                                                 const Vector& v, const MarketInstance& inst,
                                                 double tol = kDefaultTol);

// U_xy = min(u_x, alpha_xy), V_xy = min(v_y, gamma_xy).
std::pair<ExtendedMatrix, ExtendedMatrix> uv_from_scalar(const Vector& u, const Vector& v,
                                                         const Matrix& alpha,
                                                         const Matrix& gamma);

// Entrywise max(U - alpha, V - gamma) with extended arithmetic.
Matrix stability_gap(const ExtendedMatrix& U, const ExtendedMatrix& V, const Matrix& alpha,
                     const Matrix& gamma);

}  // namespace matron
