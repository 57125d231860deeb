#pragma once

#include <Eigen/Dense>
#include <utility>

#include "collapse/distributions.hpp"
#include "collapse/labelers.hpp"

namespace collapse {

/// Standard normal CDF, absolute error <= 1e-12.
double phi_cdf(double x);

/// Standard normal pdf.
double phi_pdf(double x);

/// Bivariate standard normal CDF P(X <= c1, Y <= c2) with correlation rho,
/// absolute error <= 1e-7 for |rho| < 1. |rho| >= 1 uses the degenerate
/// closed forms: rho = 1 -> Phi(min(c1, c2)); rho = -1 -> max(0, Phi(c1) + Phi(c2) - 1).
double phi2_cdf(double c1, double c2, double rho);

/// Geometry of a linear generator/pruner pair relative to the mean direction:
/// theta_gen = angle(w_gen, mu), theta_prune = angle(w_prune, mu),
/// theta = angle(w_prune, w_gen).
struct AngleTriple {
  double theta_gen = 0.0;
  double theta_prune = 0.0;
  double theta = 0.0;

  /// True when some vector configuration realizes the triple:
  /// cos(theta_gen + theta_prune) <= cos(theta) <= cos(theta_gen - theta_prune).
  bool consistent(double tol = 1e-12) const;
  void validate() const;
};

/// Unit vectors (w_gen, w_prune) in R^d realizing the triple against w* = e1.
/// Throws on inconsistent triples.
std::pair<Weights, Weights> realize_angles(const AngleTriple& angles, int d);

struct PhiPsi {
  double phi = 1.0;
  double psi = 1.0;
};

/// Closed-form (phi, psi) of the margin pruner on deterministically generated
/// labels, from the angle geometry. Thresholds are c = -mu_norm cos(theta) / proj_sd
/// under the chosen covariance convention,
///   phi = (1 - Phi(c1) - Phi(c2) + Phi2(c1, c2; cos theta)) / (1 - Phi(c2)),
///   psi = Phi2(c1, c2; cos theta) / Phi(c2),
/// with degenerate limits (Phi(c2) numerically 0 or 1) resolved to the exact
/// limiting rates rather than NaN.
PhiPsi phi_psi_from_angles(const AngleTriple& angles, double mu_norm, int d,
                           Covariance convention);

/// Survival-cell probabilities for the margin pruner under the unit-variance
/// isotropic convention (Sigma = I_d), via one-dimensional quadrature of the
/// conditional-CDF integrals:
///   2 p00 = P(z_p > -mu.w_p, z_g > -mu.w_g),
///   2 p01 = P(z_p <= -mu.w_p, z_g <= -mu.w_g),
/// where (z_p, z_g) are standard bivariate with correlation rho = w_p . w_g.
/// Requires unit-norm w_gen, w_prune; quadrature error <= 1e-6.
std::pair<double, double> pkl_integrals(const Weights& w_gen, const Weights& w_prune,
                                        const Eigen::VectorXd& mu);

}  // namespace collapse
