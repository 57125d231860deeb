#pragma once

#include <utility>

#include "collapse/pruning.hpp"

namespace collapse {

/// Breakdown point p* = 1 / (1 + psi/phi). Requires phi > 0.
double breakdown_point(double phi, double psi);

/// Concentration thresholds for slack t in (0,1):
///   p-*(t) = (1-t) / (1-t + (1+t) psi/phi),
///   p+*(t) = (1+t) / (1+t + (1-t) psi/phi).
std::pair<double, double> threshold_pair(double phi, double psi, double t);

struct Thresholds {
  double p_star = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double slack = 0.0;
};

Thresholds thresholds(double phi, double psi, double t);

/// Gram regime of the data distribution: b = -a or b = 0.
enum class Regime { Symmetric, Skewed };

enum class FixedPointMode { Full, Simplified };

/// Solution of the reduced KKT system in the scaled duals
/// (Abar, Bbar, Cbar, Dbar) = gamma * (A, B, C, D).
struct FixedPoint {
  double a_bar = 0.5;
  double b_bar = 0.5;
  double c_bar = 0.5;
  double d_bar = 0.5;
  double residual = 0.0;  // max absolute defect of the defining equations
  long iterations = 0;
  bool converged = false;
  Regime regime = Regime::Symmetric;
  FixedPointMode mode = FixedPointMode::Simplified;
};

/// Damped fixed-point iteration (damping 0.5, start at (1/2,1/2,1/2,1/2))
/// until residual <= 1e-12 or 1e5 iterations. Simplified mode solves the
/// collapsed two-variable system and enforces Abar = 1 - Bbar, Cbar = 1 - Dbar
/// analytically. Non-convergence is reported (converged = false, residual kept)
/// rather than masked. Requires a in (0,1), b in {-a, 0}, gamma > 0.
FixedPoint solve_fixed_point(const SurvivalCounts& counts, double a, double b, double gamma,
                             FixedPointMode mode = FixedPointMode::Simplified);

/// Training-set accuracy representation evaluated at a fixed point:
/// (N11 1[Abar<1/2] + N00 1[Dbar<1/2] + N10 1[Bbar>1/2] + N01 1[Cbar>1/2]) / sum.
/// Throws when the mask is empty.
double acc_hat(const SurvivalCounts& counts, const FixedPoint& fp);

/// Symmetric: N10 + N01 < N11 + N00. Skewed: N10 < N11 and N01 < N00.
bool perfect_accuracy_condition(const SurvivalCounts& counts, Regime regime);

/// p psi / ((1-p) phi) < (1-t)/(1+t); algebraically equivalent to p < p-*(t).
bool concentration_condition(const PruneParams& params, double t);

}  // namespace collapse
