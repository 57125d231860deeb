#include "collapse/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace collapse {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr double kTargetResidual = 1e-12;
constexpr long kMaxIterations = 100000;
constexpr double kDamping = 0.5;

Regime regime_from(double a, double b) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("solve_fixed_point: a must lie in (0,1)");
  if (b == 0.0) return Regime::Skewed;
  if (std::abs(b + a) <= 1e-12 * std::max(1.0, a)) return Regime::Symmetric;
  throw std::invalid_argument("solve_fixed_point: b must be -a or 0");
}

}  // namespace

double breakdown_point(double phi, double psi) {
  if (!(phi > 0.0)) throw std::invalid_argument("breakdown_point: phi must be > 0");
  if (!(psi >= 0.0)) throw std::invalid_argument("breakdown_point: psi must be >= 0");
  return 1.0 / (1.0 + psi / phi);
}

std::pair<double, double> threshold_pair(double phi, double psi, double t) {
  if (!(phi > 0.0)) throw std::invalid_argument("threshold_pair: phi must be > 0");
  if (!(psi >= 0.0)) throw std::invalid_argument("threshold_pair: psi must be >= 0");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("threshold_pair: t must lie in (0,1)");
  const double ratio = psi / phi;
  const double lower = (1.0 - t) / (1.0 - t + (1.0 + t) * ratio);
  const double upper = (1.0 + t) / (1.0 + t + (1.0 - t) * ratio);
  return {lower, upper};
}

Thresholds thresholds(double phi, double psi, double t) {
  const auto [lower, upper] = threshold_pair(phi, psi, t);
  return Thresholds{breakdown_point(phi, psi), lower, upper, t};
}

FixedPoint solve_fixed_point(const SurvivalCounts& counts, double a, double b, double gamma,
                             FixedPointMode mode) {
  const Regime regime = regime_from(a, b);
  if (!(gamma > 0.0)) throw std::invalid_argument("solve_fixed_point: gamma must be > 0");
  if (counts.n11 < 0 || counts.n10 < 0 || counts.n01 < 0 || counts.n00 < 0)
    throw std::invalid_argument("solve_fixed_point: counts must be non-negative");

  const double n11 = static_cast<double>(counts.n11);
  const double n10 = static_cast<double>(counts.n10);
  const double n01 = static_cast<double>(counts.n01);
  const double n00 = static_cast<double>(counts.n00);
  const double r = 1.0 - a;

  FixedPoint fp;
  fp.regime = regime;
  fp.mode = mode;

  if (mode == FixedPointMode::Simplified) {
    if (regime == Regime::Symmetric) {
      // b = -a makes Dbar = 1 - Bbar an algebraic identity, collapsing the
      // system to Bbar = sigma(a (N11 + N00 - (sum N) Bbar) / gamma).
      const double total = n11 + n10 + n01 + n00;
      const auto eval = [&](double bv) {
        return sigmoid(a * (n11 + n00 - total * bv) / gamma);
      };
      double bb = 0.5;
      long iter = 0;
      double residual = 1.0;
      for (; iter < kMaxIterations; ++iter) {
        const double fb = eval(bb);
        residual = std::abs(fb - bb);
        if (residual <= kTargetResidual) break;
        bb = (1.0 - kDamping) * bb + kDamping * fb;
      }
      fp.b_bar = fp.c_bar = bb;
      fp.a_bar = fp.d_bar = 1.0 - bb;
      fp.residual = std::abs(eval(bb) - bb);
      fp.iterations = iter;
      fp.converged = fp.residual <= kTargetResidual;
      return fp;
    }
    // Skewed case b = 0: the collapsed equations decouple per class,
    //   Bbar = sigma(a (N11 - (N11 + N10) Bbar) / gamma)
    //   Dbar = sigma(a (N01 - (N01 + N00) Dbar) / gamma)
    const auto eval = [&](double bv, double dv) {
      return std::pair<double, double>{sigmoid(a * (n11 - (n11 + n10) * bv) / gamma),
                                       sigmoid(a * (n01 - (n01 + n00) * dv) / gamma)};
    };
    double bb = 0.5, dd = 0.5;
    double residual = 1.0;
    long iter = 0;
    for (; iter < kMaxIterations; ++iter) {
      const auto [fb, fd] = eval(bb, dd);
      residual = std::max(std::abs(fb - bb), std::abs(fd - dd));
      if (residual <= kTargetResidual) break;
      bb = (1.0 - kDamping) * bb + kDamping * fb;
      dd = (1.0 - kDamping) * dd + kDamping * fd;
    }
    const auto [fb, fd] = eval(bb, dd);
    fp.b_bar = bb;
    fp.d_bar = dd;
    fp.a_bar = 1.0 - bb;
    fp.c_bar = 1.0 - dd;
    fp.residual = std::max(std::abs(fb - bb), std::abs(fd - dd));
    fp.iterations = iter;
    fp.converged = fp.residual <= kTargetResidual;
    return fp;
  }

  // Full system in the unscaled duals (A, B, C, D) = (Abar, Bbar, Cbar, Dbar)/gamma:
  //   gamma A = sigma(-(a N11 A - a N10 B + b N01 C - b N00 D) - R A), ...
  double av = 0.5 / gamma, bv = 0.5 / gamma, cv = 0.5 / gamma, dv = 0.5 / gamma;
  const auto eval = [&](double A, double B, double C, double D) {
    const double s = a * n11 * A - a * n10 * B + b * n01 * C - b * n00 * D;
    const double t = b * n11 * A - b * n10 * B + a * n01 * C - a * n00 * D;
    return std::array<double, 4>{sigmoid(-s - r * A) / gamma, sigmoid(s - r * B) / gamma,
                                 sigmoid(-t - r * C) / gamma, sigmoid(t - r * D) / gamma};
  };
  const auto residual_of = [&](double A, double B, double C, double D) {
    const auto f = eval(A, B, C, D);
    return std::max({std::abs(gamma * A - gamma * f[0]), std::abs(gamma * B - gamma * f[1]),
                     std::abs(gamma * C - gamma * f[2]), std::abs(gamma * D - gamma * f[3])});
  };
  double residual = 1.0;
  long iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    const auto f = eval(av, bv, cv, dv);
    residual = std::max({std::abs(gamma * (f[0] - av)), std::abs(gamma * (f[1] - bv)),
                         std::abs(gamma * (f[2] - cv)), std::abs(gamma * (f[3] - dv))});
    if (residual <= kTargetResidual) break;
    av = (1.0 - kDamping) * av + kDamping * f[0];
    bv = (1.0 - kDamping) * bv + kDamping * f[1];
    cv = (1.0 - kDamping) * cv + kDamping * f[2];
    dv = (1.0 - kDamping) * dv + kDamping * f[3];
  }
  fp.a_bar = gamma * av;
  fp.b_bar = gamma * bv;
  fp.c_bar = gamma * cv;
  fp.d_bar = gamma * dv;
  fp.residual = residual_of(av, bv, cv, dv);
  fp.iterations = iter;
  fp.converged = fp.residual <= kTargetResidual;
  return fp;
}

double acc_hat(const SurvivalCounts& counts, const FixedPoint& fp) {
  const long total = counts.total();
  if (total == 0) throw std::invalid_argument("acc_hat: empty mask");
  const double hits = static_cast<double>(counts.n11) * (fp.a_bar < 0.5 ? 1.0 : 0.0) +
                      static_cast<double>(counts.n00) * (fp.d_bar < 0.5 ? 1.0 : 0.0) +
                      static_cast<double>(counts.n10) * (fp.b_bar > 0.5 ? 1.0 : 0.0) +
                      static_cast<double>(counts.n01) * (fp.c_bar > 0.5 ? 1.0 : 0.0);
  return hits / static_cast<double>(total);
}

bool perfect_accuracy_condition(const SurvivalCounts& counts, Regime regime) {
  if (regime == Regime::Symmetric) return counts.n10 + counts.n01 < counts.n11 + counts.n00;
  return counts.n10 < counts.n11 && counts.n01 < counts.n00;
}

bool concentration_condition(const PruneParams& params, double t) {
  params.validate();
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("concentration_condition: t must lie in (0,1)");
  const double lhs = params.p * params.psi / ((1.0 - params.p) * params.phi);
  return lhs < (1.0 - t) / (1.0 + t);
}

}  // namespace collapse
