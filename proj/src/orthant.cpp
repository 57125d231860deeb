#include "collapse/orthant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace collapse {

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double phi_pdf(double x) {
  static const double kNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return kNorm * std::exp(-0.5 * x * x);
}

namespace {

constexpr int kGaussNodes = 128;
constexpr double kTailCut = 9.0;  // Phi(-9) ~ 1e-19, below every stated tolerance

struct GaussRule {
  double node[kGaussNodes];
  double weight[kGaussNodes];
};

// Legendre-Gauss nodes/weights on [-1,1] by Newton iteration on P_n.
GaussRule make_gauss_rule() {
  GaussRule rule{};
  const int n = kGaussNodes;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.node[i] = -x;
    rule.node[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weight[i] = w;
    rule.weight[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

template <class F>
double gauss_panel(const F& f, double lo, double hi) {
  const GaussRule& rule = gauss_rule();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < kGaussNodes; ++i) sum += rule.weight[i] * f(mid + half * rule.node[i]);
  return half * sum;
}

// Composite quadrature over [lo, hi]. When the integrand has a sigmoid
// transition of width `scale` centred at `center`, panels refine
// geometrically around it so 128 nodes per panel resolve the feature.
template <class F>
double gauss_integrate(const F& f, double lo, double hi, double center, double scale) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  if (scale < 0.25 * (hi - lo) && std::isfinite(center)) {
    for (double w = 4.0 * scale; true; w *= 2.0) {
      const double left = center - w;
      const double right = center + w;
      if (left > lo && left < hi) cuts.push_back(left);
      if (right > lo && right < hi) cuts.push_back(right);
      if (left <= lo && right >= hi) break;
      if (w > 2.0 * (hi - lo)) break;
    }
    if (center > lo && center < hi) cuts.push_back(center);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) total += gauss_panel(f, cuts[i], cuts[i + 1]);
  return total;
}

constexpr double kDegenerateRho = 1.0 - 1e-15;

}  // namespace

double phi2_cdf(double c1, double c2, double rho) {
  if (!(std::isfinite(c1) && std::isfinite(c2)))
    throw std::invalid_argument("phi2_cdf: thresholds must be finite");
  if (rho >= kDegenerateRho) return phi_cdf(std::min(c1, c2));
  if (rho <= -kDegenerateRho) return std::max(0.0, phi_cdf(c1) + phi_cdf(c2) - 1.0);

  // P(X <= c1, Y <= c2) = int_{-inf}^{c1} Phi((c2 - rho u)/Delta) phi(u) du.
  const double delta = std::sqrt(1.0 - rho * rho);
  const double hi = std::min(c1, kTailCut);
  const double lo = -kTailCut;
  if (hi <= lo) return 0.0;

  const double center = rho != 0.0 ? c2 / rho : std::numeric_limits<double>::infinity();
  const double scale = rho != 0.0 ? delta / std::abs(rho) : std::numeric_limits<double>::infinity();
  const double value = gauss_integrate(
      [&](double u) { return phi_cdf((c2 - rho * u) / delta) * phi_pdf(u); }, lo, hi, center,
      scale);
  return std::clamp(value, 0.0, 1.0);
}

bool AngleTriple::consistent(double tol) const {
  const double c = std::cos(theta);
  return c >= std::cos(theta_gen + theta_prune) - tol &&
         c <= std::cos(theta_gen - theta_prune) + tol;
}

void AngleTriple::validate() const {
  const auto in_range = [](double a) { return a >= 0.0 && a <= std::numbers::pi; };
  if (!in_range(theta_gen) || !in_range(theta_prune) || !in_range(theta))
    throw std::invalid_argument("AngleTriple: angles must lie in [0, pi]");
  if (!consistent())
    throw std::invalid_argument("AngleTriple: no vector configuration realizes these angles");
}

std::pair<Weights, Weights> realize_angles(const AngleTriple& angles, int d) {
  angles.validate();
  if (d < 3) throw std::invalid_argument("realize_angles: need d >= 3");
  Weights w_gen = Weights::Zero(d);
  w_gen[0] = std::cos(angles.theta_gen);
  w_gen[1] = std::sin(angles.theta_gen);

  const double sg = std::sin(angles.theta_gen);
  const double sp = std::sin(angles.theta_prune);
  double cos_azimuth = 1.0;
  if (sg > 1e-12 && sp > 1e-12)
    cos_azimuth = (std::cos(angles.theta) - std::cos(angles.theta_prune) * std::cos(angles.theta_gen)) / (sp * sg);
  cos_azimuth = std::clamp(cos_azimuth, -1.0, 1.0);
  const double sin_azimuth = std::sqrt(std::max(0.0, 1.0 - cos_azimuth * cos_azimuth));

  Weights w_prune = Weights::Zero(d);
  w_prune[0] = std::cos(angles.theta_prune);
  w_prune[1] = sp * cos_azimuth;
  w_prune[2] = sp * sin_azimuth;
  return {w_gen, w_prune};
}

PhiPsi phi_psi_from_angles(const AngleTriple& angles, double mu_norm, int d,
                           Covariance convention) {
  angles.validate();
  if (!(mu_norm > 0.0)) throw std::invalid_argument("phi_psi_from_angles: mu_norm must be > 0");
  if (convention == Covariance::UnitTrace && !(mu_norm < 1.0))
    throw std::invalid_argument("phi_psi_from_angles: unit-trace needs mu_norm < 1");
  if (d < 1) throw std::invalid_argument("phi_psi_from_angles: d must be >= 1");

  const double proj_sd = convention == Covariance::UnitTrace
                             ? std::sqrt((1.0 - mu_norm * mu_norm) / d)
                             : std::sqrt(1.0 / d);
  const double c1 = -mu_norm * std::cos(angles.theta_prune) / proj_sd;
  const double c2 = -mu_norm * std::cos(angles.theta_gen) / proj_sd;
  const double rho = std::clamp(std::cos(angles.theta), -1.0, 1.0);

  const double f1 = phi_cdf(c1);
  const double f2 = phi_cdf(c2);
  const double f12 = phi2_cdf(c1, c2, rho);

  PhiPsi out;
  if (f2 <= 0.0) {
    // psi conditions on an event of vanishing mass; report the limiting rate.
    const double delta = std::sqrt(std::max(1e-300, 1.0 - rho * rho));
    out.psi = std::abs(rho) >= kDegenerateRho ? (rho > 0.0 ? 1.0 : 0.0)
                                              : phi_cdf((c1 - rho * c2) / delta);
  } else {
    out.psi = f12 / f2;
  }
  if (f2 >= 1.0) {
    const double delta = std::sqrt(std::max(1e-300, 1.0 - rho * rho));
    out.phi = std::abs(rho) >= kDegenerateRho ? (rho > 0.0 ? 1.0 : 0.0)
                                              : phi_cdf((rho * c2 - c1) / delta);
  } else {
    out.phi = (1.0 - f1 - f2 + f12) / (1.0 - f2);
  }
  out.phi = std::clamp(out.phi, 0.0, 1.0);
  out.psi = std::clamp(out.psi, 0.0, 1.0);
  return out;
}

std::pair<double, double> pkl_integrals(const Weights& w_gen, const Weights& w_prune,
                                        const Eigen::VectorXd& mu) {
  if (w_gen.size() != w_prune.size() || w_gen.size() != mu.size())
    throw std::invalid_argument("pkl_integrals: dimension mismatch");
  if (std::abs(w_gen.norm() - 1.0) > 1e-9 || std::abs(w_prune.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("pkl_integrals: generator and pruner must be unit-norm");

  const double rho = std::clamp(w_prune.dot(w_gen), -1.0, 1.0);
  const double m_g = mu.dot(w_gen);
  const double m_p = mu.dot(w_prune);

  if (std::abs(rho) >= kDegenerateRho) {
    double p00, p01;
    if (rho > 0.0) {
      // z_p = z_g: a single Gaussian crossing both thresholds.
      p00 = phi_cdf(std::min(m_p, m_g)) / 2.0;
      p01 = phi_cdf(std::min(-m_p, -m_g)) / 2.0;
    } else {
      p00 = std::max(0.0, phi_cdf(m_p) - phi_cdf(-m_g)) / 2.0;
      p01 = std::max(0.0, phi_cdf(-m_p) + phi_cdf(-m_g) - 1.0) / 2.0;
    }
    return {p00, p01};
  }

  const double delta = std::sqrt(1.0 - rho * rho);
  const double center = rho != 0.0 ? -m_p / rho : std::numeric_limits<double>::infinity();
  const double scale = rho != 0.0 ? delta / std::abs(rho) : std::numeric_limits<double>::infinity();

  // 2 p00 = P(z_p > -m_p, z_g > -m_g), conditioning on z_g = u:
  const double two_p00 = gauss_integrate(
      [&](double u) { return phi_cdf((rho * u + m_p) / delta) * phi_pdf(u); },
      std::max(-m_g, -kTailCut), kTailCut, center, scale);
  // 2 p01 = P(z_p <= -m_p, z_g <= -m_g):
  const double two_p01 = gauss_integrate(
      [&](double u) { return phi_cdf((-m_p - rho * u) / delta) * phi_pdf(u); }, -kTailCut,
      std::min(-m_g, kTailCut), center, scale);

  return {std::clamp(two_p00 / 2.0, 0.0, 0.5), std::clamp(two_p01 / 2.0, 0.0, 0.5)};
}

}  // namespace collapse
