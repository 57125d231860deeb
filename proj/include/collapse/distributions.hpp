#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "collapse/rng.hpp"

namespace collapse {

/// Noise-scale convention for the Gaussian mixture.
///   UnitTrace:  E||x||^2 = ||mu||^2 + tr(Sigma) = 1 (high-dimensional
///               concentration regime; same/cross Gram limits a, b).
///   Simulation: x | y ~ N((2y-1) tau w*, I_d / d) (finite-sample setting).
enum class Covariance { UnitTrace, Simulation };

/// Cross-class Gram limit: b = -a (antipodal means) or b = 0 (orthogonal means).
enum class CrossClass { Opposite, Orthogonal };

/// Balanced two-class Gaussian mixture in R^d with isotropic noise.
/// The mean direction w* is the first coordinate axis; tau is the mean norm.
struct MixtureSpec {
  int dim = 0;
  double tau = 0.0;
  Covariance convention = Covariance::UnitTrace;
  CrossClass cross = CrossClass::Opposite;

  static MixtureSpec unit_trace(int d, double tau, CrossClass cross = CrossClass::Opposite);
  static MixtureSpec simulation(int d, double tau);

  /// Same-class Gram limit a = ||mu||^2.
  double a() const { return tau * tau; }
  /// Cross-class Gram limit, -a or 0.
  double b() const { return cross == CrossClass::Opposite ? -a() : 0.0; }
  double mu_norm() const { return tau; }

  /// Per-coordinate noise variance under the selected convention.
  double coord_var() const;
  /// Standard deviation of x . w for a unit vector w (projection noise scale).
  double proj_sd() const;

  Eigen::VectorXd mean_direction() const;  // w*
  Eigen::VectorXd mean_for_label(int y) const;
  /// Direction of the Bayes-optimal linear rule (w* for antipodal means).
  Eigen::VectorXd bayes_direction() const;

  /// Throws std::invalid_argument when the parameters violate the invariants
  /// (d >= 1, tau > 0, tau < 1 under UnitTrace, Orthogonal only with UnitTrace).
  void validate() const;
};

/// Struct-of-arrays sample: one example per row of x, labels in {0,1}.
struct MixtureData {
  Eigen::MatrixXd x;  // n x d
  Eigen::ArrayXi y;   // n
  Eigen::Index n() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
};

/// n i.i.d. draws from the mixture; labels Bernoulli(1/2). Deterministic
/// given (spec, n, seed).
MixtureData sample_mixture(const MixtureSpec& spec, Eigen::Index n, Seed seed);

/// Deviations of the empirical Gram structure from the concentration limits
/// (||x||^2 vs its expectation, pairwise dots vs a and b).
struct GramReport {
  double max_norm_dev = 0.0;
  double max_same_dev = 0.0;
  double max_cross_dev = 0.0;
  Eigen::Index same_pairs = 0;
  Eigen::Index cross_pairs = 0;
  bool flagged = false;   // some deviation exceeded tol
  bool partial = false;   // only one class present: cross (or same) entries missing
  double worst() const;
};

GramReport empirical_gram_check(const MixtureData& data, const MixtureSpec& spec, double tol);

/// Truncated Zipf input distribution with noisy labels over {1..M}:
/// p(x) proportional to x^(-beta) on {1..K}; y = f0(x) w.p. pi, else uniform
/// over {1..M} independent of x.
struct ZipfSpec {
  double beta = 2.0;
  int truncation = 1'000'000;  // K; tail mass < 1e-3 for beta >= 1.5
  int alphabet = 2;            // M
  double pi_clean = 1.0;
  /// Ground-truth labeler; empty means the default ((x-1) mod M) + 1.
  std::function<int(int)> truth;

  int f0(int x) const;
  void validate() const;
};

/// Precomputed pmf/cdf table for exact O(log K) sampling and closed-form
/// error evaluation. Immutable after construction; safe to share across threads.
class ZipfTable {
 public:
  explicit ZipfTable(ZipfSpec spec);
  const ZipfSpec& spec() const { return spec_; }
  double pmf(int x) const { return pmf_[static_cast<size_t>(x - 1)]; }
  /// Joint probability p(x, y).
  double joint(int x, int y) const;
  /// Inverse-CDF lookup for u in [0,1).
  int sample(double u) const;
  double total_pmf() const;

 private:
  ZipfSpec spec_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

struct ZipfData {
  Eigen::ArrayXi x;
  Eigen::ArrayXi y;
  Eigen::Index n() const { return x.size(); }
};

ZipfData sample_zipf_noisy(const ZipfSpec& spec, Eigen::Index t, Seed seed);
ZipfData sample_zipf_noisy(const ZipfTable& table, Eigen::Index t, Seed seed);

}  // namespace collapse
