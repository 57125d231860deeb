#pragma once

#include <Eigen/Dense>
#include <optional>

#include "collapse/labelers.hpp"
#include "collapse/rng.hpp"

namespace collapse {

/// Symmetric verification channel: keep a correctly-labeled example w.p. phi,
/// a mislabeled one w.p. psi; p is the corruption level P(y' != y).
struct PruneParams {
  double phi = 1.0;
  double psi = 1.0;
  double p = 0.0;
  void validate() const;  // 0 < phi <= 1, 0 <= psi <= 1, 0 <= p < 1
};

/// Survival counters N_kl: true label k, fake label l, kept.
struct SurvivalCounts {
  long n11 = 0;
  long n10 = 0;
  long n01 = 0;
  long n00 = 0;
  long total() const { return n11 + n10 + n01 + n00; }
  long correct() const { return n11 + n00; }
  long wrong() const { return n10 + n01; }
  static SurvivalCounts tally(const Eigen::ArrayXi& y_true, const Eigen::ArrayXi& y_fake,
                              const Eigen::ArrayXi& q);
  bool operator==(const SurvivalCounts&) const = default;
};

/// A labeled dataset plus its keep-mask. counts always equals a recount of
/// (y_true, y_fake, q).
struct PrunedDataset {
  Eigen::MatrixXd x;
  Eigen::ArrayXi y_true;
  Eigen::ArrayXi y_fake;
  Eigen::ArrayXi q;
  SurvivalCounts counts;

  Eigen::Index n() const { return x.rows(); }
  long survivors() const { return counts.total(); }
  bool counts_consistent() const;
};

/// Independent Bernoulli keep-bits: phi when y' = y, psi otherwise.
PrunedDataset prune_phi_psi(Eigen::MatrixXd x, Eigen::ArrayXi y_true, Eigen::ArrayXi y_fake,
                            double phi, double psi, Seed seed);

/// Margin rule: keep iff the pruner's sign agrees with the fake label,
/// q_i = 1[(2 y'_i - 1)(x_i . w_prune) > 0]. Ties dropped.
PrunedDataset prune_margin(Eigen::MatrixXd x, Eigen::ArrayXi y_true, Eigen::ArrayXi y_fake,
                           const Weights& pruner);

/// Empirical plug-in rates. A rate whose conditioning event is empty is
/// absent rather than fabricated.
struct RateEstimate {
  std::optional<double> phi;    // kept-correct / correct
  std::optional<double> psi;    // kept-wrong / wrong
  std::optional<double> p;      // wrong / total
  std::optional<double> phi1, phi0, psi10, psi01;  // per-cell rates
};

RateEstimate measure_phi_psi(const PrunedDataset& data);

/// Four-cell survival probabilities p_kl = P(y=k, y'=l, q=1).
struct CellProbs {
  double p11 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p00 = 0.0;
};

/// p00 = p11 = (1-p) phi / 2, p01 = p10 = p psi / 2.
CellProbs phi_psi_to_pkl(const PruneParams& params);

/// Inverse of phi_psi_to_pkl at a known corruption level p. Throws when the
/// cells are inconsistent (p = 0 with off-diagonal mass).
PruneParams pkl_to_phi_psi(const CellProbs& cells, double p);

}  // namespace collapse
