#include "collapse/pruning.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

void PruneParams::validate() const {
  if (!(phi > 0.0 && phi <= 1.0))
    throw std::invalid_argument("PruneParams: phi must lie in (0,1]");
  if (!(psi >= 0.0 && psi <= 1.0))
    throw std::invalid_argument("PruneParams: psi must lie in [0,1]");
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("PruneParams: p must lie in [0,1)");
}

SurvivalCounts SurvivalCounts::tally(const Eigen::ArrayXi& y_true, const Eigen::ArrayXi& y_fake,
                                     const Eigen::ArrayXi& q) {
  if (y_true.size() != y_fake.size() || y_true.size() != q.size())
    throw std::invalid_argument("SurvivalCounts: length mismatch");
  SurvivalCounts c;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q[i] == 0) continue;
    if (y_true[i] == 1)
      (y_fake[i] == 1 ? c.n11 : c.n10)++;
    else
      (y_fake[i] == 1 ? c.n01 : c.n00)++;
  }
  return c;
}

bool PrunedDataset::counts_consistent() const {
  return SurvivalCounts::tally(y_true, y_fake, q) == counts;
}

namespace {

PrunedDataset finish(Eigen::MatrixXd x, Eigen::ArrayXi y_true, Eigen::ArrayXi y_fake,
                     Eigen::ArrayXi q) {
  PrunedDataset data;
  data.counts = SurvivalCounts::tally(y_true, y_fake, q);
  data.x = std::move(x);
  data.y_true = std::move(y_true);
  data.y_fake = std::move(y_fake);
  data.q = std::move(q);
  return data;
}

}  // namespace

PrunedDataset prune_phi_psi(Eigen::MatrixXd x, Eigen::ArrayXi y_true, Eigen::ArrayXi y_fake,
                            double phi, double psi, Seed seed) {
  PruneParams{phi, psi, 0.0}.validate();  // phi = 0 (empty-keep) rejected here
  if (x.rows() != y_true.size() || x.rows() != y_fake.size())
    throw std::invalid_argument("prune_phi_psi: length mismatch");

  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::ArrayXi q(y_true.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double keep = (y_true[i] == y_fake[i]) ? phi : psi;
    q[i] = unit(engine) < keep ? 1 : 0;
  }
  return finish(std::move(x), std::move(y_true), std::move(y_fake), std::move(q));
}

PrunedDataset prune_margin(Eigen::MatrixXd x, Eigen::ArrayXi y_true, Eigen::ArrayXi y_fake,
                           const Weights& pruner) {
  if (pruner.size() != x.cols())
    throw std::invalid_argument("prune_margin: dimension mismatch");
  if (pruner.norm() == 0.0)
    throw std::invalid_argument("prune_margin: zero pruner vector");
  if (x.rows() != y_true.size() || x.rows() != y_fake.size())
    throw std::invalid_argument("prune_margin: length mismatch");

  const Eigen::VectorXd margins = x * pruner;
  Eigen::ArrayXi q(y_true.size());
  for (Eigen::Index i = 0; i < q.size(); ++i)
    q[i] = label_sign(y_fake[i]) * margins[i] > 0.0 ? 1 : 0;  // ties dropped
  return finish(std::move(x), std::move(y_true), std::move(y_fake), std::move(q));
}

RateEstimate measure_phi_psi(const PrunedDataset& data) {
  long correct = 0, wrong = 0;
  long c11 = 0, c00 = 0, c10 = 0, c01 = 0;  // pair counts per (true, fake) cell
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (data.y_true[i] == data.y_fake[i]) {
      ++correct;
      (data.y_true[i] == 1 ? c11 : c00)++;
    } else {
      ++wrong;
      (data.y_true[i] == 1 ? c10 : c01)++;
    }
  }

  const auto ratio = [](long num, long den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };

  RateEstimate est;
  est.phi = ratio(data.counts.correct(), correct);
  est.psi = ratio(data.counts.wrong(), wrong);
  est.p = ratio(wrong, correct + wrong);
  est.phi1 = ratio(data.counts.n11, c11);
  est.phi0 = ratio(data.counts.n00, c00);
  est.psi10 = ratio(data.counts.n10, c10);
  est.psi01 = ratio(data.counts.n01, c01);
  return est;
}

CellProbs phi_psi_to_pkl(const PruneParams& params) {
  params.validate();
  CellProbs cells;
  cells.p11 = cells.p00 = (1.0 - params.p) * params.phi / 2.0;
  cells.p10 = cells.p01 = params.p * params.psi / 2.0;
  return cells;
}

PruneParams pkl_to_phi_psi(const CellProbs& cells, double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("pkl_to_phi_psi: p must lie in [0,1)");
  if (p == 0.0 && (cells.p01 > 0.0 || cells.p10 > 0.0))
    throw std::invalid_argument("pkl_to_phi_psi: off-diagonal mass with p = 0");
  PruneParams params;
  params.p = p;
  params.phi = 2.0 * cells.p00 / (1.0 - p);
  params.psi = p > 0.0 ? 2.0 * cells.p01 / p : 0.0;
  params.validate();
  return params;
}

}  // namespace collapse
