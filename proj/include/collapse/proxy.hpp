#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace collapse {

/// Similarity-scored selection: s in [0,1] generalizes the binary agreement
/// indicator 1[y' = y]; q is the keep-bit.
struct ScoredSelection {
  Eigen::VectorXd s;
  Eigen::ArrayXi q;
  Eigen::Index n() const { return s.size(); }
  void validate() const;  // nonempty, s in [0,1], q in {0,1}
};

/// p = 1 - E[s], clamped to [0,1].
double estimate_p(const ScoredSelection& data);

struct ProxyRates {
  std::optional<double> phi;  // E[q s] / (1 - p)
  std::optional<double> psi;  // E[q (1 - s)] / p
};

/// Plug-in generalized rates; a rate is absent when its conditioning mass
/// (1-p or p) vanishes. Computed as ratios of sums so the binary case agrees
/// bit-for-bit with the count-based rates.
ProxyRates estimate_phi_psi(const ScoredSelection& data);

/// p* = 1 / (1 + psi/phi) from the estimated rates; absent when undefined.
std::optional<double> proxy_pstar(const ScoredSelection& data);

/// Two-column CSV (s, q); one optional header line.
ScoredSelection load_scored_csv(const std::string& path);

}  // namespace collapse
