#pragma once

#include <Eigen/Dense>
#include <optional>

#include "collapse/distributions.hpp"
#include "collapse/pruning.hpp"

namespace collapse {

struct TrainConfig {
  double lambda = 1e-3;   // ridge parameter, > 0
  double tol = 1e-8;      // gradient-norm threshold
  long max_iters = 200000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  void validate() const;
};

struct TrainedModel {
  Weights w;
  double objective = 0.0;
  double grad_norm = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Masked ridge-regularized BCE objective
///   L(w) = (1/N) sum_i q_i l(sigmoid(x_i . w), y'_i) + (lambda/2) ||w||^2,
/// with sigmoid outputs clamped away from {0,1} by 1e-12 before the logs.
double objective(const Weights& w, const PrunedDataset& data, double lambda);

Weights gradient(const Weights& w, const PrunedDataset& data, double lambda);

/// Full-batch gradient descent with Armijo backtracking; the objective is
/// non-increasing across accepted steps. Needs at least one survivor.
TrainedModel train(const PrunedDataset& data, const TrainConfig& config,
                   const Weights* init = nullptr);

struct MonteCarloAccuracy {
  double acc = 0.0;
  double se = 0.0;
  Eigen::Index n = 0;
};

/// Monte-Carlo agreement with the Bayes classifier of the mixture on fresh
/// test samples.
MonteCarloAccuracy test_accuracy(const Weights& w, const MixtureSpec& spec, Eigen::Index n_test,
                                 Seed seed);

/// Fraction of surviving examples whose prediction matches the clean label;
/// absent when the mask is empty.
std::optional<double> masked_train_accuracy(const Weights& w, const PrunedDataset& data);

/// Ordinary least squares on +-1 targets (generator training for the
/// finite-sample replication).
Weights fit_ols(const Eigen::MatrixXd& x, const Eigen::ArrayXi& y01);

}  // namespace collapse
