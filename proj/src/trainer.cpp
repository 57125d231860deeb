#include "collapse/trainer.hpp"

#include <cmath>
#include <stdexcept>

#include "collapse/labelers.hpp"

namespace collapse {

namespace {

constexpr double kProbClamp = 1e-12;  // keeps log() finite for extreme margins

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) { return 1.0 / (1.0 + (-z).exp()); }

struct LossTerms {
  Eigen::ArrayXd probs;      // clamped sigmoid outputs
  Eigen::ArrayXd residuals;  // q .* (sigmoid - y')
};

LossTerms forward(const Weights& w, const PrunedDataset& data) {
  LossTerms terms;
  terms.probs = sigmoid((data.x * w).array()).max(kProbClamp).min(1.0 - kProbClamp);
  terms.residuals = data.q.cast<double>() * (terms.probs - data.y_fake.cast<double>());
  return terms;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("TrainConfig: lambda must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("TrainConfig: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("TrainConfig: max_iters must be >= 1");
}

double objective(const Weights& w, const PrunedDataset& data, double lambda) {
  if (w.size() != data.x.cols()) throw std::invalid_argument("objective: dimension mismatch");
  const Eigen::ArrayXd probs =
      sigmoid((data.x * w).array()).max(kProbClamp).min(1.0 - kProbClamp);
  const Eigen::ArrayXd y = data.y_fake.cast<double>();
  const Eigen::ArrayXd losses = -y * probs.log() - (1.0 - y) * (1.0 - probs).log();
  const double n = static_cast<double>(data.n());
  return (data.q.cast<double>() * losses).sum() / n + 0.5 * lambda * w.squaredNorm();
}

Weights gradient(const Weights& w, const PrunedDataset& data, double lambda) {
  if (w.size() != data.x.cols()) throw std::invalid_argument("gradient: dimension mismatch");
  const LossTerms terms = forward(w, data);
  const double n = static_cast<double>(data.n());
  return data.x.transpose() * terms.residuals.matrix() / n + lambda * w;
}

TrainedModel train(const PrunedDataset& data, const TrainConfig& config, const Weights* init) {
  config.validate();
  if (data.survivors() < 1) throw std::invalid_argument("train: no surviving examples");
  if (init && init->size() != data.x.cols())
    throw std::invalid_argument("train: init dimension mismatch");

  const double n = static_cast<double>(data.n());
  const Eigen::ArrayXd q = data.q.cast<double>();
  const Eigen::ArrayXd y = data.y_fake.cast<double>();

  // Margins are cached and updated along the descent ray, so a line-search
  // trial costs vector work only; the two matrix passes per iteration are the
  // gradient and the ray direction.
  const auto masked_loss = [&](const Eigen::ArrayXd& margins) {
    const Eigen::ArrayXd probs = sigmoid(margins).max(kProbClamp).min(1.0 - kProbClamp);
    return (q * (-y * probs.log() - (1.0 - y) * (1.0 - probs).log())).sum() / n;
  };

  Weights w = init ? *init : Weights::Zero(data.x.cols());
  Eigen::ArrayXd margins = (data.x * w).array();
  double obj = masked_loss(margins) + 0.5 * config.lambda * w.squaredNorm();
  double step = 1.0;

  TrainedModel model;
  Weights grad(w.size());
  double grad_norm = 0.0;
  long iter = 0;
  for (; iter < config.max_iters; ++iter) {
    const Eigen::ArrayXd probs = sigmoid(margins).max(kProbClamp).min(1.0 - kProbClamp);
    grad.noalias() = data.x.transpose() * (q * (probs - y)).matrix() / n;
    grad += config.lambda * w;
    const double grad_sq = grad.squaredNorm();
    grad_norm = std::sqrt(grad_sq);
    if (grad_norm <= config.tol) break;

    const Eigen::ArrayXd ray = (data.x * grad).array();
    const double w_dot_g = w.dot(grad);

    // Armijo backtracking; the accepted step never increases the objective.
    step = std::min(step * 2.0, 1e8);
    bool accepted = false;
    while (step >= 1e-18) {
      const Eigen::ArrayXd trial = margins - step * ray;
      const double ridge =
          0.5 * config.lambda * (w.squaredNorm() - 2.0 * step * w_dot_g + step * step * grad_sq);
      const double trial_obj = masked_loss(trial) + ridge;
      if (trial_obj <= obj - config.armijo_c * step * grad_sq) {
        w -= step * grad;
        margins = trial;
        obj = trial_obj;
        accepted = true;
        break;
      }
      step *= config.backtrack;
    }
    if (!accepted) break;  // step size exhausted at machine precision
  }

  model.w = std::move(w);
  model.objective = obj;
  model.grad_norm = grad_norm;
  model.iterations = iter;
  model.converged = grad_norm <= config.tol;
  return model;
}

MonteCarloAccuracy test_accuracy(const Weights& w, const MixtureSpec& spec, Eigen::Index n_test,
                                 Seed seed) {
  if (n_test < 1) throw std::invalid_argument("test_accuracy: n_test must be >= 1");
  if (w.size() != spec.dim) throw std::invalid_argument("test_accuracy: dimension mismatch");

  const MixtureData data = sample_mixture(spec, n_test, seed);
  const Eigen::ArrayXi bayes = classify_linear(spec.bayes_direction(), data.x);
  const Eigen::ArrayXi preds = classify_linear(w, data.x);
  const double acc =
      static_cast<double>((bayes == preds).count()) / static_cast<double>(n_test);
  MonteCarloAccuracy out;
  out.acc = acc;
  out.se = std::sqrt(std::max(0.0, acc * (1.0 - acc)) / static_cast<double>(n_test));
  out.n = n_test;
  return out;
}

std::optional<double> masked_train_accuracy(const Weights& w, const PrunedDataset& data) {
  if (data.survivors() == 0) return std::nullopt;
  const Eigen::ArrayXi preds = classify_linear(w, data.x);
  long hits = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i)
    if (data.q[i] == 1 && preds[i] == data.y_true[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(data.survivors());
}

Weights fit_ols(const Eigen::MatrixXd& x, const Eigen::ArrayXi& y01) {
  if (x.rows() != y01.size()) throw std::invalid_argument("fit_ols: length mismatch");
  const Eigen::VectorXd targets = (2 * y01 - 1).cast<double>();
  Eigen::MatrixXd normal = x.transpose() * x;
  normal.diagonal().array() += 1e-10;  // jitter for rank-deficient designs
  return normal.ldlt().solve(x.transpose() * targets);
}

}  // namespace collapse
