#include "collapse/labelers.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

Eigen::ArrayXi generate_labels(const Weights& generator, const Eigen::MatrixXd& x,
                               LabelMode mode, Seed seed) {
  if (generator.size() != x.cols())
    throw std::invalid_argument("generate_labels: dimension mismatch");
  if (mode == LabelMode::Deterministic) return classify_linear(generator, x);

  const Eigen::VectorXd margins = x * generator;
  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::ArrayXi labels(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double prob = 1.0 / (1.0 + std::exp(-margins[i]));
    labels[i] = unit(engine) < prob ? 1 : 0;
  }
  return labels;
}

Eigen::ArrayXi flip_channel(const Eigen::ArrayXi& y, double p, Seed seed) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("flip_channel: p must lie in [0,1)");
  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::ArrayXi flipped(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    flipped[i] = unit(engine) < p ? 1 - y[i] : y[i];
  return flipped;
}

Weights unit_axis(int d, int axis) {
  Weights w = Weights::Zero(d);
  w[axis] = 1.0;
  return w;
}

Weights vector_at_angle(int d, double theta) {
  if (d < 2 && theta != 0.0)
    throw std::invalid_argument("vector_at_angle: need d >= 2 for a nonzero angle");
  Weights w = Weights::Zero(d);
  w[0] = std::cos(theta);
  if (d >= 2) w[1] = std::sin(theta);
  return w;
}

double angle_between(const Weights& u, const Weights& v) {
  const double c = u.dot(v) / (u.norm() * v.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double isotropic_disagreement(const Weights& u, const Weights& v, Eigen::Index n, Seed seed) {
  if (u.size() != v.size())
    throw std::invalid_argument("isotropic_disagreement: dimension mismatch");
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(u.size());
  Eigen::Index disagreements = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = gauss(engine);
    if ((u.dot(x) > 0.0) != (v.dot(x) > 0.0)) ++disagreements;
  }
  return static_cast<double>(disagreements) / static_cast<double>(n);
}

}  // namespace collapse
