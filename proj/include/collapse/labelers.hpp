#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "collapse/rng.hpp"

namespace collapse {

/// Linear model weights (intercept fixed at 0).
using Weights = Eigen::VectorXd;

/// f_w(x) = (sign(x.w) + 1)/2 with ties (x.w = 0) resolved to 0.
/// Accepts a single feature vector (returns int) or a matrix with one
/// example per row (returns the label array).
template <typename Derived>
auto classify_linear(const Weights& w, const Eigen::MatrixBase<Derived>& x) {
  if constexpr (Derived::ColsAtCompileTime == 1) {
    if (w.size() != x.size()) throw std::invalid_argument("classify_linear: dimension mismatch");
    return w.dot(x) > 0.0 ? 1 : 0;
  } else {
    if (w.size() != x.cols()) throw std::invalid_argument("classify_linear: dimension mismatch");
    const Eigen::VectorXd margins = x * w;
    Eigen::ArrayXi labels(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) labels[i] = margins[i] > 0.0 ? 1 : 0;
    return labels;
  }
}

enum class LabelMode { Deterministic, SigmoidStochastic };

/// Synthesized labels y' from a linear generator: deterministic sign rule, or
/// y' ~ Bernoulli(sigmoid(x.w)).
Eigen::ArrayXi generate_labels(const Weights& generator, const Eigen::MatrixXd& x,
                               LabelMode mode, Seed seed = 0);

/// i.i.d. corruption channel: each label flipped with probability p.
Eigen::ArrayXi flip_channel(const Eigen::ArrayXi& y, double p, Seed seed);

inline double label_sign(int y01) { return y01 == 1 ? 1.0 : -1.0; }

Weights unit_axis(int d, int axis = 0);

/// Unit vector at the given angle from e1, rotated inside the (e1, e2) plane.
Weights vector_at_angle(int d, double theta);

double angle_between(const Weights& u, const Weights& v);

/// Monte-Carlo estimate of P(f_u(x) != f_v(x)) for x ~ N(0, I_d); the exact
/// value is angle(u, v) / pi.
double isotropic_disagreement(const Weights& u, const Weights& v, Eigen::Index n, Seed seed);

}  // namespace collapse
