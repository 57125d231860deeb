#include "collapse/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace collapse {

MixtureSpec MixtureSpec::unit_trace(int d, double tau, CrossClass cross) {
  MixtureSpec spec{d, tau, Covariance::UnitTrace, cross};
  spec.validate();
  return spec;
}

MixtureSpec MixtureSpec::simulation(int d, double tau) {
  MixtureSpec spec{d, tau, Covariance::Simulation, CrossClass::Opposite};
  spec.validate();
  return spec;
}

void MixtureSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("MixtureSpec: dimension must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("MixtureSpec: tau must be > 0");
  if (convention == Covariance::UnitTrace && !(tau < 1.0))
    throw std::invalid_argument("MixtureSpec: unit-trace convention needs tau < 1");
  if (cross == CrossClass::Orthogonal) {
    if (convention != Covariance::UnitTrace)
      throw std::invalid_argument("MixtureSpec: orthogonal means only under unit-trace");
    if (dim < 2) throw std::invalid_argument("MixtureSpec: orthogonal means need d >= 2");
  }
}

double MixtureSpec::coord_var() const {
  if (convention == Covariance::UnitTrace) return (1.0 - tau * tau) / dim;
  return 1.0 / dim;
}

double MixtureSpec::proj_sd() const { return std::sqrt(coord_var()); }

Eigen::VectorXd MixtureSpec::mean_direction() const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  w[0] = 1.0;
  return w;
}

Eigen::VectorXd MixtureSpec::mean_for_label(int y) const {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
  if (cross == CrossClass::Opposite) {
    mu[0] = (y == 1 ? tau : -tau);
  } else {
    mu[y == 1 ? 0 : 1] = tau;
  }
  return mu;
}

Eigen::VectorXd MixtureSpec::bayes_direction() const {
  if (cross == CrossClass::Opposite) return mean_direction();
  // Equal covariances: the optimal rule separates along mu_1 - mu_0.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  w[0] = 1.0 / std::numbers::sqrt2;
  w[1] = -1.0 / std::numbers::sqrt2;
  return w;
}

MixtureData sample_mixture(const MixtureSpec& spec, Eigen::Index n, Seed seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_mixture: n must be >= 1");

  auto engine = make_engine(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd = spec.proj_sd();

  MixtureData data;
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) data.y[i] = coin(engine) ? 1 : 0;

  data.x.resize(n, spec.dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < spec.dim; ++j) data.x(i, j) = sd * gauss(engine);

  if (spec.cross == CrossClass::Opposite) {
    for (Eigen::Index i = 0; i < n; ++i)
      data.x(i, 0) += (data.y[i] == 1 ? spec.tau : -spec.tau);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) data.x(i, data.y[i] == 1 ? 0 : 1) += spec.tau;
  }
  return data;
}

double GramReport::worst() const {
  return std::max({max_norm_dev, max_same_dev, max_cross_dev});
}

GramReport empirical_gram_check(const MixtureData& data, const MixtureSpec& spec, double tol) {
  const Eigen::Index n = data.n();
  if (n < 2) throw std::invalid_argument("empirical_gram_check: need >= 2 samples");

  const double expected_norm =
      spec.convention == Covariance::UnitTrace ? 1.0 : 1.0 + spec.tau * spec.tau;
  const double a = spec.a();
  const double b = spec.b();

  GramReport report;
  const Eigen::MatrixXd gram = data.x * data.x.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    report.max_norm_dev = std::max(report.max_norm_dev, std::abs(gram(i, i) - expected_norm));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (data.y[i] == data.y[j]) {
        report.max_same_dev = std::max(report.max_same_dev, std::abs(gram(i, j) - a));
        ++report.same_pairs;
      } else {
        report.max_cross_dev = std::max(report.max_cross_dev, std::abs(gram(i, j) - b));
        ++report.cross_pairs;
      }
    }
  }
  report.partial = (report.same_pairs == 0 || report.cross_pairs == 0);
  report.flagged = report.worst() > tol;
  return report;
}

int ZipfSpec::f0(int x) const {
  if (truth) return truth(x);
  return (x - 1) % alphabet + 1;
}

void ZipfSpec::validate() const {
  if (!(beta > 1.0)) throw std::invalid_argument("ZipfSpec: beta must be > 1");
  if (truncation < 1) throw std::invalid_argument("ZipfSpec: truncation K must be >= 1");
  if (alphabet < 2) throw std::invalid_argument("ZipfSpec: alphabet M must be >= 2");
  if (!(pi_clean >= 0.0 && pi_clean <= 1.0))
    throw std::invalid_argument("ZipfSpec: pi must lie in [0,1]");
}

ZipfTable::ZipfTable(ZipfSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const size_t k = static_cast<size_t>(spec_.truncation);
  pmf_.resize(k);
  cdf_.resize(k);
  double total = 0.0;
  for (size_t i = 0; i < k; ++i) {
    pmf_[i] = std::pow(static_cast<double>(i + 1), -spec_.beta);
    total += pmf_[i];
  }
  double running = 0.0;
  for (size_t i = 0; i < k; ++i) {
    pmf_[i] /= total;
    running += pmf_[i];
    cdf_[i] = running;
  }
  cdf_.back() = 1.0;  // exact normalization at the top
}

double ZipfTable::joint(int x, int y) const {
  const double clean = (y == spec_.f0(x)) ? spec_.pi_clean : 0.0;
  return pmf(x) * (clean + (1.0 - spec_.pi_clean) / spec_.alphabet);
}

int ZipfTable::sample(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = std::min<std::ptrdiff_t>(it - cdf_.begin(), spec_.truncation - 1);
  return static_cast<int>(idx) + 1;
}

double ZipfTable::total_pmf() const {
  double s = 0.0;
  for (double v : pmf_) s += v;
  return s;
}

ZipfData sample_zipf_noisy(const ZipfSpec& spec, Eigen::Index t, Seed seed) {
  return sample_zipf_noisy(ZipfTable(spec), t, seed);
}

ZipfData sample_zipf_noisy(const ZipfTable& table, Eigen::Index t, Seed seed) {
  if (t < 1) throw std::invalid_argument("sample_zipf_noisy: T must be >= 1");
  const ZipfSpec& spec = table.spec();

  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> label(1, spec.alphabet);

  ZipfData data;
  data.x.resize(t);
  data.y.resize(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    data.x[i] = table.sample(unit(engine));
    // The uniform branch is drawn independently of x and may re-emit f0(x).
    data.y[i] = (unit(engine) < spec.pi_clean) ? spec.f0(data.x[i]) : label(engine);
  }
  return data;
}

}  // namespace collapse
