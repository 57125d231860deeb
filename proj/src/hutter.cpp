#include "collapse/hutter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

std::int64_t pack(int x, int y, int alphabet) {
  return static_cast<std::int64_t>(x) * alphabet + (y - 1);
}

}  // namespace

CountTable CountTable::from_data(const ZipfData& data, int alphabet) {
  CountTable table;
  table.alphabet = alphabet;
  table.counts.reserve(static_cast<size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) table.add(data.x[i], data.y[i]);
  return table;
}

void CountTable::add(int x, int y, long k) {
  if (y < 1 || y > alphabet) throw std::invalid_argument("CountTable: label out of range");
  counts[pack(x, y, alphabet)] += k;
  total += k;
}

long CountTable::count(int x, int y) const {
  const auto it = counts.find(pack(x, y, alphabet));
  return it == counts.end() ? 0 : it->second;
}

PluginClassifier PluginClassifier::fit(const CountTable& table) {
  // Gather the best count per input; ties and unseen inputs map to label 1.
  struct Best {
    long count = 0;
    int label = 0;
    bool tied = false;
  };
  std::unordered_map<int, Best> best;
  best.reserve(table.counts.size());
  for (const auto& [key, count] : table.counts) {
    const int x = static_cast<int>(key / table.alphabet);
    const int y = static_cast<int>(key % table.alphabet) + 1;
    Best& entry = best[x];
    if (count > entry.count) {
      entry = {count, y, false};
    } else if (count == entry.count && entry.count > 0 && y != entry.label) {
      entry.tied = true;
    }
  }
  PluginClassifier predictor;
  predictor.prediction_.reserve(best.size());
  for (const auto& [x, entry] : best)
    predictor.prediction_[x] = entry.tied ? 1 : entry.label;
  return predictor;
}

int PluginClassifier::operator()(int x) const {
  const auto it = prediction_.find(x);
  return it == prediction_.end() ? 1 : it->second;
}

double bayes_error(int alphabet, double pi_clean) {
  if (alphabet < 2) throw std::invalid_argument("bayes_error: alphabet must be >= 2");
  if (!(pi_clean >= 0.0 && pi_clean <= 1.0))
    throw std::invalid_argument("bayes_error: pi must lie in [0,1]");
  return (1.0 - 1.0 / alphabet) * (1.0 - pi_clean);
}

ErrorEstimate test_error(const std::function<int(int)>& predictor, const ZipfSpec& spec,
                         Eigen::Index n_test, Seed seed) {
  if (n_test < 1) throw std::invalid_argument("test_error: n_test must be >= 1");
  const ZipfData data = sample_zipf_noisy(spec, n_test, seed);
  Eigen::Index misses = 0;
  for (Eigen::Index i = 0; i < n_test; ++i)
    if (predictor(data.x[i]) != data.y[i]) ++misses;
  ErrorEstimate out;
  out.err = static_cast<double>(misses) / static_cast<double>(n_test);
  out.se = std::sqrt(std::max(0.0, out.err * (1.0 - out.err)) / static_cast<double>(n_test));
  out.n = n_test;
  return out;
}

double exact_excess(const PluginClassifier& predictor, const ZipfTable& table) {
  const ZipfSpec& spec = table.spec();
  // err(f) - err* = pi * sum_x p(x) 1[f(x) != f0(x)], split into the seen
  // part (hash lookups) and the unseen part (fallback label 1).
  double wrong_mass = 0.0;
  for (int x = 1; x <= spec.truncation; ++x) {
    const auto it = predictor.seen().find(x);
    const int label = it == predictor.seen().end() ? 1 : it->second;
    if (label != spec.f0(x)) wrong_mass += table.pmf(x);
  }
  return spec.pi_clean * wrong_mass;
}

double exact_error(const PluginClassifier& predictor, const ZipfTable& table) {
  const ZipfSpec& spec = table.spec();
  return bayes_error(spec.alphabet, spec.pi_clean) + exact_excess(predictor, table);
}

Eigen::MatrixXd count_covariance(const ZipfSpec& spec, int x, long t) {
  spec.validate();
  if (x < 1 || x > spec.truncation)
    throw std::invalid_argument("count_covariance: x outside the support");
  const ZipfTable table(spec);
  const int m = spec.alphabet;
  Eigen::VectorXd joint(m);
  for (int y = 1; y <= m; ++y) joint[y - 1] = table.joint(x, y);
  Eigen::MatrixXd cov(m, m);
  for (int y = 0; y < m; ++y)
    for (int yp = 0; yp < m; ++yp)
      cov(y, yp) = joint[y] * ((y == yp ? 1.0 : 0.0) - joint[yp]) * static_cast<double>(t);
  return cov;
}

namespace {

struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
};

SlopeFit loglog_slope(const std::vector<ScalingPoint>& points, size_t first) {
  std::vector<double> xs, ys;
  for (size_t i = first; i < points.size(); ++i) {
    if (points[i].mean_excess <= 0.0) continue;  // cannot log; flagged upstream
    xs.push_back(std::log(static_cast<double>(points[i].t)));
    ys.push_back(std::log(points[i].mean_excess));
  }
  SlopeFit fit;
  const size_t n = xs.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  if (n > 2) {
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = ys[i] - my - fit.slope * (xs[i] - mx);
      rss += r * r;
    }
    fit.se = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

}  // namespace

ScalingFit scaling_experiment(const ZipfSpec& spec, const std::vector<long>& t_grid,
                              const std::vector<Seed>& seeds) {
  spec.validate();
  if (t_grid.size() < 2) throw std::invalid_argument("scaling_experiment: need >= 2 grid points");
  if (seeds.empty()) throw std::invalid_argument("scaling_experiment: need >= 1 seed");
  for (long t : t_grid)
    if (t < 1) throw std::invalid_argument("scaling_experiment: T must be >= 1");

  const ZipfTable table(spec);
  ScalingFit fit;
  fit.target_exponent = 1.0 - 1.0 / spec.beta;

  const double gate =
      kRegimeGateConstant * std::log(static_cast<double>(spec.alphabet)) / spec.alphabet;
  fit.regime_constant = kRegimeGateConstant;
  fit.regime_ok = spec.pi_clean > gate / (0.5 + gate);

  for (size_t gi = 0; gi < t_grid.size(); ++gi) {
    const long t = t_grid[gi];
    std::vector<double> excesses;
    excesses.reserve(seeds.size());
    for (size_t si = 0; si < seeds.size(); ++si) {
      const Seed cell_seed = derive_seed(seeds[si], gi);
      const ZipfData data = sample_zipf_noisy(table, t, cell_seed);
      const CountTable counts = CountTable::from_data(data, spec.alphabet);
      const PluginClassifier predictor = PluginClassifier::fit(counts);
      excesses.push_back(exact_excess(predictor, table));
      fit.cells.push_back({t, seeds[si], excesses.back()});
    }
    ScalingPoint point;
    point.t = t;
    double mean = 0.0;
    for (double e : excesses) mean += e;
    mean /= excesses.size();
    point.mean_excess = mean;
    if (excesses.size() > 1) {
      double var = 0.0;
      for (double e : excesses) var += (e - mean) * (e - mean);
      var /= (excesses.size() - 1);
      point.se = std::sqrt(var / excesses.size());
    }
    if (point.mean_excess < -3.0 * point.se) fit.flagged = true;
    fit.points.push_back(point);
  }

  fit.slope_full = loglog_slope(fit.points, 0).slope;
  fit.slope_se_full = loglog_slope(fit.points, 0).se;
  const size_t half = fit.points.size() / 2;
  const SlopeFit hf = loglog_slope(fit.points, half);
  fit.slope_half = hf.slope;
  fit.slope_se_half = hf.se;
  return fit;
}

}  // namespace collapse
