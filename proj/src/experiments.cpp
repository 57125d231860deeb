#include "collapse/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "collapse/csv.hpp"
#include "collapse/labelers.hpp"
#include "collapse/proxy.hpp"
#include "collapse/trainer.hpp"

namespace collapse {

namespace {

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<size_t>(workers, n));
  pool.reserve(count);
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<Seed> parse_seeds(KeyValueConfig& kv) {
  const std::vector<long> raw = kv.get_long_list("seeds");
  std::vector<Seed> seeds;
  std::set<long> unique;
  for (long s : raw) {
    if (s < 0) throw std::runtime_error("config: seeds must be non-negative");
    if (!unique.insert(s).second) throw std::runtime_error("config: duplicate seeds");
    seeds.push_back(static_cast<Seed>(s));
  }
  return seeds;
}

Covariance parse_convention(const std::string& text) {
  if (text == "unit-trace") return Covariance::UnitTrace;
  if (text == "simulation") return Covariance::Simulation;
  throw std::runtime_error("config: convention must be unit-trace or simulation");
}

std::string convention_name(Covariance convention) {
  return convention == Covariance::UnitTrace ? "unit-trace" : "simulation";
}

struct Welford {
  int n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  double sd() const { return n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0; }
};

struct OptionalMean {
  int n = 0;
  double sum = 0.0;
  void add(const std::optional<double>& v) {
    if (!v) return;
    ++n;
    sum += *v;
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// phase-sweep
// ---------------------------------------------------------------------------

PhaseSweepConfig PhaseSweepConfig::from(KeyValueConfig& kv) {
  PhaseSweepConfig config;
  config.d = static_cast<int>(kv.get_long("d"));
  config.n = kv.get_long("N");
  config.lambda = kv.get_double("lambda");
  config.tau = kv.get_double("tau");
  config.t = kv.get_double("t", 0.1);
  config.convention = parse_convention(kv.get_string("convention", "unit-trace"));
  config.p_grid = kv.get_double_list("p_grid");
  if (kv.has("phi")) config.phi = kv.get_double("phi");
  if (kv.has("psi")) config.psi = kv.get_double("psi");
  if (kv.has("theta_prune")) config.theta_prune = kv.get_double("theta_prune");
  const std::string mode = kv.get_string("label_mode", "flip");
  if (mode == "flip")
    config.label_mode = SweepLabelMode::Flip;
  else if (mode == "generator")
    config.label_mode = SweepLabelMode::Generator;
  else
    throw std::runtime_error("config: label_mode must be flip or generator");
  config.seeds = parse_seeds(kv);
  config.n_test = kv.get_long("n_test", 50000);
  config.tol = kv.get_double("tol", 1e-6);
  config.max_iters = kv.get_long("max_iters", 200000);
  config.validate();
  return config;
}

void PhaseSweepConfig::validate() const {
  MixtureSpec spec{d, tau, convention, CrossClass::Opposite};
  spec.validate();
  if (n < 1) throw std::runtime_error("phase-sweep: N must be >= 1");
  TrainConfig{lambda, tol, max_iters}.validate();
  if (!(t > 0.0 && t < 1.0)) throw std::runtime_error("phase-sweep: t must lie in (0,1)");
  if (p_grid.empty()) throw std::runtime_error("phase-sweep: empty p_grid");
  for (double p : p_grid)
    if (!(p >= 0.0 && p < 1.0)) throw std::runtime_error("phase-sweep: p must lie in [0,1)");
  const bool channel = phi.has_value() || psi.has_value();
  if (channel) {
    if (!phi || !psi) throw std::runtime_error("phase-sweep: phi and psi go together");
    if (theta_prune) throw std::runtime_error("phase-sweep: give (phi, psi) or theta_prune, not both");
    PruneParams{*phi, *psi, 0.0}.validate();
  } else if (theta_prune) {
    if (!(*theta_prune >= 0.0 && *theta_prune <= std::numbers::pi))
      throw std::runtime_error("phase-sweep: theta_prune must lie in [0, pi]");
  } else {
    throw std::runtime_error("phase-sweep: need (phi, psi) or theta_prune");
  }
  if (seeds.empty()) throw std::runtime_error("phase-sweep: need seeds");
  if (n_test < 1) throw std::runtime_error("phase-sweep: n_test must be >= 1");
}

namespace {

PhiPsi phase_sweep_prediction(const PhaseSweepConfig& config, double p) {
  if (config.phi) return PhiPsi{*config.phi, *config.psi};
  const MixtureSpec spec{config.d, config.tau, config.convention, CrossClass::Opposite};
  const double theta_p = *config.theta_prune;
  if (config.label_mode == SweepLabelMode::Flip) {
    // The flip is independent of x, so the margin pruner keeps a correct pair
    // exactly when it classifies x correctly.
    const double correct = phi_cdf(config.tau * std::cos(theta_p) / spec.proj_sd());
    return PhiPsi{correct, 1.0 - correct};
  }
  const double theta_g = p * std::numbers::pi;
  const AngleTriple triple{theta_g, theta_p, std::abs(theta_g - theta_p)};
  return phi_psi_from_angles(triple, config.tau, config.d, config.convention);
}

}  // namespace

PhaseSweepResult run_phase_sweep(const PhaseSweepConfig& config, const RunOptions& options) {
  config.validate();
  const size_t n_seeds = config.seeds.size();
  const size_t n_cells = config.p_grid.size() * n_seeds;

  PhaseSweepResult result;
  result.cells.resize(n_cells);

  parallel_for(n_cells, options.workers, [&](size_t idx) {
    const auto start = std::chrono::steady_clock::now();
    const size_t pi = idx / n_seeds;
    const size_t si = idx % n_seeds;
    const double p = config.p_grid[pi];

    PhaseSweepResult::Cell& cell = result.cells[idx];
    cell.p = p;
    cell.seed = config.seeds[si];
    const Seed base = derive_seed(derive_seed(options.base_seed, config.seeds[si]), pi);

    try {
      const MixtureSpec spec =
          config.convention == Covariance::UnitTrace
              ? MixtureSpec::unit_trace(config.d, config.tau)
              : MixtureSpec::simulation(config.d, config.tau);
      MixtureData data = sample_mixture(spec, config.n, derive_seed(base, 0));

      Eigen::ArrayXi y_fake;
      if (config.label_mode == SweepLabelMode::Flip) {
        y_fake = flip_channel(data.y, p, derive_seed(base, 1));
      } else {
        const Weights w_gen = vector_at_angle(config.d, p * std::numbers::pi);
        y_fake = generate_labels(w_gen, data.x, LabelMode::Deterministic);
      }

      PrunedDataset pruned;
      if (config.phi) {
        pruned = prune_phi_psi(std::move(data.x), std::move(data.y), std::move(y_fake),
                               *config.phi, *config.psi, derive_seed(base, 2));
      } else {
        const Weights w_prune = vector_at_angle(config.d, *config.theta_prune);
        pruned = prune_margin(std::move(data.x), std::move(data.y), std::move(y_fake), w_prune);
      }
      cell.rates = measure_phi_psi(pruned);
      cell.survivors = pruned.survivors();
      if (cell.survivors == 0) {
        cell.status = "empty";
        cell.wall_ms = elapsed_ms(start);
        return;
      }

      const TrainConfig train_config{config.lambda, config.tol, config.max_iters};
      const TrainedModel model = train(pruned, train_config);
      cell.converged = model.converged;
      cell.acc = test_accuracy(model.w, spec, config.n_test, derive_seed(base, 3)).acc;
      cell.status = model.converged ? "ok" : "noconv";
    } catch (const std::exception&) {
      cell.status = "error";
    }
    cell.wall_ms = elapsed_ms(start);
  });

  for (size_t pi = 0; pi < config.p_grid.size(); ++pi) {
    PhaseSweepResult::Aggregate agg;
    agg.p = config.p_grid[pi];
    Welford acc;
    OptionalMean phi_hat, psi_hat, p_hat;
    for (size_t si = 0; si < n_seeds; ++si) {
      const auto& cell = result.cells[pi * n_seeds + si];
      if (cell.status != "ok") continue;
      acc.add(cell.acc);
      phi_hat.add(cell.rates.phi);
      psi_hat.add(cell.rates.psi);
      p_hat.add(cell.rates.p);
    }
    agg.n_ok = acc.n;
    agg.acc_mean = acc.mean;
    agg.acc_sd = acc.sd();
    agg.phi_hat_mean = phi_hat.mean();
    agg.psi_hat_mean = psi_hat.mean();
    agg.p_hat_mean = p_hat.mean();
    agg.predicted = phase_sweep_prediction(config, agg.p);
    agg.th = thresholds(std::max(agg.predicted.phi, 1e-300), agg.predicted.psi, config.t);
    result.aggregates.push_back(agg);
  }
  return result;
}

void write_csv(const PhaseSweepConfig& config, const PhaseSweepResult& result, std::ostream& out,
               const RunOptions& options) {
  out << "# schema=1 kind=phase-sweep\n";
  out << "phi,psi,t,p,d,N,lambda,tau,convention,label_mode,strategy,theta_prune,seed,n_test,"
         "survivors,acc,acc_mean,acc_sd,phi_hat,psi_hat,p_hat,p_star,p_minus,p_plus,status";
  if (options.timing) out << ",wall_ms";
  out << "\n";

  const std::string strategy = config.phi ? "channel" : "margin";
  const std::string label_mode =
      config.label_mode == SweepLabelMode::Flip ? "flip" : "generator";
  const size_t n_seeds = config.seeds.size();

  const auto shared = [&](const PhaseSweepResult::Aggregate& agg) {
    std::string row;
    row += csv_num(agg.predicted.phi) + "," + csv_num(agg.predicted.psi) + ",";
    row += csv_num(config.t) + "," + csv_num(agg.p) + ",";
    row += csv_num(config.d) + "," + csv_num(config.n) + "," + csv_num(config.lambda) + ",";
    row += csv_num(config.tau) + "," + convention_name(config.convention) + "," + label_mode +
           "," + strategy + ",";
    row += (config.theta_prune ? csv_num(*config.theta_prune) : "NA");
    return row;
  };

  for (size_t pi = 0; pi < config.p_grid.size(); ++pi) {
    const auto& agg = result.aggregates[pi];
    for (size_t si = 0; si < n_seeds; ++si) {
      const auto& cell = result.cells[pi * n_seeds + si];
      out << shared(agg) << "," << cell.seed << "," << config.n_test << ","
          << cell.survivors << ",";
      out << (cell.status == "ok" || cell.status == "noconv" ? csv_num(cell.acc) : "NA");
      out << ",NA,NA,";  // acc_mean, acc_sd live on the aggregate row
      out << csv_opt(cell.rates.phi) << "," << csv_opt(cell.rates.psi) << ","
          << csv_opt(cell.rates.p) << ",";
      out << csv_num(agg.th.p_star) << "," << csv_num(agg.th.p_minus) << ","
          << csv_num(agg.th.p_plus) << "," << cell.status;
      if (options.timing) out << "," << csv_num(cell.wall_ms);
      out << "\n";
    }
    out << shared(agg) << ",-1," << config.n_test << ",NA,NA,";
    out << csv_num(agg.acc_mean) << "," << csv_num(agg.acc_sd) << ",";
    out << csv_opt(agg.phi_hat_mean) << "," << csv_opt(agg.psi_hat_mean) << ","
        << csv_opt(agg.p_hat_mean) << ",";
    out << csv_num(agg.th.p_star) << "," << csv_num(agg.th.p_minus) << ","
        << csv_num(agg.th.p_plus) << ",agg";
    if (options.timing) out << ",NA";
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

SimulateConfig SimulateConfig::from(KeyValueConfig& kv) {
  SimulateConfig config;
  config.d = static_cast<int>(kv.get_long("d"));
  config.tau = kv.get_double("tau");
  config.lambda = kv.get_double("lambda");
  config.n0 = kv.get_long("N0");
  config.n1 = kv.get_long("N1", 1000000);
  config.theta_prune = kv.get_double_list("theta_prune");
  config.n_grid = kv.get_long_list("n_grid");
  config.seeds = parse_seeds(kv);
  config.n_test = kv.get_long("n_test", 100000);
  config.tol = kv.get_double("tol", 1e-6);
  config.max_iters = kv.get_long("max_iters", 200000);
  config.validate();
  return config;
}

void SimulateConfig::validate() const {
  MixtureSpec::simulation(d, tau).validate();
  TrainConfig{lambda, tol, max_iters}.validate();
  if (n0 < 1) throw std::runtime_error("simulate: N0 must be >= 1");
  if (n1 < 1) throw std::runtime_error("simulate: N1 must be >= 1");
  if (theta_prune.empty()) throw std::runtime_error("simulate: need theta_prune angles");
  for (double theta : theta_prune)
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
      throw std::runtime_error("simulate: theta_prune must lie in [0, pi]");
  if (n_grid.empty()) throw std::runtime_error("simulate: empty n_grid");
  for (long n : n_grid)
    if (n < 1) throw std::runtime_error("simulate: n_grid entries must be >= 1");
  if (seeds.empty()) throw std::runtime_error("simulate: need seeds");
  if (n_test < 1) throw std::runtime_error("simulate: n_test must be >= 1");
}

namespace {

struct PoolCounters {
  long correct = 0, wrong = 0;
  SurvivalCounts kept;
  void add(int y_true, int y_fake, int keep) {
    (y_true == y_fake ? correct : wrong)++;
    if (!keep) return;
    if (y_true == 1)
      (y_fake == 1 ? kept.n11 : kept.n10)++;
    else
      (y_fake == 1 ? kept.n01 : kept.n00)++;
  }
  RateEstimate rates() const {
    const auto ratio = [](long num, long den) -> std::optional<double> {
      if (den == 0) return std::nullopt;
      return static_cast<double>(num) / static_cast<double>(den);
    };
    RateEstimate est;
    est.phi = ratio(kept.correct(), correct);
    est.psi = ratio(kept.wrong(), wrong);
    est.p = ratio(wrong, correct + wrong);
    return est;
  }
};

std::optional<double> pstar_from(const RateEstimate& rates) {
  if (!rates.phi || !rates.psi || *rates.phi <= 0.0) return std::nullopt;
  return 1.0 / (1.0 + *rates.psi / *rates.phi);
}

constexpr long kPoolChunk = 32768;

}  // namespace

SimulateResult run_simulation_scaling(const SimulateConfig& config, const RunOptions& options) {
  config.validate();

  SimulateResult result;
  result.strategies.push_back({"clean", std::nullopt});
  result.strategies.push_back({"random", std::nullopt});
  for (double theta : config.theta_prune) result.strategies.push_back({"margin", theta});

  const size_t n_strategies = result.strategies.size();
  const size_t n_seeds = config.seeds.size();
  const size_t n_grid = config.n_grid.size();
  const long n_max = *std::max_element(config.n_grid.begin(), config.n_grid.end());

  result.pools.resize(n_strategies * n_seeds);
  result.cells.resize(n_strategies * n_grid * n_seeds);

  const auto cell_at = [&](size_t strategy, size_t gi, size_t si) -> SimulateResult::Cell& {
    return result.cells[(strategy * n_grid + gi) * n_seeds + si];
  };

  // One task per (strategy, seed): regenerate the shared synthesized stream
  // (identical across strategies by seeding) and keep only that strategy's
  // survivors, so memory stays bounded by one survivor buffer.
  parallel_for(n_strategies * n_seeds, options.workers, [&](size_t task) {
    const size_t strategy = task / n_seeds;
    const size_t si = task % n_seeds;
    const Seed seed_value = config.seeds[si];
    const Seed base = derive_seed(derive_seed(options.base_seed, seed_value), 7770);
    const MixtureSpec spec = MixtureSpec::simulation(config.d, config.tau);
    const TrainConfig train_config{config.lambda, config.tol, config.max_iters};
    const auto& info = result.strategies[strategy];

    SimulateResult::PoolStats& pool = result.pools[strategy * n_seeds + si];
    pool.strategy = static_cast<int>(strategy);
    pool.seed = seed_value;

    try {
      if (info.name == "clean") {
        for (size_t gi = 0; gi < n_grid; ++gi) {
          const auto start = std::chrono::steady_clock::now();
          SimulateResult::Cell& cell = cell_at(strategy, gi, si);
          cell.strategy = static_cast<int>(strategy);
          cell.n_prime = config.n_grid[gi];
          cell.seed = seed_value;
          MixtureData data =
              sample_mixture(spec, config.n_grid[gi], derive_seed(base, 9000 + gi));
          const Eigen::ArrayXi q = Eigen::ArrayXi::Ones(data.y.size());
          Eigen::ArrayXi labels = data.y;
          PrunedDataset clean;
          clean.counts = SurvivalCounts::tally(data.y, labels, q);
          clean.x = std::move(data.x);
          clean.y_true = data.y;
          clean.y_fake = std::move(labels);
          clean.q = q;
          const TrainedModel model = train(clean, train_config);
          cell.converged = model.converged;
          cell.acc =
              test_accuracy(model.w, spec, config.n_test, derive_seed(base, 9500 + gi)).acc;
          cell.status = model.converged ? "ok" : "noconv";
          cell.wall_ms = elapsed_ms(start);
        }
        return;
      }

      // Generator trained once per seed (same derivation for every strategy).
      const MixtureData gen_data = sample_mixture(spec, config.n0, derive_seed(base, 1));
      const Weights w_gen = fit_ols(gen_data.x, gen_data.y);
      const bool is_margin = info.name == "margin";
      const Weights w_prune =
          is_margin ? vector_at_angle(config.d, *info.theta) : Weights::Zero(config.d);

      Eigen::MatrixXd survivors_x(n_max, config.d);
      Eigen::ArrayXi survivors_true(n_max), survivors_fake(n_max);
      long buffered = 0;
      long consumed = 0;
      PoolCounters counters;

      for (long chunk_index = 0; consumed < config.n1 && buffered < n_max; ++chunk_index) {
        const long m = std::min<long>(kPoolChunk, config.n1 - consumed);
        MixtureData data = sample_mixture(spec, m, derive_seed(base, 100 + chunk_index));
        const Eigen::ArrayXi y_fake = generate_labels(
            w_gen, data.x, LabelMode::SigmoidStochastic, derive_seed(base, 5000 + chunk_index));
        Eigen::ArrayXi keep;
        if (is_margin) {
          const Eigen::VectorXd margins = data.x * w_prune;
          keep.resize(m);
          for (long i = 0; i < m; ++i)
            keep[i] = label_sign(y_fake[i]) * margins[i] > 0.0 ? 1 : 0;
        } else {
          keep = Eigen::ArrayXi::Ones(m);
        }
        for (long i = 0; i < m; ++i) {
          counters.add(data.y[i], y_fake[i], keep[i]);
          if (keep[i] == 1 && buffered < n_max) {
            survivors_x.row(buffered) = data.x.row(i);
            survivors_true[buffered] = data.y[i];
            survivors_fake[buffered] = y_fake[i];
            ++buffered;
          }
        }
        consumed += m;
      }

      pool.pool = consumed;
      pool.survivors = counters.kept.total();
      pool.rates = counters.rates();
      pool.p_star = pstar_from(pool.rates);

      for (size_t gi = 0; gi < n_grid; ++gi) {
        const auto start = std::chrono::steady_clock::now();
        SimulateResult::Cell& cell = cell_at(strategy, gi, si);
        cell.strategy = static_cast<int>(strategy);
        cell.n_prime = config.n_grid[gi];
        cell.seed = seed_value;
        if (config.n_grid[gi] > buffered) {
          cell.status = "short";  // surviving pool smaller than n'
          cell.wall_ms = elapsed_ms(start);
          continue;
        }
        const long n_prime = config.n_grid[gi];
        PrunedDataset selected;
        selected.x = survivors_x.topRows(n_prime);
        selected.y_true = survivors_true.head(n_prime);
        selected.y_fake = survivors_fake.head(n_prime);
        selected.q = Eigen::ArrayXi::Ones(n_prime);
        selected.counts = SurvivalCounts::tally(selected.y_true, selected.y_fake, selected.q);
        const TrainedModel model = train(selected, train_config);
        cell.converged = model.converged;
        cell.acc =
            test_accuracy(model.w, spec, config.n_test, derive_seed(base, 9500 + gi)).acc;
        cell.status = model.converged ? "ok" : "noconv";
        cell.wall_ms = elapsed_ms(start);
      }
    } catch (const std::exception&) {
      for (size_t gi = 0; gi < n_grid; ++gi) {
        SimulateResult::Cell& cell = cell_at(strategy, gi, si);
        cell.strategy = static_cast<int>(strategy);
        cell.n_prime = config.n_grid[gi];
        cell.seed = seed_value;
        if (cell.status.empty()) cell.status = "error";
      }
    }
  });

  for (size_t strategy = 0; strategy < n_strategies; ++strategy) {
    for (size_t gi = 0; gi < n_grid; ++gi) {
      SimulateResult::Aggregate agg;
      agg.strategy = static_cast<int>(strategy);
      agg.n_prime = config.n_grid[gi];
      Welford acc;
      OptionalMean pstar;
      for (size_t si = 0; si < n_seeds; ++si) {
        const auto& cell = cell_at(strategy, gi, si);
        if (cell.status == "ok") acc.add(cell.acc);
        pstar.add(result.pools[strategy * n_seeds + si].p_star);
      }
      agg.n_ok = acc.n;
      agg.acc_mean = acc.mean;
      agg.acc_sd = acc.sd();
      agg.p_star_mean = pstar.mean().value_or(std::nan(""));
      result.aggregates.push_back(agg);
    }
  }
  return result;
}

void write_csv(const SimulateConfig& config, const SimulateResult& result, std::ostream& out,
               const RunOptions& options) {
  out << "# schema=1 kind=simulate\n";
  out << "d,tau,lambda,N0,N1,strategy,theta_prune,n_prime,seed,n_test,pool,survivors,acc,"
         "acc_mean,acc_sd,phi_hat,psi_hat,p_hat,p_star,status";
  if (options.timing) out << ",wall_ms";
  out << "\n";

  const size_t n_seeds = config.seeds.size();
  const size_t n_grid = config.n_grid.size();
  const std::string prefix = csv_num(config.d) + "," + csv_num(config.tau) + "," +
                             csv_num(config.lambda) + "," + csv_num(config.n0) + "," +
                             csv_num(config.n1) + ",";

  for (size_t strategy = 0; strategy < result.strategies.size(); ++strategy) {
    const auto& info = result.strategies[strategy];
    const std::string theta = info.theta ? csv_num(*info.theta) : "NA";
    for (size_t gi = 0; gi < n_grid; ++gi) {
      for (size_t si = 0; si < n_seeds; ++si) {
        const auto& cell = result.cells[(strategy * n_grid + gi) * n_seeds + si];
        const auto& pool = result.pools[strategy * n_seeds + si];
        out << prefix << info.name << "," << theta << "," << cell.n_prime << "," << cell.seed
            << "," << config.n_test << ",";
        if (info.name == "clean")
          out << "NA,NA,";
        else
          out << pool.pool << "," << pool.survivors << ",";
        out << (cell.status == "ok" || cell.status == "noconv" ? csv_num(cell.acc) : "NA");
        out << ",NA,NA,";
        out << csv_opt(pool.rates.phi) << "," << csv_opt(pool.rates.psi) << ","
            << csv_opt(pool.rates.p) << "," << csv_opt(pool.p_star) << "," << cell.status;
        if (options.timing) out << "," << csv_num(cell.wall_ms);
        out << "\n";
      }
      const auto& agg = result.aggregates[strategy * n_grid + gi];
      out << prefix << info.name << "," << theta << "," << agg.n_prime << ",-1,"
          << config.n_test << ",NA,NA,NA," << csv_num(agg.acc_mean) << ","
          << csv_num(agg.acc_sd) << ",NA,NA,NA,";
      out << (std::isnan(agg.p_star_mean) ? "NA" : csv_num(agg.p_star_mean));
      out << ",agg";
      if (options.timing) out << ",NA";
      out << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// hutter
// ---------------------------------------------------------------------------

HutterConfig HutterConfig::from(KeyValueConfig& kv) {
  HutterConfig config;
  config.beta = kv.get_double("beta");
  config.truncation = static_cast<int>(kv.get_long("K", 1000000));
  config.alphabet = static_cast<int>(kv.get_long("M"));
  config.pi_clean = kv.get_double("pi");
  config.t_grid = kv.get_long_list("T_grid");
  config.seeds = parse_seeds(kv);
  config.validate();
  return config;
}

void HutterConfig::validate() const {
  ZipfSpec{beta, truncation, alphabet, pi_clean, {}}.validate();
  if (t_grid.size() < 2) throw std::runtime_error("hutter: T_grid needs >= 2 points");
  for (long t : t_grid)
    if (t < 1) throw std::runtime_error("hutter: T must be >= 1");
  if (seeds.empty()) throw std::runtime_error("hutter: need seeds");
}

HutterResult run_hutter(const HutterConfig& config, const RunOptions& options) {
  config.validate();
  HutterResult result;
  const ZipfSpec spec{config.beta, config.truncation, config.alphabet, config.pi_clean, {}};
  std::vector<Seed> seeds;
  seeds.reserve(config.seeds.size());
  for (Seed s : config.seeds) seeds.push_back(derive_seed(options.base_seed, s));
  result.fit = scaling_experiment(spec, config.t_grid, seeds);
  result.err_star = bayes_error(config.alphabet, config.pi_clean);
  return result;
}

void write_csv(const HutterConfig& config, const HutterResult& result, std::ostream& out,
               const RunOptions& options) {
  (void)options;
  out << "# schema=1 kind=hutter\n";
  out << "row,beta,K,M,pi,T,seed,err,err_star,excess,regime_ok,slope_full,slope_half,"
         "slope_se_half,c_target,status\n";

  const std::string prefix = csv_num(config.beta) + "," + csv_num(config.truncation) + "," +
                             csv_num(config.alphabet) + "," + csv_num(config.pi_clean) + ",";
  const size_t n_seeds = config.seeds.size();
  for (size_t i = 0; i < result.fit.cells.size(); ++i) {
    const auto& cell = result.fit.cells[i];
    out << "cell," << prefix << cell.t << "," << config.seeds[i % n_seeds] << ","
        << csv_num(result.err_star + cell.excess) << "," << csv_num(result.err_star) << ","
        << csv_num(cell.excess) << "," << (result.fit.regime_ok ? 1 : 0)
        << ",NA,NA,NA," << csv_num(result.fit.target_exponent) << ",ok\n";
  }
  out << "fit," << prefix << "-1,-1,NA," << csv_num(result.err_star) << ",NA,"
      << (result.fit.regime_ok ? 1 : 0) << "," << csv_num(result.fit.slope_full) << ","
      << csv_num(result.fit.slope_half) << "," << csv_num(result.fit.slope_se_half) << ","
      << csv_num(result.fit.target_exponent) << ","
      << (result.fit.flagged ? "flagged" : "ok") << "\n";
}

// ---------------------------------------------------------------------------
// proxy
// ---------------------------------------------------------------------------

ProxyConfig ProxyConfig::from(KeyValueConfig& kv) {
  ProxyConfig config;
  config.input = kv.get_string("input");
  return config;
}

void run_proxy_eval(const ProxyConfig& config, std::ostream& out) {
  const ScoredSelection data = load_scored_csv(config.input);
  const double p_hat = estimate_p(data);
  const ProxyRates rates = estimate_phi_psi(data);
  const std::optional<double> p_star = proxy_pstar(data);
  out << "# schema=1 kind=proxy\n";
  out << "n,p_hat,phi_hat,psi_hat,p_star\n";
  out << data.n() << "," << csv_num(p_hat) << "," << csv_opt(rates.phi) << ","
      << csv_opt(rates.psi) << "," << csv_opt(p_star) << "\n";
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

void run_experiment_file(const std::string& kind, const std::string& config_path,
                         const std::string& out_path, const RunOptions& options) {
  KeyValueConfig kv = KeyValueConfig::parse_file(config_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);

  if (kind == "phase-sweep") {
    const PhaseSweepConfig config = PhaseSweepConfig::from(kv);
    kv.finish();
    write_csv(config, run_phase_sweep(config, options), out, options);
  } else if (kind == "simulate") {
    const SimulateConfig config = SimulateConfig::from(kv);
    kv.finish();
    write_csv(config, run_simulation_scaling(config, options), out, options);
  } else if (kind == "hutter") {
    const HutterConfig config = HutterConfig::from(kv);
    kv.finish();
    write_csv(config, run_hutter(config, options), out, options);
  } else if (kind == "proxy") {
    const ProxyConfig config = ProxyConfig::from(kv);
    kv.finish();
    run_proxy_eval(config, out);
  } else {
    throw std::runtime_error("unknown experiment kind: " + kind);
  }
}

}  // namespace collapse
