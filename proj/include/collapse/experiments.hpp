#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collapse/config.hpp"
#include "collapse/distributions.hpp"
#include "collapse/hutter.hpp"
#include "collapse/orthant.hpp"
#include "collapse/pruning.hpp"
#include "collapse/theory.hpp"

namespace collapse {

struct RunOptions {
  int workers = 1;
  Seed base_seed = 0;
  bool timing = false;  // adds a wall_ms column; off by default so reruns are byte-identical
};

enum class SweepLabelMode { Flip, Generator };

/// Phase-transition sweep over the corruption grid: sample, synthesize,
/// prune, train, evaluate against the Bayes rule; one cell per (p, seed).
struct PhaseSweepConfig {
  int d = 200;
  long n = 20000;
  double lambda = 1e-3;
  double tau = 0.5;
  double t = 0.1;
  Covariance convention = Covariance::UnitTrace;
  std::vector<double> p_grid;
  std::optional<double> phi;          // channel pruning
  std::optional<double> psi;
  std::optional<double> theta_prune;  // margin pruning alternative
  SweepLabelMode label_mode = SweepLabelMode::Flip;
  std::vector<Seed> seeds;
  long n_test = 50000;
  double tol = 1e-6;
  long max_iters = 200000;

  static PhaseSweepConfig from(KeyValueConfig& kv);
  void validate() const;
};

struct PhaseSweepResult {
  struct Cell {
    double p = 0.0;
    Seed seed = 0;
    double acc = 0.0;
    long survivors = 0;
    RateEstimate rates;
    bool converged = false;
    std::string status;  // ok | empty | noconv | error
    double wall_ms = 0.0;
  };
  struct Aggregate {
    double p = 0.0;
    int n_ok = 0;
    double acc_mean = 0.0;
    double acc_sd = 0.0;
    std::optional<double> phi_hat_mean, psi_hat_mean, p_hat_mean;
    PhiPsi predicted;  // channel parameters or their angle-based prediction
    Thresholds th;
  };
  std::vector<Cell> cells;
  std::vector<Aggregate> aggregates;
};

PhaseSweepResult run_phase_sweep(const PhaseSweepConfig& config, const RunOptions& options);
void write_csv(const PhaseSweepConfig& config, const PhaseSweepResult& result, std::ostream& out,
               const RunOptions& options);

/// Finite-sample replication: OLS generator trained on n0 original points,
/// sigmoid-stochastic synthesis, margin verifiers at the listed angles
/// (0 = oracle direction), plus no-pruning and clean-data baselines; the
/// downstream model is trained on the first n' survivors.
struct SimulateConfig {
  int d = 100;
  double tau = 0.15;
  double lambda = 1e-3;
  long n0 = 1000;
  long n1 = 1000000;  // synthesized pool cap
  std::vector<double> theta_prune;
  std::vector<long> n_grid;
  std::vector<Seed> seeds;
  long n_test = 100000;
  double tol = 1e-6;
  long max_iters = 200000;

  static SimulateConfig from(KeyValueConfig& kv);
  void validate() const;
};

struct SimulateResult {
  struct Strategy {
    std::string name;  // clean | random | margin
    std::optional<double> theta;
  };
  struct PoolStats {
    int strategy = 0;
    Seed seed = 0;
    long pool = 0;       // synthesized examples consumed
    long survivors = 0;  // examples passing the strategy's mask
    RateEstimate rates;
    std::optional<double> p_star;
  };
  struct Cell {
    int strategy = 0;
    long n_prime = 0;
    Seed seed = 0;
    double acc = 0.0;
    bool converged = false;
    std::string status;  // ok | short | noconv
    double wall_ms = 0.0;
  };
  struct Aggregate {
    int strategy = 0;
    long n_prime = 0;
    int n_ok = 0;
    double acc_mean = 0.0;
    double acc_sd = 0.0;
    double p_star_mean = 0.0;
  };
  std::vector<Strategy> strategies;
  std::vector<PoolStats> pools;
  std::vector<Cell> cells;
  std::vector<Aggregate> aggregates;
};

SimulateResult run_simulation_scaling(const SimulateConfig& config, const RunOptions& options);
void write_csv(const SimulateConfig& config, const SimulateResult& result, std::ostream& out,
               const RunOptions& options);

/// Zipf label-noise scaling-law experiment.
struct HutterConfig {
  double beta = 2.0;
  int truncation = 1000000;
  int alphabet = 10;
  double pi_clean = 0.9;
  std::vector<long> t_grid;
  std::vector<Seed> seeds;

  static HutterConfig from(KeyValueConfig& kv);
  void validate() const;
};

struct HutterResult {
  ScalingFit fit;  // per-(T, seed) cells plus slope summaries
  double err_star = 0.0;
};

HutterResult run_hutter(const HutterConfig& config, const RunOptions& options);
void write_csv(const HutterConfig& config, const HutterResult& result, std::ostream& out,
               const RunOptions& options);

struct ProxyConfig {
  std::string input;
  static ProxyConfig from(KeyValueConfig& kv);
};

void run_proxy_eval(const ProxyConfig& config, std::ostream& out);

/// End-to-end entry point used by the CLI: parse the config file for the
/// given experiment kind, run it, write the CSV to out_path.
/// Kinds: phase-sweep | simulate | hutter | proxy.
void run_experiment_file(const std::string& kind, const std::string& config_path,
                         const std::string& out_path, const RunOptions& options);

}  // namespace collapse
