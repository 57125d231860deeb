// Experiment driver: parameter sweeps writing deterministic CSVs.
//
//   collapse-lab <phase-sweep|simulate|hutter|proxy> --config <file> --out <csv>
//                [--workers N] [--seed S] [--timing]

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "collapse/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verifier-pruning phase-transition and scaling-law experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  collapse::RunOptions options;
  long seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value experiment config")->required();
    cmd->add_option("--out", out_path, "output CSV path")->required();
    cmd->add_option("--workers", options.workers, "worker threads for independent cells")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "base seed mixed into every cell seed")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--timing", options.timing,
                  "append a wall_ms column (breaks byte-identical reruns)");
  };

  for (const char* kind : {"phase-sweep", "simulate", "hutter", "proxy"})
    add_common(app.add_subcommand(kind));

  CLI11_PARSE(app, argc, argv);

  options.base_seed = static_cast<collapse::Seed>(seed);
  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    collapse::run_experiment_file(kind, config_path, out_path, options);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
