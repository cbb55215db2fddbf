#ifndef OPRES_CLI_HPP
#define OPRES_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "opres/config.hpp"
#include "opres/eval.hpp"
#include "opres/io.hpp"
#include "opres/problems.hpp"
#include "opres/train.hpp"

namespace opres::cli {

/// Problem objects assembled from a validated RunConfig.
struct Problem {
  OperatorSpec op;
  InputLaw input_law;
  NoiseLaw noise_law;
  GridPtr grid;
  double input_radius = 0.0;   // R over the law's support
  double output_radius = 0.0;  // bound on ||Psi(u)||
  double lipschitz = 0.0;      // analytic L of the operator
};

Problem assemble_problem(const RunConfig& config);

Stage1Choice encoder_choice(const RunConfig& config);

/// Result of one full train run (dataset already in memory).
struct TrainedModel {
  Checkpoint checkpoint;
  TrainTrace trace;
  double final_risk = 0.0;
  std::string arch_summary;
  long long parameter_total = 0;
  std::optional<double> clamp_kappa;  // set when the constrained class ran
};

TrainedModel run_training(const RunConfig& config, const Dataset& dataset);

/// Full sweep over [sweep] n_list x seeds_per_n without touching disk.
SweepRecord sweep_record(const RunConfig& config, int threads);

/// Command entry points used by the binary and by tests. They write the
/// same artifacts the CLI writes and print the same summary lines.
void cmd_gen_data(const RunConfig& config, const std::string& out_path);
void cmd_train(const RunConfig& config, const std::string& dataset_path,
               const std::string& out_path);
void cmd_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& out_path);
/// Returns the fraction of sweep cells that succeeded.
double cmd_sweep(const RunConfig& config, const std::string& out_base,
                 int threads);

/// argv-style front end: subcommands gen-data | train | eval | sweep with
/// flags --config, --out, --data, --model, --seed, --threads. Returns the
/// process exit code (0 ok, 2 config, 3 io, 4 numeric).
int run_cli(const std::vector<std::string>& args);

}  // namespace opres::cli

#endif
