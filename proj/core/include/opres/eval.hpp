#ifndef OPRES_EVAL_HPP
#define OPRES_EVAL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "opres/fnn.hpp"
#include "opres/problems.hpp"
#include "opres/train.hpp"

namespace opres {

/// Map between encoded spaces, R^{d_x} -> R^{d_y}. Wraps a trained
/// network or, for diagnostics, the exact encoded transformation.
using EncodedMap = std::function<std::vector<double>(std::span<const double>)>;

/// Composite estimator decode_y . gamma . encode_x.
struct Estimator {
  EncoderPair encoders;
  EncodedMap gamma;
};

Estimator make_estimator(EncoderPair encoders, FnnParams net);
Estimator make_estimator(EncoderPair encoders, MultiIndexFnn net);

/// Estimator whose encoded map is the exact target transformation
/// E_y . Psi . D_x (the map the network is trained to approximate).
Estimator make_exact_estimator(EncoderPair encoders, OperatorSpec op,
                               GridPtr grid);

GridFunction predict(const Estimator& est, const GridFunction& u);

/// Monte Carlo error report over one shared stream of fresh inputs.
/// decomposition_slack is RHS - LHS of the pointwise inequality
///   ||predict(u) - Psi(u)||^2 <= 2 ||predict(u) - Pi_y Psi(u)||^2
///                              + 2 ||Pi_y Psi(u) - Psi(u)||^2
/// averaged over the sample; it is nonnegative up to roundoff.
struct EvalReport {
  double gen_error = 0.0;           // mean ||predict(u) - Psi(u)||^2
  double proj_error_x = 0.0;        // mean ||Pi_x u - u||^2
  double proj_error_y = 0.0;        // mean ||Pi_y Psi(u) - Psi(u)||^2
  double encoded_space_error = 0.0; // mean ||gamma(E_x u) - E_y Psi(u)||^2
  double decomposition_slack = 0.0;
  // Per-sample second moments for standard errors.
  double gen_error_stderr = 0.0;
  double proj_error_y_stderr = 0.0;
  int n_test = 0;
  std::uint64_t seed = 0;
};

EvalReport evaluate(const Estimator& est, const OperatorSpec& op,
                    const InputLaw& law, int n_test, std::uint64_t seed,
                    const GridPtr& grid);

/// Individual metrics (each draws its own stream from the seed).
double generalization_error(const Estimator& est, const OperatorSpec& op,
                            const InputLaw& law, int n_test, std::uint64_t seed,
                            const GridPtr& grid);
std::pair<double, double> projection_errors(const EncoderPair& encoders,
                                            const OperatorSpec& op,
                                            const InputLaw& law, int n_test,
                                            std::uint64_t seed,
                                            const GridPtr& grid);
double check_decomposition(const Estimator& est, const OperatorSpec& op,
                           const InputLaw& law, int n_test, std::uint64_t seed,
                           const GridPtr& grid);

/// Ordinary least squares on (ln n, ln y). Throws on non-positive y,
/// duplicate n, or fewer than 2 points.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // in ln units
  double residual = 0.0;   // rms of ln-residuals
};
LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// One sweep cell: a full generate/train/evaluate run at a given sample
/// count and seed. Divergent cells are flagged and excluded from the fit.
struct SweepCell {
  long long n = 0;
  std::uint64_t seed = 0;
  double gen_error = 0.0;
  double proj_x = 0.0;
  double proj_y = 0.0;
  double encoded_err = 0.0;
  double train_risk = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string message;
};

struct SweepRecord {
  std::vector<SweepCell> rows;           // sorted by (n, seed)
  std::vector<long long> fit_n;          // distinct n entering the fit
  std::vector<double> fit_median_error;  // per-n median gen_error
  LogLogFit fit;
  bool fit_valid = false;
};

using SweepCellRunner = std::function<SweepCell(long long n, std::uint64_t seed)>;

/// Runs every (n, seed) cell (optionally across threads; cells are
/// internally deterministic), merges rows in sorted key order, and fits
/// the log-log slope of the per-n median generalization error.
SweepRecord rate_sweep(const std::vector<long long>& n_values,
                       const std::vector<std::uint64_t>& seeds,
                       const SweepCellRunner& runner, int threads = 1);

double median(std::vector<double> values);

}  // namespace opres

#endif
