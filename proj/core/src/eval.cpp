#include "opres/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "opres/errors.hpp"

namespace opres {

Estimator make_estimator(EncoderPair encoders, FnnParams net) {
  Estimator est;
  est.encoders = std::move(encoders);
  est.gamma = [net = std::move(net)](std::span<const double> a) {
    return fnn_forward(net, a);
  };
  return est;
}

Estimator make_estimator(EncoderPair encoders, MultiIndexFnn net) {
  Estimator est;
  est.encoders = std::move(encoders);
  est.gamma = [net = std::move(net)](std::span<const double> a) {
    return multi_index_forward(net, a);
  };
  return est;
}

Estimator make_exact_estimator(EncoderPair encoders, OperatorSpec op,
                               GridPtr grid) {
  Estimator est;
  est.encoders = encoders;
  est.gamma = [encoders = std::move(encoders), op = std::move(op),
               grid = std::move(grid)](std::span<const double> a) {
    const GridFunction u = encoders.decode_x(a, grid);
    return encoders.encode_y(apply_operator(op, u));
  };
  return est;
}

GridFunction predict(const Estimator& est, const GridFunction& u) {
  const std::vector<double> encoded = est.encoders.encode_x(u);
  const std::vector<double> mapped = est.gamma(encoded);
  return est.encoders.decode_y(mapped, u.grid);
}

namespace {

double squared_norm_of_difference(std::span<const double> a,
                                  std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

EvalReport evaluate(const Estimator& est, const OperatorSpec& op,
                    const InputLaw& law, int n_test, std::uint64_t seed,
                    const GridPtr& grid) {
  if (n_test < 1) throw ConfigError("evaluate: n_test must be >= 1");
  Rng rng(seed);

  EvalReport report;
  report.n_test = n_test;
  report.seed = seed;
  double gen_sq = 0.0, proj_y_sq = 0.0;
  double slack_acc = 0.0;

  for (int i = 0; i < n_test; ++i) {
    const GridFunction u = sample_input(law, rng, grid);
    const GridFunction truth = apply_operator(op, u);

    const std::vector<double> a = est.encoders.encode_x(u);
    const std::vector<double> mapped = est.gamma(a);
    const GridFunction prediction = est.encoders.decode_y(mapped, grid);

    const std::vector<double> target_coeffs = est.encoders.encode_y(truth);
    const GridFunction truth_projected =
        est.encoders.decode_y(target_coeffs, grid);
    const GridFunction input_projected = est.encoders.project_x(u);

    const double gen = [&] {
      const double d = distance(prediction, truth);
      return d * d;
    }();
    const double proj_x = [&] {
      const double d = distance(input_projected, u);
      return d * d;
    }();
    const double proj_y = [&] {
      const double d = distance(truth_projected, truth);
      return d * d;
    }();
    const double network_term = [&] {
      const double d = distance(prediction, truth_projected);
      return d * d;
    }();
    const double encoded = squared_norm_of_difference(mapped, target_coeffs);

    report.gen_error += gen;
    report.proj_error_x += proj_x;
    report.proj_error_y += proj_y;
    report.encoded_space_error += encoded;
    slack_acc += 2.0 * network_term + 2.0 * proj_y - gen;
    gen_sq += gen * gen;
    proj_y_sq += proj_y * proj_y;
  }

  const double count = static_cast<double>(n_test);
  report.gen_error /= count;
  report.proj_error_x /= count;
  report.proj_error_y /= count;
  report.encoded_space_error /= count;
  report.decomposition_slack = slack_acc / count;

  const auto stderr_of = [count](double mean, double sq_sum) {
    if (count < 2) return 0.0;
    const double var = std::max(0.0, sq_sum / count - mean * mean);
    return std::sqrt(var / count);
  };
  report.gen_error_stderr = stderr_of(report.gen_error, gen_sq);
  report.proj_error_y_stderr = stderr_of(report.proj_error_y, proj_y_sq);
  return report;
}

double generalization_error(const Estimator& est, const OperatorSpec& op,
                            const InputLaw& law, int n_test, std::uint64_t seed,
                            const GridPtr& grid) {
  return evaluate(est, op, law, n_test, seed, grid).gen_error;
}

std::pair<double, double> projection_errors(const EncoderPair& encoders,
                                            const OperatorSpec& op,
                                            const InputLaw& law, int n_test,
                                            std::uint64_t seed,
                                            const GridPtr& grid) {
  if (n_test < 1) throw ConfigError("projection_errors: n_test must be >= 1");
  Rng rng(seed);
  double proj_x = 0.0, proj_y = 0.0;
  for (int i = 0; i < n_test; ++i) {
    const GridFunction u = sample_input(law, rng, grid);
    const GridFunction w = apply_operator(op, u);
    const double dx = distance(encoders.project_x(u), u);
    const double dy = distance(encoders.project_y(w), w);
    proj_x += dx * dx;
    proj_y += dy * dy;
  }
  return {proj_x / n_test, proj_y / n_test};
}

double check_decomposition(const Estimator& est, const OperatorSpec& op,
                           const InputLaw& law, int n_test, std::uint64_t seed,
                           const GridPtr& grid) {
  return evaluate(est, op, law, n_test, seed, grid).decomposition_slack;
}

LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw ConfigError("fit_loglog_slope: need at least 2 points");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& [n, y] : points) {
    if (!(n > 0.0)) throw ConfigError("fit_loglog_slope: n must be positive");
    if (!(y > 0.0)) throw ConfigError("fit_loglog_slope: y must be positive");
    xs.push_back(std::log(n));
    ys.push_back(std::log(y));
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j])
        throw ConfigError("fit_loglog_slope: duplicate n values");

  const double count = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

SweepRecord rate_sweep(const std::vector<long long>& n_values,
                       const std::vector<std::uint64_t>& seeds,
                       const SweepCellRunner& runner, int threads) {
  if (n_values.size() < 3)
    throw ConfigError("rate_sweep: need at least 3 distinct n values");
  if (seeds.empty()) throw ConfigError("rate_sweep: need at least 1 seed");
  {
    std::vector<long long> sorted_n = n_values;
    std::sort(sorted_n.begin(), sorted_n.end());
    if (std::adjacent_find(sorted_n.begin(), sorted_n.end()) != sorted_n.end())
      throw ConfigError("rate_sweep: n values must be distinct");
  }

  struct CellKey {
    long long n;
    std::uint64_t seed;
  };
  std::vector<CellKey> keys;
  for (long long n : n_values)
    for (std::uint64_t seed : seeds) keys.push_back({n, seed});

  std::vector<SweepCell> cells(keys.size());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(keys.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      cells[i] = runner(keys[i].n, keys[i].seed);
  } else {
    // Embarrassingly parallel cells; each is deterministic on its own,
    // and merging by index keeps the record order independent of timing.
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= keys.size()) return;
        cells[i] = runner(keys[i].n, keys[i].seed);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepRecord record;
  record.rows = std::move(cells);
  std::stable_sort(record.rows.begin(), record.rows.end(),
                   [](const SweepCell& a, const SweepCell& b) {
                     return a.n != b.n ? a.n < b.n : a.seed < b.seed;
                   });

  std::vector<long long> sorted_n = n_values;
  std::sort(sorted_n.begin(), sorted_n.end());
  std::vector<std::pair<double, double>> fit_points;
  for (long long n : sorted_n) {
    std::vector<double> errors;
    for (const SweepCell& cell : record.rows)
      if (cell.n == n && !cell.failed) errors.push_back(cell.gen_error);
    if (errors.empty()) continue;
    const double med = median(errors);
    record.fit_n.push_back(n);
    record.fit_median_error.push_back(med);
    if (med > 0.0)
      fit_points.emplace_back(static_cast<double>(n), med);
  }
  if (fit_points.size() >= 2) {
    record.fit = fit_loglog_slope(fit_points);
    record.fit_valid = true;
  }
  return record;
}

}  // namespace opres
