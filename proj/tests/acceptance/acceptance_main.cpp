// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. argv[1] (optional) is the path of the opres CLI binary
// used by the reproducibility criterion; without it that criterion runs
// the commands in-process.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "opres/basis.hpp"
#include "opres/cli.hpp"
#include "opres/eval.hpp"
#include "opres/fnn.hpp"
#include "opres/io.hpp"
#include "opres/pca.hpp"
#include "opres/problems.hpp"
#include "opres/quadrature.hpp"
#include "opres/rng.hpp"
#include "opres/train.hpp"

using namespace opres;

namespace {

namespace fs = std::filesystem;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw CheckFailure(what);
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

struct Harness {
  int failures = 0;
  int index = 0;

  void run(const std::string& name, const std::function<void()>& body) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string message;
    bool ok = true;
    try {
      body();
    } catch (const std::exception& error) {
      ok = false;
      message = error.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok) {
      std::printf("PASS  criterion %2d  %-48s (%.1fs)\n", index, name.c_str(),
                  seconds);
    } else {
      ++failures;
      std::printf("FAIL  criterion %2d  %-48s (%.1fs)\n      %s\n", index,
                  name.c_str(), seconds, message.c_str());
    }
    std::fflush(stdout);
  }
};

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "opres_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckFailure("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

GridFunction unit_basis_fn(const BasisSpec& spec, int k, const GridPtr& grid) {
  std::vector<double> e(spec.encode_dim(), 0.0);
  e[k] = 1.0;
  return decode(spec, e, grid);
}

// ------------------------------------------------------------------
// Shared fixtures. Sizing constants, learning rates and epoch counts are
// frozen here; the criteria below use them as-is.

const char* kHeatFixtureConfig =
    "[problem]\n"
    "operator = heat\n"
    "t = 0.1\n"
    "mode_cap = 4\n"
    "noise_sigma = 0.0\n"
    "n_pairs = 2000\n"
    "data_seed = 1\n"
    "[discretization]\n"
    "grid_order = 32\n"
    "[encoder]\n"
    "kind = trig\n"
    "d_x = 10\n"
    "d_y = 10\n"
    "[architecture]\n"
    "class = unconstrained\n"
    "c_l = 0.3\n"
    "c_p = 8\n"
    "[training]\n"
    "optimizer = adam\n"
    "lr = 0.005\n"
    "epochs = 400\n"
    "batch_size = 32\n"
    "seed = 1\n"
    "lr_decay = 0.995\n"
    "[eval]\n"
    "n_test = 2000\n";

RunConfig heat_fixture() { return parse_config(kHeatFixtureConfig); }

const char* kMultiIndexFixtureBase =
    "[problem]\n"
    "operator = multi_index\n"
    "op_d0 = 1\n"
    "op_seed = 11\n"
    "op_links = sine\n"
    "input_law = decay\n"
    "amplitude = 1\n"
    "decay_beta = 2\n"
    "noise_sigma = 0.0\n"
    "n_pairs = 2000\n"
    "data_seed = 1\n"
    "[discretization]\n"
    "grid_order = 48\n"
    "[encoder]\n"
    "kind = trig\n"
    "d_x = 16\n"
    "d_y = 4\n"
    "[training]\n"
    "optimizer = adam\n"
    "lr = 0.005\n"
    "epochs = 400\n"
    "batch_size = 32\n"
    "seed = 1\n"
    "lr_decay = 0.995\n"
    "[eval]\n"
    "n_test = 1000\n";

struct PipelineResult {
  double gen_error = 0.0;
  long long parameters = 0;
};

PipelineResult run_pipeline(RunConfig config, std::uint64_t seed) {
  config.data_seed = seed;
  config.train_seed = seed;
  const cli::Problem problem = cli::assemble_problem(config);
  const Dataset data =
      generate_dataset(problem.input_law, problem.op, problem.noise_law,
                       config.n_pairs, seed, problem.grid);
  cli::TrainedModel model = cli::run_training(config, data);
  const Estimator est =
      std::holds_alternative<FnnParams>(model.checkpoint.network)
          ? make_estimator(model.checkpoint.encoders,
                           std::get<FnnParams>(model.checkpoint.network))
          : make_estimator(model.checkpoint.encoders,
                           std::get<MultiIndexFnn>(model.checkpoint.network));
  PipelineResult result;
  result.gen_error = evaluate(est, problem.op, problem.input_law, config.n_test,
                              config.effective_eval_seed(), problem.grid)
                         .gen_error;
  result.parameters = model.parameter_total;
  return result;
}

// ------------------------------------------------------------------

void criterion_quadrature_exactness() {
  Rng rng(1001);
  for (int m : {2, 4, 8, 16}) {
    const auto [nodes, weights] = gauss_legendre_rule(m);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> coeffs(2 * m);  // degree 2m-1
      for (double& c : coeffs) c = rng.symmetric_unit();
      double quad = 0.0;
      for (int i = 0; i < m; ++i) {
        double value = 0.0, power = 1.0;
        for (double c : coeffs) {
          value += c * power;
          power *= nodes[i];
        }
        quad += weights[i] * value;
      }
      double exact = 0.0;
      for (std::size_t j = 0; j < coeffs.size(); j += 2)
        exact += coeffs[j] * 2.0 / (static_cast<double>(j) + 1.0);
      require(std::abs(quad - exact) < 1e-9,
              "m=" + std::to_string(m) + " error " + fmt(std::abs(quad - exact)));
    }
  }
}

void criterion_orthonormality() {
  for (const BasisKind kind : {BasisKind::legendre, BasisKind::trigonometric}) {
    for (int dim = 1; dim <= 2; ++dim) {
      for (int order : {2, 4, 8}) {
        const BasisSpec spec{kind, dim, order};
        // the trig Gram needs quadrature headroom beyond the encode
        // precondition to resolve frequency-2r products to 1e-9
        const int m = kind == BasisKind::legendre
                          ? std::max(order + 1, 16)
                          : 2 * order + 12;
        const auto grid = make_grid(dim, m);
        const int d = spec.encode_dim();
        for (int a = 0; a < d; ++a) {
          const auto phi = unit_basis_fn(spec, a, grid);
          const std::vector<double> row = encode(spec, phi);
          for (int b = 0; b < d; ++b) {
            const double expected = a == b ? 1.0 : 0.0;
            require(std::abs(row[b] - expected) < 1e-9,
                    to_string(kind) + " D=" + std::to_string(dim) +
                        " r=" + std::to_string(order) + " gram(" +
                        std::to_string(a) + "," + std::to_string(b) +
                        ") off by " + fmt(std::abs(row[b] - expected)));
          }
        }
      }
    }
  }
}

void criterion_lemma_lipschitz_isometry() {
  Rng rng(2002);
  const auto grid = make_grid(1, 40);
  const BasisSpec span{BasisKind::trigonometric, 1, 8};

  const auto random_fn = [&](Rng& r) {
    std::vector<double> c(span.encode_dim());
    for (double& v : c) v = r.symmetric_unit();
    return decode(span, c, grid);
  };

  // basis encoder pair
  const EncoderPair basis{BasisEncoderPair{span, span}};

  // PCA pair fitted on random snapshots
  SnapshotSet snaps;
  for (int i = 0; i < 24; ++i) snaps.functions.push_back(random_fn(rng));
  const EncoderPair pca{PcaEncoderPair{fit_pca(snaps, 5), fit_pca(snaps, 5)}};

  for (const EncoderPair* pair : {&basis, &pca}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto u = random_fn(rng);
      const auto w = random_fn(rng);
      const auto eu = pair->encode_x(u);
      const auto ew = pair->encode_x(w);
      double csq = 0.0;
      for (std::size_t k = 0; k < eu.size(); ++k)
        csq += (eu[k] - ew[k]) * (eu[k] - ew[k]);
      require(std::sqrt(csq) <= distance(u, w) + 1e-8,
              "encoder Lipschitz violated: " + fmt(std::sqrt(csq)) + " > " +
                  fmt(distance(u, w)));

      std::vector<double> a(static_cast<std::size_t>(pair->d_x())),
          b(static_cast<std::size_t>(pair->d_x()));
      for (double& v : a) v = rng.symmetric_unit();
      for (double& v : b) v = rng.symmetric_unit();
      double absq = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k)
        absq += (a[k] - b[k]) * (a[k] - b[k]);
      const double fn_dist =
          distance(pair->decode_x(a, grid), pair->decode_x(b, grid));
      require(std::abs(fn_dist - std::sqrt(absq)) < 1e-9,
              "decoder isometry violated by " +
                  fmt(std::abs(fn_dist - std::sqrt(absq))));
    }
  }
}

void criterion_pca_spectral_identity() {
  Rng rng(3003);
  const auto grid = make_grid(1, 32);
  const BasisSpec span{BasisKind::trigonometric, 1, 9};
  for (int n : {12, 40, 64}) {
    SnapshotSet snaps;
    for (int i = 0; i < n; ++i) {
      std::vector<double> c(span.encode_dim());
      for (double& v : c) v = rng.symmetric_unit();
      snaps.functions.push_back(decode(span, c, grid));
    }
    for (int d : {1, 4, 8}) {
      const PcaModel model = fit_pca(snaps, d);
      double mean_sq = 0.0;
      for (const auto& u : snaps.functions) {
        const double r = distance(u, pca_project(model, u));
        mean_sq += r * r;
      }
      mean_sq /= n;
      require(std::abs(mean_sq - model.trailing_energy) < 1e-8,
              "n=" + std::to_string(n) + " d=" + std::to_string(d) +
                  " identity off by " +
                  fmt(std::abs(mean_sq - model.trailing_energy)));
    }
  }

  // exact-subspace data reconstructs to zero
  const auto phi_a = unit_basis_fn(span, 1, grid);
  const auto phi_b = unit_basis_fn(span, 4, grid);
  SnapshotSet planar;
  for (int i = 0; i < 16; ++i)
    planar.functions.push_back(
        axpy(rng.symmetric_unit(), phi_a,
             axpy(rng.symmetric_unit(), phi_b, zero_function(grid))));
  const PcaModel model = fit_pca(planar, 2);
  for (const auto& u : planar.functions)
    require(distance(u, pca_project(model, u)) < 1e-9,
            "exact-subspace residual above 1e-9");
}

void criterion_gradient_correctness() {
  Rng rng(4004);

  const auto loss_of = [](const std::vector<double>& out,
                          const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j)
      acc += 0.5 * (out[j] - y[j]) * (out[j] - y[j]);
    return acc;
  };

  int plain_checked = 0;
  while (plain_checked < 14) {
    const int width = 2 + static_cast<int>(rng.below(7));
    const int depth = 2 + static_cast<int>(rng.below(3));
    std::vector<int> sizes{4};
    for (int l = 0; l < depth - 1; ++l) sizes.push_back(width);
    sizes.push_back(3);
    FnnParams net;
    net.clip_bound = 5.0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      FnnLayer layer;
      layer.in_dim = sizes[l];
      layer.out_dim = sizes[l + 1];
      layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
      layer.biases.resize(layer.out_dim);
      for (double& w : layer.weights) w = rng.symmetric_unit();
      for (double& b : layer.biases) b = 0.3 * rng.symmetric_unit();
      net.layers.push_back(std::move(layer));
    }
    std::vector<double> x(4), y(3);
    for (double& v : x) v = rng.symmetric_unit();
    for (double& v : y) v = rng.symmetric_unit();

    FnnWorkspace ws;
    std::vector<double> out;
    fnn_forward(net, x, ws, out);
    double margin = 1e300;
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l)
      for (double v : ws.pre[l]) margin = std::min(margin, std::abs(v));
    for (double v : ws.pre.back())
      margin = std::min(margin, std::abs(std::abs(v) - net.clip_bound));
    if (margin < 1e-3) continue;
    ++plain_checked;

    std::vector<double> upstream(3);
    for (int j = 0; j < 3; ++j) upstream[j] = out[j] - y[j];
    FnnParams grads = zeros_like(net);
    fnn_backward(net, ws, x, upstream, grads);

    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      auto& layer = net.layers[l];
      for (std::size_t i = 0; i < layer.weights.size(); i += 2) {
        const double saved = layer.weights[i];
        layer.weights[i] = saved + 1e-5;
        const double up = loss_of(fnn_forward(net, x), y);
        layer.weights[i] = saved - 1e-5;
        const double down = loss_of(fnn_forward(net, x), y);
        layer.weights[i] = saved;
        const double numeric = (up - down) / 2e-5;
        const double analytic = grads.layers[l].weights[i];
        require(std::abs(numeric - analytic) <=
                    1e-5 * std::max(1.0, std::abs(numeric)),
                "plain net grad mismatch " + fmt(numeric) + " vs " +
                    fmt(analytic));
      }
    }
  }

  int multi_checked = 0;
  int attempt = 0;
  while (multi_checked < 6) {
    MultiIndexFnn net =
        init_multi_index(6, 2, 3, 2 + static_cast<int>(rng.below(2)),
                         3 + static_cast<int>(rng.below(5)), 8.0, 5000 + attempt++);
    std::vector<double> x(6), y(3);
    for (double& v : x) v = rng.symmetric_unit();
    for (double& v : y) v = rng.symmetric_unit();

    // stay away from head kinks
    double margin = 1e300;
    for (const auto& head : net.heads) {
      std::vector<double> features(net.d0, 0.0);
      for (int i = 0; i < net.d_x; ++i)
        for (int j = 0; j < net.d0; ++j)
          features[j] += head.projection[i * net.d0 + j] * x[i];
      FnnParams mlp;
      mlp.clip_bound = net.clip_bound;
      mlp.layers = head.mlp;
      FnnWorkspace ws;
      std::vector<double> out;
      fnn_forward(mlp, features, ws, out);
      for (std::size_t l = 0; l + 1 < mlp.layers.size(); ++l)
        for (double v : ws.pre[l]) margin = std::min(margin, std::abs(v));
      for (double v : ws.pre.back())
        margin = std::min(margin, std::abs(std::abs(v) - net.clip_bound));
    }
    if (margin < 1e-3) continue;
    ++multi_checked;

    const auto out = multi_index_forward(net, x);
    std::vector<double> upstream(3);
    for (int j = 0; j < 3; ++j) upstream[j] = out[j] - y[j];
    MultiIndexFnn grads = zeros_like(net);
    multi_index_backward(net, x, upstream, grads);

    for (std::size_t k = 0; k < net.heads.size(); ++k) {
      auto& head = net.heads[k];
      for (std::size_t i = 0; i < head.projection.size(); ++i) {
        const double saved = head.projection[i];
        head.projection[i] = saved + 1e-5;
        const double up = loss_of(multi_index_forward(net, x), y);
        head.projection[i] = saved - 1e-5;
        const double down = loss_of(multi_index_forward(net, x), y);
        head.projection[i] = saved;
        const double numeric = (up - down) / 2e-5;
        const double analytic = grads.heads[k].projection[i];
        require(std::abs(numeric - analytic) <=
                    1e-5 * std::max(1.0, std::abs(numeric)),
                "multi-index projection grad mismatch " + fmt(numeric) +
                    " vs " + fmt(analytic));
      }
      for (std::size_t l = 0; l < head.mlp.size(); ++l) {
        auto& layer = head.mlp[l];
        for (std::size_t i = 0; i < layer.weights.size(); i += 2) {
          const double saved = layer.weights[i];
          layer.weights[i] = saved + 1e-5;
          const double up = loss_of(multi_index_forward(net, x), y);
          layer.weights[i] = saved - 1e-5;
          const double down = loss_of(multi_index_forward(net, x), y);
          layer.weights[i] = saved;
          const double numeric = (up - down) / 2e-5;
          const double analytic = grads.heads[k].mlp[l].weights[i];
          require(std::abs(numeric - analytic) <=
                      1e-5 * std::max(1.0, std::abs(numeric)),
                  "multi-index head grad mismatch " + fmt(numeric) + " vs " +
                      fmt(analytic));
        }
      }
    }
  }
}

void criterion_sizing_arithmetic() {
  const UnconstrainedSizing dense = size_unconstrained(1024, 2, 4, 1.0, 1.0);
  require(dense.target_product == 4,
          "unconstrained target product " +
              std::to_string(dense.target_product) + " != 4");
  const ConstrainedArch constrained =
      size_constrained(1024, 2, 4, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
  require(constrained.width == 16,
          "constrained width " + std::to_string(constrained.width) + " != 16");
  require(constrained.depth == 12,
          "constrained depth " + std::to_string(constrained.depth) + " != 12");
}

void criterion_end_to_end_heat() {
  const RunConfig config = heat_fixture();
  const cli::Problem problem = cli::assemble_problem(config);

  // relative-error denominator E||Psi(u)||^2 by Monte Carlo
  Rng rng(999);
  double denom = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto u = sample_input(problem.input_law, rng, problem.grid);
    const double nn = norm(apply_operator(problem.op, u));
    denom += nn * nn;
  }
  denom /= 2000.0;

  std::vector<double> rel_errors;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PipelineResult result = run_pipeline(config, seed);
    rel_errors.push_back(std::sqrt(result.gen_error / denom));
  }
  const double med = median(rel_errors);
  std::printf("      heat fixture: median relative error %.4g over 3 seeds\n",
              med);
  require(med < 0.05, "median relative error " + fmt(med) + " >= 0.05");
}

void criterion_decomposition_inequality() {
  const auto grid32 = make_grid(1, 32);
  const auto grid48 = make_grid(1, 48);

  struct Fixture {
    OperatorSpec op;
    InputLaw law;
    EncoderPair encoders;
    GridPtr grid;
  };
  std::vector<Fixture> fixtures;

  // lossless heat
  const OperatorSpec heat = HeatSemigroupOp{0.1, 4};
  fixtures.push_back(
      {heat, InputLaw{make_operator_span_decay_law(heat, 1.0, 2.0)},
       EncoderPair{BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 10},
                                    BasisSpec{BasisKind::trigonometric, 1, 10}}},
       grid32});
  // lossy-Y heat at mild damping
  const OperatorSpec warm = HeatSemigroupOp{0.02, 4};
  fixtures.push_back(
      {warm, InputLaw{make_operator_span_decay_law(warm, 1.0, 1.0)},
       EncoderPair{BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 10},
                                    BasisSpec{BasisKind::trigonometric, 1, 6}}},
       grid32});
  // shift
  const OperatorSpec shift = ShiftOp{0.3, 3};
  fixtures.push_back(
      {shift, InputLaw{make_operator_span_decay_law(shift, 1.0, 2.0)},
       EncoderPair{BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 7},
                                    BasisSpec{BasisKind::trigonometric, 1, 5}}},
       grid32});
  // multi-index
  {
    const InputLaw law{
        make_decay_law(BasisSpec{BasisKind::trigonometric, 1, 16}, 1.0, 2.0)};
    const OperatorSpec op = make_multi_index_op(
        16, 4, 1, std::vector<ScalarFn>(4, ScalarFn{ScalarFnKind::sine_sum}),
        law_radius(law), 11);
    fixtures.push_back(
        {op, law,
         EncoderPair{BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 16},
                                      BasisSpec{BasisKind::trigonometric, 1, 4}}},
         grid48});
  }
  // manifold inputs through the heat map
  {
    ManifoldLaw law;
    law.d0 = 2;
    law.box_halfwidth = 0.5;
    law.spec = BasisSpec{BasisKind::trigonometric, 1, 9};
    law.maps.assign(7, ScalarFn{ScalarFnKind::sine_sum});
    // manifold coefficients include the constant mode, so pair with the
    // multi-index operator (whose domain is unrestricted)
    const OperatorSpec op = make_multi_index_op(
        9, 3, 2, std::vector<ScalarFn>(3, ScalarFn{ScalarFnKind::cosine_sum}),
        law_radius(InputLaw{law}), 13);
    fixtures.push_back(
        {op, InputLaw{law},
         EncoderPair{BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 9},
                                      BasisSpec{BasisKind::trigonometric, 1, 3}}},
         grid32});
  }
  // PCA encoders on the heat problem
  {
    const InputLaw law{make_operator_span_decay_law(heat, 1.0, 2.0)};
    Rng rng(77);
    SnapshotSet in_snaps, out_snaps;
    for (int i = 0; i < 32; ++i) {
      auto u = sample_input(law, rng, grid32);
      out_snaps.functions.push_back(apply_operator(heat, u));
      in_snaps.functions.push_back(std::move(u));
    }
    fixtures.push_back({heat, law,
                        EncoderPair{PcaEncoderPair{fit_pca(in_snaps, 5),
                                                   fit_pca(out_snaps, 5)}},
                        grid32});
  }

  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const Fixture& fx = fixtures[f];
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      // deliberately bad random-weight estimator
      const FnnParams random_net =
          init_params(ArchClass{UnconstrainedArch{3, 16, 1.0}},
                      fx.encoders.d_x(), fx.encoders.d_y(), seed);
      const Estimator bad = make_estimator(fx.encoders, random_net);
      const double slack =
          check_decomposition(bad, fx.op, fx.law, 32, seed, fx.grid);
      require(slack >= -1e-8, "fixture " + std::to_string(f) + " seed " +
                                  std::to_string(seed) + " slack " + fmt(slack));

      const Estimator exact = make_exact_estimator(fx.encoders, fx.op, fx.grid);
      const double exact_slack =
          check_decomposition(exact, fx.op, fx.law, 32, seed, fx.grid);
      require(exact_slack >= -1e-8, "exact estimator slack " + fmt(exact_slack));
    }
  }
}

void criterion_rate_sweep() {
  RunConfig config = heat_fixture();
  config.noise_sigma = 0.1;  // noise makes the estimation error n-driven
  config.sweep_n = {128, 512, 2048};
  config.seeds_per_n = 3;
  const SweepRecord record = cli::sweep_record(config, 4);

  require(record.fit_n.size() == 3, "expected 3 fitted n values");
  for (std::size_t i = 0; i + 1 < record.fit_median_error.size(); ++i)
    require(record.fit_median_error[i] > record.fit_median_error[i + 1],
            "medians not strictly decreasing: " +
                fmt(record.fit_median_error[i]) + " -> " +
                fmt(record.fit_median_error[i + 1]));
  require(record.fit_valid, "slope fit missing");
  std::printf("      sweep slope %.4f (band target <= -0.3, assert <= -0.05)\n",
              record.fit.slope);
  require(record.fit.slope <= -0.05,
          "slope " + fmt(record.fit.slope) + " > -0.05");
}

void criterion_multi_index_advantage() {
  const RunConfig full = parse_config(
      std::string(kMultiIndexFixtureBase) +
      "[architecture]\nclass = unconstrained\nc_l = 0.3\nc_p = 8\n");
  const RunConfig multi = parse_config(
      std::string(kMultiIndexFixtureBase) +
      "[architecture]\nclass = multi_index\nnet_d0 = 1\nc_l = 0.3\nc_p = 8\n");

  std::vector<double> full_errors, multi_errors;
  long long full_params = 0, multi_params = 0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PipelineResult f = run_pipeline(full, seed);
    const PipelineResult m = run_pipeline(multi, seed);
    full_errors.push_back(f.gen_error);
    multi_errors.push_back(m.gen_error);
    full_params = f.parameters;
    multi_params = m.parameters;
  }
  const double full_med = median(full_errors);
  const double multi_med = median(multi_errors);
  std::printf(
      "      parameters: full=%lld multi=%lld (%.1f%%); median gen_error: "
      "full=%.4g multi=%.4g\n",
      full_params, multi_params,
      100.0 * static_cast<double>(multi_params) / full_params, full_med,
      multi_med);
  require(multi_params * 4 <= full_params,
          "multi-index uses more than 25% of the full parameter count");
  require(multi_med <= 1.5 * full_med,
          "multi-index median error " + fmt(multi_med) + " > 1.5x full " +
              fmt(full_med));
}

void criterion_noise_floor() {
  const OperatorSpec heat = HeatSemigroupOp{0.1, 4};
  const auto grid = make_grid(1, 32);
  const InputLaw law{make_operator_span_decay_law(heat, 1.0, 2.0)};
  const double sigma = 0.1;
  const NoiseLaw noise = make_noise_law(heat, sigma);

  // lossless d_y = 10 and lossy d_y = 6 encoder pairs, exact encoded map
  for (int r_y : {10, 6}) {
    const EncoderPair encoders{
        BasisEncoderPair{BasisSpec{BasisKind::trigonometric, 1, 10},
                         BasisSpec{BasisKind::trigonometric, 1, r_y}}};
    const Estimator exact = make_exact_estimator(encoders, heat, grid);
    const EvalReport report = evaluate(exact, heat, law, 2000, 515, grid);
    const double tolerance =
        3.0 * (report.gen_error_stderr + report.proj_error_y_stderr) + 1e-12;
    require(std::abs(report.gen_error - report.proj_error_y) <= tolerance,
            "d_y=" + std::to_string(r_y) + ": |gen - proj_y| = " +
                fmt(std::abs(report.gen_error - report.proj_error_y)) + " > " +
                fmt(tolerance));
  }

  // Assumption-level check: encoded noise has tiny empirical mean
  const BasisSpec span_y{BasisKind::trigonometric, 1, 10};
  const int n_mc = 10000;
  Rng rng(616);
  std::vector<double> mean(span_y.encode_dim(), 0.0);
  for (int i = 0; i < n_mc; ++i) {
    const auto eps = sample_noise(noise, rng, grid);
    const std::vector<double> enc = encode(span_y, eps);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += enc[k];
  }
  double mean_norm = 0.0;
  for (double& v : mean) {
    v /= n_mc;
    mean_norm += v * v;
  }
  mean_norm = std::sqrt(mean_norm);
  const double bound = 3.0 * sigma * std::sqrt(10.0 / n_mc);
  require(mean_norm <= bound,
          "encoded-noise mean norm " + fmt(mean_norm) + " > " + fmt(bound));
}

void criterion_cli_reproducibility(const std::string& cli_path) {
  const fs::path dir = work_dir() / "repro";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::string config_text{kHeatFixtureConfig};
  // shrink the fixture so four command pairs stay fast
  const auto replace = [&config_text](const std::string& from,
                                      const std::string& to) {
    const std::size_t at = config_text.find(from);
    require(at != std::string::npos, "fixture key missing: " + from);
    config_text.replace(at, from.size(), to);
  };
  replace("n_pairs = 2000", "n_pairs = 64");
  replace("epochs = 400", "epochs = 40");
  replace("batch_size = 32", "batch_size = 8");
  replace("n_test = 2000", "n_test = 100");
  config_text += "\n[sweep]\nn_list = 16,32,64\nseeds_per_n = 1\n";
  const fs::path config_path = dir / "fixture.ini";
  std::ofstream(config_path) << config_text;

  const auto run = [&](const std::string& args) {
    if (cli_path.empty()) {
      require(false, "cli path not provided");
      return;
    }
    const std::string command =
        "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
    require(std::system(command.c_str()) == 0, "command failed: " + command);
  };

  const std::string c = " --config \"" + config_path.string() + "\"";
  for (int round = 1; round <= 2; ++round) {
    const std::string tag = std::to_string(round);
    run("gen-data" + c + " --out " + (dir / ("data" + tag + ".opd")).string());
    run("train" + c + " --data " + (dir / ("data" + tag + ".opd")).string() +
        " --out " + (dir / ("model" + tag + ".opm")).string());
    run("eval" + c + " --model " + (dir / ("model" + tag + ".opm")).string() +
        " --out " + (dir / ("eval" + tag + ".csv")).string());
    run("sweep" + c + " --threads 2 --out " + (dir / ("sweep" + tag)).string());
  }

  require(slurp(dir / "data1.opd") == slurp(dir / "data2.opd"),
          "datasets differ between runs");
  require(slurp(dir / "model1.opm") == slurp(dir / "model2.opm"),
          "checkpoints differ between runs");
  require(slurp(dir / "model1.opm.trace.csv") ==
              slurp(dir / "model2.opm.trace.csv"),
          "training traces differ between runs");
  require(slurp(dir / "eval1.csv") == slurp(dir / "eval2.csv"),
          "eval reports differ between runs");
  require(slurp(dir / "sweep1.svg") == slurp(dir / "sweep2.svg"),
          "sweep SVGs differ between runs");

  // the sweep CSV carries measured wall_ms per row; every other byte must
  // match (drop the last column of data rows before comparing)
  const auto strip_wall = [](const std::string& text) {
    std::string out;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(start, end - start);
      if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos)
        line = line.substr(0, line.rfind(','));
      out += line;
      out += '\n';
      start = end + 1;
    }
    return out;
  };
  require(strip_wall(slurp(dir / "sweep1.csv")) ==
              strip_wall(slurp(dir / "sweep2.csv")),
          "sweep CSVs differ between runs beyond wall_ms");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";
  Harness harness;

  harness.run("quadrature exactness", criterion_quadrature_exactness);
  harness.run("encoder orthonormality", criterion_orthonormality);
  harness.run("encoder Lipschitz / decoder isometry",
              criterion_lemma_lipschitz_isometry);
  harness.run("PCA spectral identity", criterion_pca_spectral_identity);
  harness.run("gradient correctness", criterion_gradient_correctness);
  harness.run("architecture sizing arithmetic", criterion_sizing_arithmetic);
  harness.run("end-to-end heat learning", criterion_end_to_end_heat);
  harness.run("decomposition inequality", criterion_decomposition_inequality);
  harness.run("monotone rate sweep", criterion_rate_sweep);
  harness.run("multi-index intrinsic-dimension advantage",
              criterion_multi_index_advantage);
  harness.run("noise floor with exact encoded map", criterion_noise_floor);
  harness.run("CLI byte-level reproducibility",
              [&] { criterion_cli_reproducibility(cli_path); });

  std::printf("acceptance: %d criteria, %d failed\n", harness.index,
              harness.failures);
  return harness.failures == 0 ? 0 : 1;
}
