#include "opres/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "opres/errors.hpp"

namespace opres::cli {

namespace {

int basis_order_for(const RunConfig& config, int d) {
  const double root = std::pow(static_cast<double>(d), 1.0 / config.dim);
  return static_cast<int>(std::lround(root));
}

std::vector<ScalarFn> named_links(const std::vector<std::string>& names, int count,
                                  const char* fallback) {
  std::vector<ScalarFn> links;
  if (names.empty()) {
    links.assign(count, scalar_fn_from_name(fallback));
  } else if (names.size() == 1) {
    links.assign(count, scalar_fn_from_name(names[0]));
  } else {
    for (const std::string& name : names) links.push_back(scalar_fn_from_name(name));
  }
  return links;
}

}  // namespace

Problem assemble_problem(const RunConfig& config) {
  Problem problem;

  // Input law radius is needed before the multi-index operator exists
  // (its stored Lipschitz constants depend on it), so build laws first.
  InputLaw law_placeholder = CoefficientDecayLaw{};
  if (config.operator_kind == "heat" || config.operator_kind == "shift") {
    OperatorSpec op;
    if (config.operator_kind == "heat")
      op = HeatSemigroupOp{config.heat_t, config.mode_cap};
    else
      op = ShiftOp{config.shift_s, config.mode_cap};
    if (config.input_law != "decay")
      throw ConfigError("heat/shift operators require the decay input law");
    problem.input_law =
        make_operator_span_decay_law(op, config.amplitude, config.decay_beta);
    problem.op = op;
  } else {
    const BasisSpec in_spec{BasisKind::trigonometric, 1, config.d_x};
    if (config.input_law == "decay") {
      problem.input_law = make_decay_law(in_spec, config.amplitude, config.decay_beta);
    } else {
      ManifoldLaw law;
      law.d0 = config.manifold_d0;
      law.box_halfwidth = config.manifold_box;
      law.spec = in_spec;
      const int free = config.d_x - config.manifold_d0;
      if (free < 1)
        throw ConfigError("manifold law needs d_x > manifold_d0");
      const std::vector<ScalarFn> maps =
          named_links(config.manifold_maps, free, "quadratic");
      if (static_cast<int>(maps.size()) != free)
        throw ConfigError("manifold law needs d_x - manifold_d0 = " +
                          std::to_string(free) + " maps");
      law.maps = maps;
      problem.input_law = law;
    }
    const double radius = law_radius(problem.input_law);
    const std::vector<ScalarFn> links = named_links(config.op_links, config.d_y, "sine");
    if (static_cast<int>(links.size()) != config.d_y)
      throw ConfigError("[problem] op_links: need 1 name or exactly d_y names");
    problem.op = make_multi_index_op(config.d_x, config.d_y, config.op_d0, links,
                                     radius, config.op_seed);
  }

  problem.input_radius = law_radius(problem.input_law);
  problem.lipschitz = operator_lipschitz_constant(problem.op);
  problem.output_radius = operator_output_radius(problem.op, problem.input_radius);
  problem.noise_law = make_noise_law(problem.op, config.noise_sigma);

  // Grid: honor an explicit order, otherwise take the smallest order all
  // encoders and operator spans accept, floored at 16.
  int order = config.grid_order;
  if (order == 0) {
    order = 16;
    const auto cover = [&order](const BasisSpec& spec) {
      order = std::max(order, spec.min_grid_order());
    };
    cover(operator_output_span(problem.op));
    if (const auto* decay = std::get_if<CoefficientDecayLaw>(&problem.input_law))
      cover(decay->spec);
    else
      cover(std::get<ManifoldLaw>(problem.input_law).spec);
    if (config.encoder_kind != "pca") {
      const BasisKind kind = config.encoder_kind == "legendre"
                                 ? BasisKind::legendre
                                 : BasisKind::trigonometric;
      cover(BasisSpec{kind, config.dim, basis_order_for(config, config.d_x)});
      cover(BasisSpec{kind, config.dim, basis_order_for(config, config.d_y)});
    }
    if (std::holds_alternative<MultiIndexTrigOp>(problem.op)) {
      cover(BasisSpec{BasisKind::trigonometric, 1, config.d_x});
    }
  }
  problem.grid = make_grid(config.dim, order);
  return problem;
}

Stage1Choice encoder_choice(const RunConfig& config) {
  if (config.encoder_kind == "pca")
    return PcaStage1Choice{config.d_x, config.d_y};
  const BasisKind kind = config.encoder_kind == "legendre"
                             ? BasisKind::legendre
                             : BasisKind::trigonometric;
  BasisStage1Choice choice;
  choice.spec_x = BasisSpec{kind, config.dim, basis_order_for(config, config.d_x)};
  choice.spec_y = BasisSpec{kind, config.dim, basis_order_for(config, config.d_y)};
  return choice;
}

namespace {

TrainConfig training_config(const RunConfig& config) {
  TrainConfig cfg;
  if (config.optimizer == "sgd")
    cfg.optimizer = SgdConfig{config.lr, config.momentum};
  else
    cfg.optimizer = AdamConfig{config.lr, config.beta1, config.beta2,
                               config.eps_adam};
  cfg.batch_size = config.batch_size;
  cfg.epochs = config.epochs;
  cfg.seed = config.train_seed;
  cfg.lr_decay = config.lr_decay;
  return cfg;
}

std::string describe_arch(const ArchClass& arch) {
  char buffer[160];
  if (const auto* c = std::get_if<ConstrainedArch>(&arch)) {
    std::snprintf(buffer, sizeof buffer,
                  "constrained L=%d p=%d K=%lld kappa=%.6g M=%.6g", c->depth,
                  c->width, c->max_nonzero, c->weight_bound, c->clip_bound);
  } else {
    const auto& u = std::get<UnconstrainedArch>(arch);
    std::snprintf(buffer, sizeof buffer, "unconstrained L=%d p=%d M=%.6g",
                  u.depth, u.width, u.clip_bound);
  }
  return buffer;
}

}  // namespace

TrainedModel run_training(const RunConfig& config, const Dataset& dataset) {
  const Problem problem = assemble_problem(config);

  if (dataset.grid->dim != config.dim)
    throw DimensionError("dataset grid dimension does not match config");

  auto [s1, s2] = split(dataset, config.split_fraction);
  const EncoderPair encoders = stage1(s1, encoder_choice(config));
  const EncodedDataset encoded = encode_dataset(s2, encoders);
  const long long n_train = static_cast<long long>(encoded.size());

  TrainConfig cfg = training_config(config);
  TrainedModel result;
  result.checkpoint.grid = dataset.grid;
  result.checkpoint.encoders = encoders;

  const double radius_y = problem.output_radius;

  if (config.arch_class == "multi_index") {
    int head_depth, head_width;
    double clip;
    if (config.head_depth && config.head_width) {
      head_depth = *config.head_depth;
      head_width = *config.head_width;
      clip = std::sqrt(static_cast<double>(config.d_y)) * radius_y;
    } else {
      // Size the heads by the intrinsic dimension: the sample-count
      // exponent uses net_d0 instead of d_x.
      const UnconstrainedSizing sizing =
          size_unconstrained(n_train, config.net_d0, config.d_y, radius_y, 1.0,
                             config.c_l, config.c_p);
      head_depth = config.head_depth.value_or(sizing.arch.depth);
      head_width = config.head_width.value_or(sizing.arch.width);
      clip = sizing.arch.clip_bound;
    }
    MultiIndexFnn net = init_multi_index(encoded.d_x, config.net_d0, encoded.d_y,
                                         head_depth, head_width, clip, cfg.seed);
    auto trained = stage2(encoded, std::move(net), cfg);
    result.final_risk = trained.trace.best_risk;
    result.trace = std::move(trained.trace);
    result.parameter_total = parameter_count(trained.net);
    char buffer[160];
    std::snprintf(buffer, sizeof buffer,
                  "multi_index heads=%d d0=%d head_L=%d head_p=%d M=%.6g",
                  encoded.d_y, config.net_d0, head_depth, head_width, clip);
    result.arch_summary = buffer;
    result.checkpoint.network = std::move(trained.net);
  } else {
    ArchClass arch;
    if (config.arch_class == "constrained") {
      ConstrainedArch sized = size_constrained(
          n_train, encoded.d_x, encoded.d_y, problem.input_radius, radius_y, 1.0,
          1.0, 1.0, problem.lipschitz, config.c_l, config.c_p, config.c_k);
      if (config.depth) sized.depth = *config.depth;
      if (config.width) sized.width = *config.width;
      cfg.clamp_kappa = sized.weight_bound;
      arch = sized;
    } else {
      UnconstrainedSizing sizing = size_unconstrained(
          n_train, encoded.d_x, encoded.d_y, radius_y, 1.0, config.c_l, config.c_p);
      if (config.depth) sizing.arch.depth = *config.depth;
      if (config.width) sizing.arch.width = *config.width;
      arch = sizing.arch;
    }
    auto trained = stage2(encoded, arch, cfg);
    result.final_risk = trained.trace.best_risk;
    result.trace = std::move(trained.trace);
    result.parameter_total = parameter_count(trained.net);
    result.arch_summary = describe_arch(arch);
    result.clamp_kappa = cfg.clamp_kappa;
    if (cfg.clamp_kappa) {
      char buffer[64];
      std::snprintf(buffer, sizeof buffer, " max|theta|=%.6g",
                    max_abs_parameter(trained.net));
      result.arch_summary += buffer;
    }
    result.checkpoint.network = std::move(trained.net);
  }

  result.checkpoint.metadata["operator"] = operator_id(problem.op);
  result.checkpoint.metadata["train_seed"] = std::to_string(cfg.seed);
  result.checkpoint.metadata["final_risk"] = format_double(result.final_risk);
  return result;
}

void cmd_gen_data(const RunConfig& config, const std::string& out_path) {
  const Problem problem = assemble_problem(config);
  Dataset dataset = generate_dataset(problem.input_law, problem.op,
                                     problem.noise_law, config.n_pairs,
                                     config.data_seed, problem.grid);
  double max_norm = 0.0;
  for (const GridFunction& u : dataset.inputs)
    max_norm = std::max(max_norm, norm(u));
  write_dataset(out_path, dataset,
                {{"input_law", input_law_id(problem.input_law)},
                 {"law_radius", format_double(problem.input_radius)}});
  std::printf("gen-data: wrote %d pairs to %s\n", config.n_pairs, out_path.c_str());
  std::printf("gen-data: empirical max ||u|| = %.6g (law radius %.6g), sigma = %.6g\n",
              max_norm, problem.input_radius, config.noise_sigma);
}

void cmd_train(const RunConfig& config, const std::string& dataset_path,
               const std::string& out_path) {
  LoadedDataset loaded = read_dataset(dataset_path);
  TrainedModel model = run_training(config, loaded.dataset);
  write_checkpoint(out_path, model.checkpoint);
  write_trace_csv(out_path + ".trace.csv", model.trace);
  std::printf("train: %s\n", model.arch_summary.c_str());
  std::printf("train: parameters = %lld\n", model.parameter_total);
  std::printf("train: final risk = %.17g (epoch %d)\n", model.final_risk,
              model.trace.best_epoch);
  std::printf("train: wrote %s and %s.trace.csv\n", out_path.c_str(),
              out_path.c_str());
}

namespace {

Estimator estimator_from_checkpoint(const Checkpoint& checkpoint) {
  if (const auto* fnn = std::get_if<FnnParams>(&checkpoint.network))
    return make_estimator(checkpoint.encoders, *fnn);
  return make_estimator(checkpoint.encoders,
                        std::get<MultiIndexFnn>(checkpoint.network));
}

}  // namespace

void cmd_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& out_path) {
  const Problem problem = assemble_problem(config);
  Checkpoint checkpoint = read_checkpoint(checkpoint_path);
  if (checkpoint.encoders.d_x() != config.d_x ||
      checkpoint.encoders.d_y() != config.d_y)
    throw DimensionError("checkpoint encoder dims (" +
                         std::to_string(checkpoint.encoders.d_x()) + "," +
                         std::to_string(checkpoint.encoders.d_y()) +
                         ") do not match config (" + std::to_string(config.d_x) +
                         "," + std::to_string(config.d_y) + ")");
  if (checkpoint.grid->dim != problem.grid->dim ||
      checkpoint.grid->order != problem.grid->order)
    throw DimensionError("checkpoint grid does not match config discretization");

  const Estimator est = estimator_from_checkpoint(checkpoint);
  const EvalReport report =
      evaluate(est, problem.op, problem.input_law, config.n_test,
               config.effective_eval_seed(), checkpoint.grid);
  write_eval_csv(out_path, report);
  std::printf("eval: gen_error = %.17g\n", report.gen_error);
  std::printf("eval: proj_x = %.17g proj_y = %.17g\n", report.proj_error_x,
              report.proj_error_y);
  std::printf("eval: encoded_err = %.17g\n", report.encoded_space_error);
  std::printf("eval: decomposition_slack = %.17g\n", report.decomposition_slack);
  std::printf("eval: wrote %s\n", out_path.c_str());
}

SweepRecord sweep_record(const RunConfig& config, int threads) {
  if (config.sweep_n.size() < 3)
    throw ConfigError("[sweep] n_list: need at least 3 n values");

  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < config.seeds_per_n; ++s)
    seeds.push_back(config.data_seed + static_cast<std::uint64_t>(s));

  SweepCellRunner runner = [&config](long long n, std::uint64_t seed) {
    SweepCell cell;
    cell.n = n;
    cell.seed = seed;
    if (config.inject_power) {
      // Synthetic power-law mode: exercises the record/fit/plot path
      // without training.
      cell.gen_error =
          config.inject_coeff *
          std::pow(static_cast<double>(n), *config.inject_power);
      return cell;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      RunConfig cell_config = config;
      cell_config.n_pairs = static_cast<int>(n);
      cell_config.data_seed = seed;
      cell_config.train_seed = seed;
      cell_config.eval_seed.reset();
      const Problem problem = assemble_problem(cell_config);
      Dataset dataset = generate_dataset(problem.input_law, problem.op,
                                         problem.noise_law, cell_config.n_pairs,
                                         seed, problem.grid);
      TrainedModel model = run_training(cell_config, dataset);
      const Estimator est = estimator_from_checkpoint(model.checkpoint);
      const EvalReport report =
          evaluate(est, problem.op, problem.input_law, cell_config.n_test,
                   cell_config.effective_eval_seed(), problem.grid);
      cell.gen_error = report.gen_error;
      cell.proj_x = report.proj_error_x;
      cell.proj_y = report.proj_error_y;
      cell.encoded_err = report.encoded_space_error;
      cell.train_risk = model.final_risk;
    } catch (const Error& error) {
      cell.failed = true;
      cell.message = error.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    cell.wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    return cell;
  };

  return rate_sweep(config.sweep_n, seeds, runner, threads);
}

double cmd_sweep(const RunConfig& config, const std::string& out_base,
                 int threads) {
  const SweepRecord record = sweep_record(config, threads);
  write_sweep_csv(out_base + ".csv", record);
  write_sweep_svg(out_base + ".svg", record);

  std::size_t ok = 0;
  for (const SweepCell& cell : record.rows)
    if (!cell.failed) ++ok;
  const double success = static_cast<double>(ok) / record.rows.size();
  for (std::size_t i = 0; i < record.fit_n.size(); ++i)
    std::printf("sweep: n = %lld median gen_error = %.17g\n", record.fit_n[i],
                record.fit_median_error[i]);
  if (record.fit_valid)
    std::printf("sweep: fitted log-log slope = %.17g (intercept %.17g)\n",
                record.fit.slope, record.fit.intercept);
  std::printf("sweep: %zu/%zu cells ok; wrote %s.csv and %s.svg\n", ok,
              record.rows.size(), out_base.c_str(), out_base.c_str());
  return success;
}

namespace {

struct ParsedArgs {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string data_path;
  std::string model_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

const char* kUsage =
    "usage: opres <gen-data|train|eval|sweep> --config <path> [options]\n"
    "\n"
    "subcommands:\n"
    "  gen-data  --config c.ini --out data.opd          write a dataset\n"
    "  train     --config c.ini --data data.opd --out model.opm\n"
    "  eval      --config c.ini --model model.opm --out report.csv\n"
    "  sweep     --config c.ini --out sweepbase         writes .csv and .svg\n"
    "\n"
    "options:\n"
    "  --config <path>   run configuration (required)\n"
    "  --out <path>      output path (or [output] out in the config)\n"
    "  --data <path>     dataset file for train\n"
    "  --model <path>    checkpoint file for eval\n"
    "  --seed <u64>      override data and training seeds\n"
    "  --threads <k>     sweep parallelism (or OPRES_THREADS)\n";

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    ParsedArgs parsed;
    std::size_t index = 0;
    if (index < args.size() && !args[index].empty() && args[index][0] != '-')
      parsed.command = args[index++];
    for (; index < args.size(); ++index) {
      const std::string& flag = args[index];
      const auto next = [&]() -> const std::string& {
        if (index + 1 >= args.size())
          throw ConfigError("flag " + flag + " expects a value");
        return args[++index];
      };
      if (flag == "--config") parsed.config_path = next();
      else if (flag == "--out") parsed.out_path = next();
      else if (flag == "--data") parsed.data_path = next();
      else if (flag == "--model") parsed.model_path = next();
      else if (flag == "--seed") parsed.seed = std::stoull(next());
      else if (flag == "--threads") parsed.threads = std::stoi(next());
      else if (flag == "--help" || flag == "-h") {
        std::fputs(kUsage, stdout);
        return 0;
      } else {
        throw ConfigError("unknown flag '" + flag + "'");
      }
    }
    if (parsed.command.empty() || parsed.command == "help") {
      std::fputs(kUsage, stdout);
      return parsed.command.empty() ? 2 : 0;
    }
    if (parsed.config_path.empty())
      throw ConfigError("--config is required");

    RunConfig config = parse_config_file(parsed.config_path);
    if (parsed.seed) {
      config.data_seed = *parsed.seed;
      config.train_seed = *parsed.seed;
    }
    std::string out = !parsed.out_path.empty() ? parsed.out_path : config.out_path;

    int threads = 1;
    if (parsed.threads) {
      threads = *parsed.threads;
    } else if (const char* env = std::getenv("OPRES_THREADS")) {
      threads = std::atoi(env);
      if (threads < 1) threads = 1;
    }

    if (parsed.command == "gen-data") {
      if (out.empty()) throw ConfigError("gen-data needs --out");
      cmd_gen_data(config, out);
    } else if (parsed.command == "train") {
      if (parsed.data_path.empty()) throw ConfigError("train needs --data");
      if (out.empty()) throw ConfigError("train needs --out");
      cmd_train(config, parsed.data_path, out);
    } else if (parsed.command == "eval") {
      if (parsed.model_path.empty()) throw ConfigError("eval needs --model");
      if (out.empty()) throw ConfigError("eval needs --out");
      cmd_eval(config, parsed.model_path, out);
    } else if (parsed.command == "sweep") {
      if (out.empty()) throw ConfigError("sweep needs --out");
      const double success = cmd_sweep(config, out, threads);
      if (success < 0.5) return 4;
    } else {
      throw ConfigError("unknown subcommand '" + parsed.command + "'");
    }
    return 0;
  } catch (const Error& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    switch (error.kind()) {
      case ErrorKind::config:
      case ErrorKind::dimension:
        return 2;
      case ErrorKind::io:
        return 3;
      case ErrorKind::numeric:
      case ErrorKind::internal:
        return 4;
    }
    return 4;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 4;
  }
}

}  // namespace opres::cli
