#ifndef OPRES_CONFIG_HPP
#define OPRES_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opres {

/// Run description parsed from the sectioned key = value config format.
/// Parsing is strict: unknown sections or keys are rejected, every value
/// is type-checked, and cross-field consistency is validated before any
/// work starts. All defaults are visible in normalized_dump().
struct RunConfig {
  // [problem]
  std::string operator_kind = "heat";  // heat | shift | multi_index
  double heat_t = 0.1;
  double shift_s = 0.25;
  int mode_cap = 4;
  int op_d0 = 1;
  std::uint64_t op_seed = 1;
  std::vector<std::string> op_links;  // per-head scalar maps, broadcast if 1
  std::string input_law = "decay";    // decay | manifold
  double amplitude = 1.0;
  double decay_beta = 2.0;
  int manifold_d0 = 2;
  double manifold_box = 1.0;
  std::vector<std::string> manifold_maps;
  double noise_sigma = 0.0;
  int n_pairs = 100;
  std::uint64_t data_seed = 1;

  // [discretization]
  int dim = 1;
  int grid_order = 0;  // 0 = auto (smallest order all components accept, min 16)

  // [encoder]
  std::string encoder_kind = "trig";  // legendre | trig | pca
  int d_x = 10;
  int d_y = 10;

  // [architecture]
  std::string arch_class = "unconstrained";  // constrained | unconstrained | multi_index
  double c_l = 1.0;
  double c_p = 1.0;
  double c_k = 1.0;
  std::optional<int> depth;  // explicit override of the sizing rule
  std::optional<int> width;
  int net_d0 = 1;
  std::optional<int> head_depth;
  std::optional<int> head_width;

  // [training]
  std::string optimizer = "adam";  // adam | sgd
  double lr = 1e-3;
  double momentum = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  int batch_size = 32;
  int epochs = 2000;
  std::uint64_t train_seed = 1;
  double lr_decay = 1.0;
  double split_fraction = 0.5;

  // [eval]
  int n_test = 1000;
  std::optional<std::uint64_t> eval_seed;  // default: data_seed + 1000000

  // [sweep]
  std::vector<long long> sweep_n;
  int seeds_per_n = 3;
  std::optional<double> inject_power;  // synthetic power-law mode for the fitter
  double inject_coeff = 1.0;

  // [output]
  std::string out_path;

  std::uint64_t effective_eval_seed() const {
    return eval_seed ? *eval_seed : data_seed + 1000000ull;
  }
};

/// Parses config text. Throws ConfigError with line/column positions for
/// syntax errors and field paths for semantic ones.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Canonical dump of every effective field; re-parsing it reproduces the
/// same RunConfig.
std::string normalized_dump(const RunConfig& config);

/// Cross-field validation (also called by parse_config).
void validate_config(const RunConfig& config);

}  // namespace opres

#endif
