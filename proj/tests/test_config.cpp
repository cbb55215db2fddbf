#include "doctest.h"
#include "opres/config.hpp"
#include "opres/errors.hpp"

using namespace opres;

namespace {

const char* kMinimal =
    "[problem]\n"
    "operator = heat\n"
    "t = 0.1\n"
    "mode_cap = 4\n"
    "[encoder]\n"
    "kind = trig\n"
    "d_x = 10\n"
    "d_y = 10\n";

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig config = parse_config(kMinimal);
  CHECK(config.operator_kind == "heat");
  CHECK(config.heat_t == 0.1);
  CHECK(config.mode_cap == 4);
  CHECK(config.d_x == 10);
  CHECK(config.optimizer == "adam");
  CHECK(config.batch_size == 32);
  CHECK(config.split_fraction == 0.5);
  CHECK(config.effective_eval_seed() == config.data_seed + 1000000ull);
}

TEST_CASE("unknown keys and sections are rejected with line info") {
  CHECK_THROWS_WITH_AS(parse_config("[problem]\nbogus = 1\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[nosuch]\n"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("key = 1\n"),
                       doctest::Contains("outside any"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[problem]\noperator heat\n"),
                       doctest::Contains("expected 'key = value'"), ConfigError);
}

TEST_CASE("type errors carry the field path") {
  CHECK_THROWS_WITH_AS(parse_config("[problem]\nt = fast\n"),
                       doctest::Contains("[problem] t"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[training]\nbatch_size = 3.5\n"),
                       doctest::Contains("batch_size"), ConfigError);
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_WITH_AS(parse_config("[problem]\noperator = warp\n"),
                       doctest::Contains("operator"), ConfigError);
  // d_x must be r^D
  CHECK_THROWS_WITH_AS(
      parse_config("[problem]\noperator = heat\n[encoder]\nkind = trig\nd_x = 10\n"
                   "d_y = 10\n[discretization]\ndim = 2\n"),
      doctest::Contains("one-dimensional"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[training]\nsplit_fraction = 1.5\n"),
                       doctest::Contains("split_fraction"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[problem]\ndecay_beta = 0.25\n"),
                       doctest::Contains("decay_beta"), ConfigError);
  // multi_index needs trig encoders
  CHECK_THROWS_WITH_AS(
      parse_config("[problem]\noperator = multi_index\n[encoder]\nkind = "
                   "legendre\nd_x = 16\nd_y = 4\n"),
      doctest::Contains("trig"), ConfigError);
}

TEST_CASE("normalized dump re-parses to the same config") {
  const char* fuller =
      "[problem]\n"
      "operator = multi_index\n"
      "op_d0 = 1\n"
      "op_seed = 42\n"
      "op_links = sine,cosine,sine,linear\n"
      "input_law = decay\n"
      "amplitude = 0.75\n"
      "decay_beta = 1.5\n"
      "noise_sigma = 0.01\n"
      "n_pairs = 64\n"
      "data_seed = 9\n"
      "[encoder]\n"
      "kind = trig\n"
      "d_x = 16\n"
      "d_y = 4\n"
      "[architecture]\n"
      "class = multi_index\n"
      "net_d0 = 1\n"
      "c_l = 0.3\n"
      "c_p = 8\n"
      "[training]\n"
      "optimizer = sgd\n"
      "lr = 0.05\n"
      "momentum = 0.5\n"
      "epochs = 17\n"
      "batch_size = 8\n"
      "seed = 4\n"
      "[eval]\n"
      "n_test = 250\n"
      "seed = 123456\n"
      "[sweep]\n"
      "n_list = 128,512,2048\n"
      "seeds_per_n = 3\n"
      "[output]\n"
      "out = /tmp/somewhere\n";
  const RunConfig config = parse_config(fuller);
  const std::string dump = normalized_dump(config);
  const RunConfig reparsed = parse_config(dump);
  CHECK(normalized_dump(reparsed) == dump);
  CHECK(reparsed.op_links == config.op_links);
  CHECK(reparsed.sweep_n == config.sweep_n);
  CHECK(reparsed.eval_seed == config.eval_seed);
  CHECK(reparsed.out_path == config.out_path);
  CHECK(reparsed.lr == config.lr);
}

TEST_CASE("comments and blank lines are ignored") {
  const RunConfig config = parse_config(
      "# fixture\n\n[problem]\n; semicolon comment\noperator = shift\nshift = "
      "0.25\nmode_cap = 3\n");
  CHECK(config.operator_kind == "shift");
  CHECK(config.shift_s == 0.25);
}
