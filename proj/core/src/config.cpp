#include "opres/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "opres/errors.hpp"

namespace opres {

namespace {

std::string trim(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty() || !items.empty()) items.push_back(trim(current));
  return items;
}

struct FieldError {
  std::string path;
  std::string message;
};

[[noreturn]] void fail_field(const std::string& section, const std::string& key,
                             const std::string& message) {
  throw ConfigError("config field [" + section + "] " + key + ": " + message);
}

class Assigner {
 public:
  using Fn = std::function<void(const std::string& section,
                                const std::string& key,
                                const std::string& value)>;
  void add(const std::string& section, const std::string& key, Fn fn) {
    table_[section + "." + key] = std::move(fn);
  }
  bool known_section(const std::string& section) const {
    const std::string prefix = section + ".";
    for (const auto& [path, fn] : table_)
      if (path.rfind(prefix, 0) == 0) return true;
    return false;
  }
  bool assign(const std::string& section, const std::string& key,
              const std::string& value) const {
    const auto it = table_.find(section + "." + key);
    if (it == table_.end()) return false;
    it->second(section, key, value);
    return true;
  }

 private:
  std::map<std::string, Fn> table_;
};

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    fail_field(section, key, "expected a number, got '" + value + "'");
  }
  if (used != value.size())
    fail_field(section, key, "trailing characters in number '" + value + "'");
  return parsed;
}

long long parse_int(const std::string& section, const std::string& key,
                    const std::string& value) {
  std::size_t used = 0;
  long long parsed = 0;
  try {
    parsed = std::stoll(value, &used);
  } catch (const std::exception&) {
    fail_field(section, key, "expected an integer, got '" + value + "'");
  }
  if (used != value.size())
    fail_field(section, key, "trailing characters in integer '" + value + "'");
  return parsed;
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
  std::size_t used = 0;
  unsigned long long parsed = 0;
  try {
    parsed = std::stoull(value, &used);
  } catch (const std::exception&) {
    fail_field(section, key, "expected an unsigned integer, got '" + value + "'");
  }
  if (used != value.size())
    fail_field(section, key, "trailing characters in integer '" + value + "'");
  return parsed;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;

  Assigner assigner;
  const auto dbl = [&](const std::string& s, const std::string& k, double* out) {
    assigner.add(s, k, [out](const auto& sec, const auto& key, const auto& val) {
      *out = parse_double(sec, key, val);
    });
  };
  const auto intf = [&](const std::string& s, const std::string& k, int* out) {
    assigner.add(s, k, [out](const auto& sec, const auto& key, const auto& val) {
      *out = static_cast<int>(parse_int(sec, key, val));
    });
  };
  const auto u64f = [&](const std::string& s, const std::string& k,
                        std::uint64_t* out) {
    assigner.add(s, k, [out](const auto& sec, const auto& key, const auto& val) {
      *out = parse_u64(sec, key, val);
    });
  };
  const auto strf = [&](const std::string& s, const std::string& k,
                        std::string* out) {
    assigner.add(s, k, [out](const auto&, const auto&, const auto& val) {
      *out = val;
    });
  };

  strf("problem", "operator", &config.operator_kind);
  dbl("problem", "t", &config.heat_t);
  dbl("problem", "shift", &config.shift_s);
  intf("problem", "mode_cap", &config.mode_cap);
  intf("problem", "op_d0", &config.op_d0);
  u64f("problem", "op_seed", &config.op_seed);
  assigner.add("problem", "op_links", [&config](const auto&, const auto&, const auto& val) {
    config.op_links = split_list(val);
  });
  strf("problem", "input_law", &config.input_law);
  dbl("problem", "amplitude", &config.amplitude);
  dbl("problem", "decay_beta", &config.decay_beta);
  intf("problem", "manifold_d0", &config.manifold_d0);
  dbl("problem", "manifold_box", &config.manifold_box);
  assigner.add("problem", "manifold_maps",
               [&config](const auto&, const auto&, const auto& val) {
                 config.manifold_maps = split_list(val);
               });
  dbl("problem", "noise_sigma", &config.noise_sigma);
  intf("problem", "n_pairs", &config.n_pairs);
  u64f("problem", "data_seed", &config.data_seed);

  intf("discretization", "dim", &config.dim);
  intf("discretization", "grid_order", &config.grid_order);

  strf("encoder", "kind", &config.encoder_kind);
  intf("encoder", "d_x", &config.d_x);
  intf("encoder", "d_y", &config.d_y);

  strf("architecture", "class", &config.arch_class);
  dbl("architecture", "c_l", &config.c_l);
  dbl("architecture", "c_p", &config.c_p);
  dbl("architecture", "c_k", &config.c_k);
  assigner.add("architecture", "depth", [&config](const auto& s, const auto& k, const auto& v) {
    config.depth = static_cast<int>(parse_int(s, k, v));
  });
  assigner.add("architecture", "width", [&config](const auto& s, const auto& k, const auto& v) {
    config.width = static_cast<int>(parse_int(s, k, v));
  });
  intf("architecture", "net_d0", &config.net_d0);
  assigner.add("architecture", "head_depth", [&config](const auto& s, const auto& k, const auto& v) {
    config.head_depth = static_cast<int>(parse_int(s, k, v));
  });
  assigner.add("architecture", "head_width", [&config](const auto& s, const auto& k, const auto& v) {
    config.head_width = static_cast<int>(parse_int(s, k, v));
  });

  strf("training", "optimizer", &config.optimizer);
  dbl("training", "lr", &config.lr);
  dbl("training", "momentum", &config.momentum);
  dbl("training", "beta1", &config.beta1);
  dbl("training", "beta2", &config.beta2);
  dbl("training", "eps_adam", &config.eps_adam);
  intf("training", "batch_size", &config.batch_size);
  intf("training", "epochs", &config.epochs);
  u64f("training", "seed", &config.train_seed);
  dbl("training", "lr_decay", &config.lr_decay);
  dbl("training", "split_fraction", &config.split_fraction);

  intf("eval", "n_test", &config.n_test);
  assigner.add("eval", "seed", [&config](const auto& s, const auto& k, const auto& v) {
    config.eval_seed = parse_u64(s, k, v);
  });

  assigner.add("sweep", "n_list", [&config](const auto& s, const auto& k, const auto& v) {
    config.sweep_n.clear();
    for (const std::string& item : split_list(v))
      config.sweep_n.push_back(parse_int(s, k, item));
  });
  intf("sweep", "seeds_per_n", &config.seeds_per_n);
  assigner.add("sweep", "inject_power", [&config](const auto& s, const auto& k, const auto& v) {
    config.inject_power = parse_double(s, k, v);
  });
  dbl("sweep", "inject_coeff", &config.inject_coeff);

  strf("output", "out", &config.out_path);

  // Line-oriented strict parse.
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError("config parse error at line " + std::to_string(line_no) +
                          ", column " + std::to_string(stripped.size()) +
                          ": unterminated section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (!assigner.known_section(section))
        throw ConfigError("config parse error at line " + std::to_string(line_no) +
                          ": unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config parse error at line " + std::to_string(line_no) +
                        ", column 1: expected 'key = value'");
    if (section.empty())
      throw ConfigError("config parse error at line " + std::to_string(line_no) +
                        ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config parse error at line " + std::to_string(line_no) +
                        ", column 1: empty key");
    if (!assigner.assign(section, key, value))
      throw ConfigError("config parse error at line " + std::to_string(line_no) +
                        ": unknown key '" + key + "' in section [" + section + "]");
  }

  validate_config(config);
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const RunConfig& config) {
  const auto fail = [](const std::string& path, const std::string& message) {
    throw ConfigError("config field " + path + ": " + message);
  };

  if (config.operator_kind != "heat" && config.operator_kind != "shift" &&
      config.operator_kind != "multi_index")
    fail("[problem] operator", "expected heat|shift|multi_index, got '" +
                                   config.operator_kind + "'");
  if (config.input_law != "decay" && config.input_law != "manifold")
    fail("[problem] input_law", "expected decay|manifold");
  if (config.heat_t < 0.0) fail("[problem] t", "must be >= 0");
  if (config.shift_s < -1.0 || config.shift_s > 1.0)
    fail("[problem] shift", "must lie in [-1,1]");
  if (config.mode_cap < 1) fail("[problem] mode_cap", "must be >= 1");
  if (config.noise_sigma < 0.0) fail("[problem] noise_sigma", "must be >= 0");
  if (config.n_pairs < 2) fail("[problem] n_pairs", "must be >= 2");
  if (config.decay_beta <= 0.5) fail("[problem] decay_beta", "must be > 1/2");

  if (config.dim < 1) fail("[discretization] dim", "must be >= 1");
  if (config.dim != 1)
    fail("[discretization] dim", "the synthetic operators are one-dimensional");

  if (config.encoder_kind != "legendre" && config.encoder_kind != "trig" &&
      config.encoder_kind != "pca")
    fail("[encoder] kind", "expected legendre|trig|pca");
  if (config.d_x < 1) fail("[encoder] d_x", "must be >= 1");
  if (config.d_y < 1) fail("[encoder] d_y", "must be >= 1");
  if (config.encoder_kind != "pca") {
    // d must be r^D with integer r
    const auto check_pow = [&](int d, const char* name) {
      const double root = std::pow(static_cast<double>(d), 1.0 / config.dim);
      const int r = static_cast<int>(std::lround(root));
      int check = 1;
      for (int j = 0; j < config.dim; ++j) check *= r;
      if (check != d)
        fail(std::string("[encoder] ") + name,
             "must be r^D for integer r with D = " + std::to_string(config.dim));
    };
    check_pow(config.d_x, "d_x");
    check_pow(config.d_y, "d_y");
  }

  if (config.operator_kind == "multi_index") {
    if (config.op_d0 < 1 || config.op_d0 > config.d_x)
      fail("[problem] op_d0", "need 1 <= op_d0 <= encoder d_x");
    if (config.encoder_kind == "legendre")
      fail("[encoder] kind", "multi_index operator requires the trig encoder");
    if (!config.op_links.empty() &&
        config.op_links.size() != 1 &&
        static_cast<int>(config.op_links.size()) != config.d_y)
      fail("[problem] op_links", "need 1 name or exactly d_y names");
  }
  if (config.input_law == "manifold") {
    if (config.manifold_d0 < 1) fail("[problem] manifold_d0", "must be >= 1");
    if (config.manifold_box <= 0.0) fail("[problem] manifold_box", "must be > 0");
  }

  if (config.arch_class != "unconstrained" && config.arch_class != "constrained" &&
      config.arch_class != "multi_index")
    fail("[architecture] class", "expected unconstrained|constrained|multi_index");
  if (config.arch_class == "multi_index" &&
      (config.net_d0 < 1 || config.net_d0 > config.d_x))
    fail("[architecture] net_d0", "need 1 <= net_d0 <= d_x");
  if (config.c_l <= 0.0 || config.c_p <= 0.0 || config.c_k <= 0.0)
    fail("[architecture] c_*", "sizing constants must be > 0");
  if (config.depth && *config.depth < 2)
    fail("[architecture] depth", "must be >= 2");
  if (config.width && *config.width < 1)
    fail("[architecture] width", "must be >= 1");

  if (config.optimizer != "adam" && config.optimizer != "sgd")
    fail("[training] optimizer", "expected adam|sgd");
  if (config.lr <= 0.0) fail("[training] lr", "must be > 0");
  if (config.momentum < 0.0 || config.momentum >= 1.0)
    fail("[training] momentum", "must lie in [0,1)");
  if (config.batch_size < 1) fail("[training] batch_size", "must be >= 1");
  if (config.epochs < 0) fail("[training] epochs", "must be >= 0");
  if (!(config.split_fraction > 0.0 && config.split_fraction < 1.0))
    fail("[training] split_fraction", "must lie in (0,1)");
  if (config.lr_decay <= 0.0 || config.lr_decay > 1.0)
    fail("[training] lr_decay", "must lie in (0,1]");

  if (config.n_test < 1) fail("[eval] n_test", "must be >= 1");
  if (config.seeds_per_n < 1) fail("[sweep] seeds_per_n", "must be >= 1");
  if (config.grid_order < 0) fail("[discretization] grid_order", "must be >= 0");
}

std::string normalized_dump(const RunConfig& config) {
  std::string out;
  const auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  const auto fmt = [](double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return std::string(buffer);
  };
  const auto join = [](const std::vector<std::string>& items) {
    std::string joined;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) joined += ",";
      joined += items[i];
    }
    return joined;
  };

  out += "[problem]\n";
  line("operator", config.operator_kind);
  line("t", fmt(config.heat_t));
  line("shift", fmt(config.shift_s));
  line("mode_cap", std::to_string(config.mode_cap));
  line("op_d0", std::to_string(config.op_d0));
  line("op_seed", std::to_string(config.op_seed));
  if (!config.op_links.empty()) line("op_links", join(config.op_links));
  line("input_law", config.input_law);
  line("amplitude", fmt(config.amplitude));
  line("decay_beta", fmt(config.decay_beta));
  line("manifold_d0", std::to_string(config.manifold_d0));
  line("manifold_box", fmt(config.manifold_box));
  if (!config.manifold_maps.empty())
    line("manifold_maps", join(config.manifold_maps));
  line("noise_sigma", fmt(config.noise_sigma));
  line("n_pairs", std::to_string(config.n_pairs));
  line("data_seed", std::to_string(config.data_seed));

  out += "\n[discretization]\n";
  line("dim", std::to_string(config.dim));
  line("grid_order", std::to_string(config.grid_order));

  out += "\n[encoder]\n";
  line("kind", config.encoder_kind);
  line("d_x", std::to_string(config.d_x));
  line("d_y", std::to_string(config.d_y));

  out += "\n[architecture]\n";
  line("class", config.arch_class);
  line("c_l", fmt(config.c_l));
  line("c_p", fmt(config.c_p));
  line("c_k", fmt(config.c_k));
  if (config.depth) line("depth", std::to_string(*config.depth));
  if (config.width) line("width", std::to_string(*config.width));
  line("net_d0", std::to_string(config.net_d0));
  if (config.head_depth) line("head_depth", std::to_string(*config.head_depth));
  if (config.head_width) line("head_width", std::to_string(*config.head_width));

  out += "\n[training]\n";
  line("optimizer", config.optimizer);
  line("lr", fmt(config.lr));
  line("momentum", fmt(config.momentum));
  line("beta1", fmt(config.beta1));
  line("beta2", fmt(config.beta2));
  line("eps_adam", fmt(config.eps_adam));
  line("batch_size", std::to_string(config.batch_size));
  line("epochs", std::to_string(config.epochs));
  line("seed", std::to_string(config.train_seed));
  line("lr_decay", fmt(config.lr_decay));
  line("split_fraction", fmt(config.split_fraction));

  out += "\n[eval]\n";
  line("n_test", std::to_string(config.n_test));
  if (config.eval_seed) line("seed", std::to_string(*config.eval_seed));

  if (!config.sweep_n.empty() || config.inject_power) {
    out += "\n[sweep]\n";
    if (!config.sweep_n.empty()) {
      std::string ns;
      for (std::size_t i = 0; i < config.sweep_n.size(); ++i) {
        if (i) ns += ",";
        ns += std::to_string(config.sweep_n[i]);
      }
      line("n_list", ns);
    }
    line("seeds_per_n", std::to_string(config.seeds_per_n));
    if (config.inject_power) line("inject_power", fmt(*config.inject_power));
    line("inject_coeff", fmt(config.inject_coeff));
  }

  if (!config.out_path.empty()) {
    out += "\n[output]\n";
    line("out", config.out_path);
  }
  return out;
}

}  // namespace opres
