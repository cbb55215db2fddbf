#include "opres/io.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "opres/errors.hpp"

namespace opres {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

void append_f64_le(std::string& out, double value) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  char raw[8];
  std::memcpy(raw, &bits, 8);
  out.append(raw, 8);
}

double read_f64_le(const char* data) {
  std::uint64_t bits;
  std::memcpy(&bits, data, 8);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  return std::bit_cast<double>(bits);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in && !in.eof()) throw IoError("read failed for '" + path + "'");
  return buffer.str();
}

// Text header ending at the BINARY marker line; returns metadata and the
// payload offset.
struct Container {
  std::string magic;
  std::map<std::string, std::string> meta;
  std::size_t payload_offset = 0;
};

Container parse_container(const std::string& bytes, const std::string& path) {
  Container container;
  std::size_t pos = 0;
  bool saw_binary = false;
  bool first = true;
  while (pos < bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos)
      throw IoError(path + ": truncated header (no BINARY marker)");
    std::string line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    if (first) {
      container.magic = line;
      first = false;
      continue;
    }
    if (line == "BINARY") {
      saw_binary = true;
      break;
    }
    const std::size_t sep = line.find(" = ");
    if (sep == std::string::npos)
      throw IoError(path + ": malformed metadata line '" + line + "'");
    container.meta[line.substr(0, sep)] = line.substr(sep + 3);
  }
  if (!saw_binary) throw IoError(path + ": missing BINARY marker");
  container.payload_offset = pos;
  return container;
}

const std::string& require_key(const Container& container, const std::string& key,
                               const std::string& path) {
  const auto it = container.meta.find(key);
  if (it == container.meta.end())
    throw IoError(path + ": missing metadata key '" + key + "'");
  return it->second;
}

long long meta_int(const Container& container, const std::string& key,
                   const std::string& path) {
  const std::string& text = require_key(container, key, path);
  try {
    return std::stoll(text);
  } catch (const std::exception&) {
    throw IoError(path + ": metadata key '" + key + "' is not an integer");
  }
}

double meta_double(const Container& container, const std::string& key,
                   const std::string& path) {
  const std::string& text = require_key(container, key, path);
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw IoError(path + ": metadata key '" + key + "' is not a number");
  }
}

void append_meta(std::string& out, const std::string& key,
                 const std::string& value) {
  out += key;
  out += " = ";
  out += value;
  out += '\n';
}

}  // namespace

void write_dataset(const std::string& path, const Dataset& dataset,
                   const std::map<std::string, std::string>& extra_meta) {
  const std::size_t values_per_fn = dataset.grid->point_count();
  const std::size_t payload_bytes = 2 * dataset.size() * values_per_fn * 8;

  std::string out;
  out += "OPRESDATA v1\n";
  append_meta(out, "dim", std::to_string(dataset.grid->dim));
  append_meta(out, "grid_order", std::to_string(dataset.grid->order));
  append_meta(out, "n_pairs", std::to_string(dataset.size()));
  append_meta(out, "operator", dataset.meta.operator_id);
  append_meta(out, "sigma", format_double(dataset.meta.noise_sigma));
  append_meta(out, "seed", std::to_string(dataset.meta.seed));
  for (const auto& [key, value] : extra_meta) append_meta(out, key, value);
  append_meta(out, "payload_bytes", std::to_string(payload_bytes));
  out += "BINARY\n";

  out.reserve(out.size() + payload_bytes);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double value : dataset.inputs[i].values) append_f64_le(out, value);
    for (double value : dataset.outputs[i].values) append_f64_le(out, value);
  }
  write_file(path, out);
}

LoadedDataset read_dataset(const std::string& path) {
  const std::string bytes = read_file(path);
  const Container container = parse_container(bytes, path);
  if (container.magic != "OPRESDATA v1")
    throw IoError(path + ": not an OPRESDATA v1 file");

  const int dim = static_cast<int>(meta_int(container, "dim", path));
  const int order = static_cast<int>(meta_int(container, "grid_order", path));
  const long long n_pairs = meta_int(container, "n_pairs", path);
  const long long declared = meta_int(container, "payload_bytes", path);

  LoadedDataset loaded;
  loaded.metadata = container.meta;
  Dataset& dataset = loaded.dataset;
  dataset.grid = make_grid(dim, order);
  dataset.meta.operator_id = require_key(container, "operator", path);
  dataset.meta.noise_sigma = meta_double(container, "sigma", path);
  dataset.meta.seed =
      static_cast<std::uint64_t>(meta_int(container, "seed", path));

  const std::size_t values_per_fn = dataset.grid->point_count();
  const std::size_t expected =
      2 * static_cast<std::size_t>(n_pairs) * values_per_fn * 8;
  if (static_cast<std::size_t>(declared) != expected)
    throw IoError(path + ": payload_bytes " + std::to_string(declared) +
                  " does not match 2*n_pairs*m^D*8 = " + std::to_string(expected));
  if (bytes.size() - container.payload_offset != expected)
    throw IoError(path + ": payload is " +
                  std::to_string(bytes.size() - container.payload_offset) +
                  " bytes, expected " + std::to_string(expected));

  const char* cursor = bytes.data() + container.payload_offset;
  dataset.inputs.reserve(n_pairs);
  dataset.outputs.reserve(n_pairs);
  for (long long i = 0; i < n_pairs; ++i) {
    GridFunction u, v;
    u.grid = v.grid = dataset.grid;
    u.values.resize(values_per_fn);
    v.values.resize(values_per_fn);
    for (std::size_t j = 0; j < values_per_fn; ++j, cursor += 8)
      u.values[j] = read_f64_le(cursor);
    for (std::size_t j = 0; j < values_per_fn; ++j, cursor += 8)
      v.values[j] = read_f64_le(cursor);
    dataset.inputs.push_back(std::move(u));
    dataset.outputs.push_back(std::move(v));
  }
  return loaded;
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& text, const std::string& path,
                            const std::string& key) {
  std::vector<int> values;
  std::istringstream in(text);
  int value;
  while (in >> value) values.push_back(value);
  if (values.empty())
    throw IoError(path + ": metadata key '" + key + "' holds no integers");
  return values;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  double value;
  while (in >> value) values.push_back(value);
  return values;
}

std::vector<int> fnn_layer_sizes(const FnnParams& net) {
  std::vector<int> sizes{net.input_dim()};
  for (const auto& layer : net.layers) sizes.push_back(layer.out_dim);
  return sizes;
}

void append_layers_payload(std::string& out, const std::vector<FnnLayer>& layers) {
  for (const auto& layer : layers) {
    for (double w : layer.weights) append_f64_le(out, w);
    for (double b : layer.biases) append_f64_le(out, b);
  }
}

const char* read_layers_payload(const char* cursor,
                                const std::vector<int>& sizes,
                                std::vector<FnnLayer>& layers) {
  layers.clear();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    FnnLayer layer;
    layer.in_dim = sizes[l];
    layer.out_dim = sizes[l + 1];
    layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
    layer.biases.resize(layer.out_dim);
    for (double& w : layer.weights) {
      w = read_f64_le(cursor);
      cursor += 8;
    }
    for (double& b : layer.biases) {
      b = read_f64_le(cursor);
      cursor += 8;
    }
    layers.push_back(std::move(layer));
  }
  return cursor;
}

std::size_t layers_payload_bytes(const std::vector<int>& sizes) {
  std::size_t doubles = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    doubles += static_cast<std::size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  return doubles * 8;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::string out;
  out += "OPRESMODEL v1\n";
  append_meta(out, "grid_dim", std::to_string(checkpoint.grid->dim));
  append_meta(out, "grid_order", std::to_string(checkpoint.grid->order));

  std::size_t payload_bytes = 0;

  const auto* fnn = std::get_if<FnnParams>(&checkpoint.network);
  const auto* multi = std::get_if<MultiIndexFnn>(&checkpoint.network);
  std::vector<int> sizes, head_sizes;
  if (fnn) {
    append_meta(out, "net_kind", "fnn");
    append_meta(out, "clip", format_double(fnn->clip_bound));
    sizes = fnn_layer_sizes(*fnn);
    append_meta(out, "layer_sizes", join_ints(sizes));
    payload_bytes += layers_payload_bytes(sizes);
  } else {
    append_meta(out, "net_kind", "multi_index");
    append_meta(out, "clip", format_double(multi->clip_bound));
    append_meta(out, "d_x", std::to_string(multi->d_x));
    append_meta(out, "d0", std::to_string(multi->d0));
    append_meta(out, "heads", std::to_string(multi->heads.size()));
    head_sizes.push_back(multi->d0);
    for (const auto& layer : multi->heads.front().mlp)
      head_sizes.push_back(layer.out_dim);
    append_meta(out, "head_layer_sizes", join_ints(head_sizes));
    payload_bytes +=
        multi->heads.size() * (static_cast<std::size_t>(multi->d_x) * multi->d0 * 8 +
                               layers_payload_bytes(head_sizes));
  }

  const std::size_t grid_values = checkpoint.grid->point_count();
  if (const auto* basis = std::get_if<BasisEncoderPair>(&checkpoint.encoders.impl)) {
    append_meta(out, "encoder_kind", to_string(basis->spec_x.kind));
    append_meta(out, "encoder_dim", std::to_string(basis->spec_x.dim));
    append_meta(out, "encoder_order_x", std::to_string(basis->spec_x.order));
    append_meta(out, "encoder_order_y", std::to_string(basis->spec_y.order));
  } else {
    const auto& pca = std::get<PcaEncoderPair>(checkpoint.encoders.impl);
    append_meta(out, "encoder_kind", "pca");
    append_meta(out, "pca_d_x", std::to_string(pca.model_x.encode_dim));
    append_meta(out, "pca_d_y", std::to_string(pca.model_y.encode_dim));
    append_meta(out, "pca_eigenvalues_x", join_doubles(pca.model_x.eigenvalues));
    append_meta(out, "pca_eigenvalues_y", join_doubles(pca.model_y.eigenvalues));
    append_meta(out, "pca_trailing_x", format_double(pca.model_x.trailing_energy));
    append_meta(out, "pca_trailing_y", format_double(pca.model_y.trailing_energy));
    payload_bytes +=
        (pca.model_x.encode_dim + pca.model_y.encode_dim) * grid_values * 8;
  }

  for (const auto& [key, value] : checkpoint.metadata)
    append_meta(out, key, value);
  append_meta(out, "payload_bytes", std::to_string(payload_bytes));
  out += "BINARY\n";
  out.reserve(out.size() + payload_bytes);

  if (fnn) {
    append_layers_payload(out, fnn->layers);
  } else {
    for (const auto& head : multi->heads) {
      for (double v : head.projection) append_f64_le(out, v);
      append_layers_payload(out, head.mlp);
    }
  }
  if (const auto* pca = std::get_if<PcaEncoderPair>(&checkpoint.encoders.impl)) {
    for (const auto& phi : pca->model_x.eigenfunctions)
      for (double value : phi.values) append_f64_le(out, value);
    for (const auto& phi : pca->model_y.eigenfunctions)
      for (double value : phi.values) append_f64_le(out, value);
  }
  write_file(path, out);
}

Checkpoint read_checkpoint(const std::string& path) {
  const std::string bytes = read_file(path);
  const Container container = parse_container(bytes, path);
  if (container.magic != "OPRESMODEL v1")
    throw IoError(path + ": not an OPRESMODEL v1 file");

  Checkpoint checkpoint;
  checkpoint.metadata = container.meta;
  const int grid_dim = static_cast<int>(meta_int(container, "grid_dim", path));
  const int grid_order = static_cast<int>(meta_int(container, "grid_order", path));
  checkpoint.grid = make_grid(grid_dim, grid_order);
  const std::size_t grid_values = checkpoint.grid->point_count();

  const long long declared = meta_int(container, "payload_bytes", path);
  if (bytes.size() - container.payload_offset !=
      static_cast<std::size_t>(declared))
    throw IoError(path + ": payload size mismatch");
  const char* cursor = bytes.data() + container.payload_offset;

  const std::string net_kind = require_key(container, "net_kind", path);
  if (net_kind == "fnn") {
    FnnParams net;
    net.clip_bound = meta_double(container, "clip", path);
    const std::vector<int> sizes =
        split_ints(require_key(container, "layer_sizes", path), path,
                   "layer_sizes");
    cursor = read_layers_payload(cursor, sizes, net.layers);
    checkpoint.network = std::move(net);
  } else if (net_kind == "multi_index") {
    MultiIndexFnn net;
    net.clip_bound = meta_double(container, "clip", path);
    net.d_x = static_cast<int>(meta_int(container, "d_x", path));
    net.d0 = static_cast<int>(meta_int(container, "d0", path));
    const long long heads = meta_int(container, "heads", path);
    const std::vector<int> head_sizes =
        split_ints(require_key(container, "head_layer_sizes", path), path,
                   "head_layer_sizes");
    net.heads.resize(heads);
    for (auto& head : net.heads) {
      head.projection.resize(static_cast<std::size_t>(net.d_x) * net.d0);
      for (double& v : head.projection) {
        v = read_f64_le(cursor);
        cursor += 8;
      }
      cursor = read_layers_payload(cursor, head_sizes, head.mlp);
    }
    checkpoint.network = std::move(net);
  } else {
    throw IoError(path + ": unknown net_kind '" + net_kind + "'");
  }

  const std::string encoder_kind = require_key(container, "encoder_kind", path);
  if (encoder_kind == "pca") {
    PcaEncoderPair pair;
    pair.model_x.encode_dim =
        static_cast<int>(meta_int(container, "pca_d_x", path));
    pair.model_y.encode_dim =
        static_cast<int>(meta_int(container, "pca_d_y", path));
    pair.model_x.eigenvalues =
        split_doubles(require_key(container, "pca_eigenvalues_x", path));
    pair.model_y.eigenvalues =
        split_doubles(require_key(container, "pca_eigenvalues_y", path));
    pair.model_x.trailing_energy = meta_double(container, "pca_trailing_x", path);
    pair.model_y.trailing_energy = meta_double(container, "pca_trailing_y", path);
    auto read_model = [&](PcaModel& model) {
      model.eigenfunctions.resize(model.encode_dim);
      for (auto& phi : model.eigenfunctions) {
        phi.grid = checkpoint.grid;
        phi.values.resize(grid_values);
        for (double& value : phi.values) {
          value = read_f64_le(cursor);
          cursor += 8;
        }
      }
      if (static_cast<int>(model.eigenvalues.size()) != model.encode_dim + 1)
        throw IoError(path + ": PCA eigenvalue count mismatch");
      model.spectral_gap = model.eigenvalues[model.encode_dim - 1] -
                           model.eigenvalues[model.encode_dim];
    };
    read_model(pair.model_x);
    read_model(pair.model_y);
    checkpoint.encoders = EncoderPair{std::move(pair)};
  } else {
    BasisEncoderPair pair;
    const BasisKind kind = encoder_kind == "legendre" ? BasisKind::legendre
                                                      : BasisKind::trigonometric;
    if (encoder_kind != "legendre" && encoder_kind != "trig")
      throw IoError(path + ": unknown encoder_kind '" + encoder_kind + "'");
    const int dim = static_cast<int>(meta_int(container, "encoder_dim", path));
    pair.spec_x = BasisSpec{
        kind, dim, static_cast<int>(meta_int(container, "encoder_order_x", path))};
    pair.spec_y = BasisSpec{
        kind, dim, static_cast<int>(meta_int(container, "encoder_order_y", path))};
    checkpoint.encoders = EncoderPair{pair};
  }
  return checkpoint;
}

void write_trace_csv(const std::string& path, const TrainTrace& trace) {
  std::string out = "epoch,risk\n";
  for (const auto& [epoch, risk] : trace.epoch_risk) {
    out += std::to_string(epoch);
    out += ',';
    out += format_double(risk);
    out += '\n';
  }
  write_file(path, out);
}

void write_eval_csv(const std::string& path, const EvalReport& report) {
  std::string out = "metric,value\n";
  const auto row = [&out](const char* name, double value) {
    out += name;
    out += ',';
    out += format_double(value);
    out += '\n';
  };
  row("gen_error", report.gen_error);
  row("proj_x", report.proj_error_x);
  row("proj_y", report.proj_error_y);
  row("encoded_err", report.encoded_space_error);
  row("decomposition_slack", report.decomposition_slack);
  row("gen_error_stderr", report.gen_error_stderr);
  row("proj_y_stderr", report.proj_error_y_stderr);
  out += "n_test," + std::to_string(report.n_test) + "\n";
  out += "seed," + std::to_string(report.seed) + "\n";
  write_file(path, out);
}

void write_sweep_csv(const std::string& path, const SweepRecord& record) {
  std::string out = "n,seed,gen_error,proj_x,proj_y,encoded_err,train_risk,wall_ms\n";
  for (const SweepCell& cell : record.rows) {
    if (cell.failed) {
      out += "# failed cell n=" + std::to_string(cell.n) +
             " seed=" + std::to_string(cell.seed) + ": " + cell.message + "\n";
      continue;
    }
    out += std::to_string(cell.n);
    out += ',';
    out += std::to_string(cell.seed);
    out += ',';
    out += format_double(cell.gen_error);
    out += ',';
    out += format_double(cell.proj_x);
    out += ',';
    out += format_double(cell.proj_y);
    out += ',';
    out += format_double(cell.encoded_err);
    out += ',';
    out += format_double(cell.train_risk);
    out += ',';
    out += format_double(cell.wall_ms);
    out += '\n';
  }
  if (record.fit_valid) {
    out += "# fit_slope = " + format_double(record.fit.slope) + "\n";
    out += "# fit_intercept = " + format_double(record.fit.intercept) + "\n";
    out += "# fit_residual = " + format_double(record.fit.residual) + "\n";
  }
  write_file(path, out);
}

namespace {

std::string svg_num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

}  // namespace

void write_sweep_svg(const std::string& path, const SweepRecord& record) {
  // Fixed 640x480 canvas with a margin; log10 axes.
  const double width = 640, height = 480, margin = 60;

  double min_n = 0, max_n = 0, min_e = 0, max_e = 0;
  bool any = false;
  for (const SweepCell& cell : record.rows) {
    if (cell.failed || !(cell.gen_error > 0.0)) continue;
    const double ln = std::log10(static_cast<double>(cell.n));
    const double le = std::log10(cell.gen_error);
    if (!any) {
      min_n = max_n = ln;
      min_e = max_e = le;
      any = true;
    } else {
      min_n = std::min(min_n, ln);
      max_n = std::max(max_n, ln);
      min_e = std::min(min_e, le);
      max_e = std::max(max_e, le);
    }
  }
  if (!any) {
    write_file(path,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
               "height=\"480\"><text x=\"20\" y=\"40\">no finite sweep "
               "cells</text></svg>\n");
    return;
  }
  if (max_n - min_n < 1e-9) max_n = min_n + 1.0;
  if (max_e - min_e < 1e-9) max_e = min_e + 1.0;

  const auto x_of = [&](double log_n) {
    return margin + (log_n - min_n) / (max_n - min_n) * (width - 2 * margin);
  };
  const auto y_of = [&](double log_e) {
    return height - margin -
           (log_e - min_e) / (max_e - min_e) * (height - 2 * margin);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  // axes
  out += "<line x1=\"" + svg_num(margin) + "\" y1=\"" + svg_num(height - margin) +
         "\" x2=\"" + svg_num(width - margin) + "\" y2=\"" +
         svg_num(height - margin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + svg_num(margin) + "\" y1=\"" + svg_num(margin) +
         "\" x2=\"" + svg_num(margin) + "\" y2=\"" + svg_num(height - margin) +
         "\" stroke=\"black\"/>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(min_n)); d <= std::floor(max_n); ++d) {
    const double x = x_of(d);
    out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(height - margin) +
           "\" x2=\"" + svg_num(x) + "\" y2=\"" + svg_num(height - margin + 6) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + svg_num(x - 12) + "\" y=\"" +
           svg_num(height - margin + 20) + "\" font-size=\"12\">1e" +
           std::to_string(d) + "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(min_e)); d <= std::floor(max_e); ++d) {
    const double y = y_of(d);
    out += "<line x1=\"" + svg_num(margin - 6) + "\" y1=\"" + svg_num(y) +
           "\" x2=\"" + svg_num(margin) + "\" y2=\"" + svg_num(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + svg_num(margin - 50) + "\" y=\"" + svg_num(y + 4) +
           "\" font-size=\"12\">1e" + std::to_string(d) + "</text>\n";
  }
  out += "<text x=\"" + svg_num(width / 2 - 40) + "\" y=\"" +
         svg_num(height - 15) + "\" font-size=\"13\">sample count n</text>\n";
  out += "<text x=\"12\" y=\"" + svg_num(margin - 14) +
         "\" font-size=\"13\">gen_error</text>\n";

  // per-seed points
  for (const SweepCell& cell : record.rows) {
    if (cell.failed || !(cell.gen_error > 0.0)) continue;
    out += "<circle cx=\"" +
           svg_num(x_of(std::log10(static_cast<double>(cell.n)))) + "\" cy=\"" +
           svg_num(y_of(std::log10(cell.gen_error))) +
           "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
  }

  // median polyline
  std::string polyline;
  for (std::size_t i = 0; i < record.fit_n.size(); ++i) {
    if (!(record.fit_median_error[i] > 0.0)) continue;
    if (!polyline.empty()) polyline += ' ';
    polyline += svg_num(x_of(std::log10(static_cast<double>(record.fit_n[i]))));
    polyline += ',';
    polyline += svg_num(y_of(std::log10(record.fit_median_error[i])));
  }
  if (!polyline.empty())
    out += "<polyline points=\"" + polyline +
           "\" fill=\"none\" stroke=\"crimson\" stroke-width=\"2\"/>\n";

  if (record.fit_valid)
    out += "<text x=\"" + svg_num(width - 220) + "\" y=\"" + svg_num(margin) +
           "\" font-size=\"13\">slope " + svg_num(record.fit.slope) +
           "</text>\n";
  out += "</svg>\n";
  write_file(path, out);
}

}  // namespace opres
