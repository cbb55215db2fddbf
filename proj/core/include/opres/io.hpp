#ifndef OPRES_IO_HPP
#define OPRES_IO_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "opres/eval.hpp"
#include "opres/fnn.hpp"
#include "opres/train.hpp"

namespace opres {

/// Formats a double with 17 significant digits, enough to round-trip
/// IEEE binary64 through decimal text.
std::string format_double(double value);

/// Dataset container: `OPRESDATA v1` header, key = value metadata lines,
/// a `BINARY` marker, then raw little-endian binary64 payload holding
/// u values followed by v values for each pair, in lexicographic grid
/// order. payload_bytes in the metadata must match 2*n_pairs*m^D*8.
void write_dataset(const std::string& path, const Dataset& dataset,
                   const std::map<std::string, std::string>& extra_meta = {});
struct LoadedDataset {
  Dataset dataset;
  std::map<std::string, std::string> metadata;
};
LoadedDataset read_dataset(const std::string& path);

/// Checkpoint container, same text+binary layout (`OPRESMODEL v1`).
/// Holds the trained network (plain or multi-index) and the encoder pair;
/// PCA encoders embed their eigenfunction grid values in the payload so
/// evaluation needs no access to the training data. Reload reproduces
/// forward outputs bit-exactly.
struct Checkpoint {
  std::variant<FnnParams, MultiIndexFnn> network;
  EncoderPair encoders;
  GridPtr grid;
  std::map<std::string, std::string> metadata;
};
void write_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::string& path);

/// Training trace as `epoch,risk` rows.
void write_trace_csv(const std::string& path, const TrainTrace& trace);

/// Eval report as metric,value rows.
void write_eval_csv(const std::string& path, const EvalReport& report);

/// Sweep rows: n,seed,gen_error,proj_x,proj_y,encoded_err,train_risk,wall_ms
/// followed by commented fit lines.
void write_sweep_csv(const std::string& path, const SweepRecord& record);

/// Log-log SVG plot of sweep cells (dots) and per-n medians (line).
/// Hand-rolled: deterministic text, no plotting dependency.
void write_sweep_svg(const std::string& path, const SweepRecord& record);

}  // namespace opres

#endif
