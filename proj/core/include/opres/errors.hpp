#ifndef OPRES_ERRORS_HPP
#define OPRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opres {

/// Failure category, mapped to CLI exit codes:
/// config/dimension -> 2, io -> 3, numeric/internal -> 4.
enum class ErrorKind {
  config,     // bad configuration or precondition violated by user input
  dimension,  // mismatched grids, vector lengths, layer shapes
  io,         // file read/write failures, malformed containers
  numeric,    // divergence, rank deficiency, overflow
  internal,   // contract the library itself must never break
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorKind::dimension, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::internal, w) {}
};

/// Rank-deficient snapshot set; carries the usable rank.
struct RankDeficiencyError : NumericError {
  RankDeficiencyError(const std::string& w, int effective_rank)
      : NumericError(w), effective_rank(effective_rank) {}
  int effective_rank;
};

}  // namespace opres

#endif
