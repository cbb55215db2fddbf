// Command-line front end; all logic lives in the opres library so the
// commands are callable (and testable) in-process.

#include <string>
#include <vector>

#include "opres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return opres::cli::run_cli(args);
}
