#pragma once

// Batch front end. parse() turns argv into a RunConfig, run() executes it and
// maps library errors to exit codes: 0 ok, 2 domain/precondition, 3 capacity.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "qcarm/carmichael.hpp"

namespace qcarm::cli {

enum class Command { Facts, Certify, CountBases, CountCarmichael, Psw, Bounds, Enumerate };
enum class Output { Json, Csv, Text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitCapacity = 3;

struct RunConfig {
  Command command = Command::Facts;
  std::uint64_t n = 0;  // k or N
  std::size_t p = 16;
  std::size_t q = 128;
  std::size_t r = 2;
  double epsilon = 0.1;
  double delta = 0.1;
  carmichael::Mode mode = carmichael::Mode::Exact;
  std::uint64_t seed = 42;
  std::size_t reps = 100;
  Output output = Output::Text;
  std::optional<std::string> out_path;
  bool per_k = false;  // bounds: include the per-k table
};

/// Runs one command, writing the report to `out` (or cfg.out_path) and
/// diagnostics to `err`. Returns the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Same as run() but lets library exceptions escape.
void execute(const RunConfig& cfg, std::ostream& out);

/// Either a config to run or an exit code (help, usage errors).
std::variant<RunConfig, int> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcarm::cli
