#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "document.hpp"

namespace semiembed::cli {

enum ExitCode : int { kYes = 0, kNo = 1, kParse = 2, kInternal = 3, kUndecided = 4 };

inline constexpr const char* kToolName = "semiembed";
const char* tool_version() noexcept;

struct CommandOptions {
  ToleranceOverrides flags;  ///< command-line overrides, applied after the document's
  int branch_bound = 2;
  double t_min = 0.0;
  double t_max = 1.0;
  int steps = 11;
  bool positive_path = false;  ///< sample: use the positive decider's certificate
  std::uint64_t seed = 20240601;
  std::string probe;
  bool timing = true;
};

/// Runs one subcommand on the document text (ignored by `verify`) and writes
/// the report or CSV to `out`; diagnostics for `sample` go to `err`.
/// Returns the process exit code.
int run_command(const std::string& command, const std::string& input, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace semiembed::cli
