#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"
#include "report.hpp"

namespace meanret::cli {

struct CliOptions {
  std::string out_dir = "out";
  std::string format = "both";  // json | csv | both
  std::optional<std::uint64_t> seed;  // overrides config seeds when set
};

/// Exit codes follow one contract across commands: 0 all checks pass (for
/// mean: a mean exists), 1 a check failed (for mean: provably no invariant
/// mean), 2 invalid config or input.  Config errors surface as
/// std::invalid_argument and are mapped to 2 by the entry point.

int cmd_mean(const ExperimentConfig& cfg, const CliOptions& opt);
int cmd_retract(const ExperimentConfig& cfg, const CliOptions& opt);
int cmd_verify(const ExperimentConfig& cfg, const CliOptions& opt,
               bool holder_only);
int cmd_threshold(const CliOptions& opt);

}  // namespace meanret::cli
