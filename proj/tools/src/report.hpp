#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace meanret::cli {

using json = nlohmann::json;

struct CriterionResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;       // measured worst value the verdict rests on
  double threshold = 0.0;   // configured bound it was compared against
  std::string detail;
};

/// Everything a command produces.  Serialization is deterministic: two runs
/// of the same config (same seeds) emit byte-identical JSON except for the
/// "timings" object, which is the only place wall-clock numbers appear.
struct RunReport {
  std::string command;
  std::string scenario;
  json config_echo;
  json seeds;
  json mean_summary;
  json trace_summary;
  json extra;
  std::vector<CriterionResult> criteria;
  double wall_seconds = 0.0;

  bool all_pass() const;
  json to_json() const;
};

/// Writes <scenario>_report.json and/or <scenario>_criteria.csv under
/// out_dir, creating the directory if needed.  format is json, csv or both.
void write_report(const RunReport& report, const std::string& out_dir,
                  const std::string& format);

/// Human-readable summary to stdout: one PASS/FAIL line per criterion.
void print_report(const RunReport& report);

}  // namespace meanret::cli
