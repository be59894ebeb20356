#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace meanret::cli {

bool RunReport::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

json RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["scenario"] = scenario;
  j["config"] = config_echo;
  j["seeds"] = seeds;
  if (!mean_summary.is_null()) j["mean"] = mean_summary;
  if (!trace_summary.is_null()) j["trace"] = trace_summary;
  if (!extra.is_null()) j["extra"] = extra;
  json crit = json::array();
  for (const auto& c : criteria) {
    crit.push_back({{"name", c.name},
                    {"pass", c.pass},
                    {"worst", c.worst},
                    {"threshold", c.threshold},
                    {"detail", c.detail}});
  }
  j["criteria"] = crit;
  j["overall_pass"] = all_pass();
  j["timings"] = {{"wall_seconds", wall_seconds}};
  return j;
}

void write_report(const RunReport& report, const std::string& out_dir,
                  const std::string& format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path base = fs::path(out_dir) / report.scenario;

  if (format == "json" || format == "both") {
    std::ofstream out(base.string() + "_report.json");
    if (!out)
      throw std::runtime_error("cannot write report under " + out_dir);
    out << report.to_json().dump(2) << "\n";
  }
  if (format == "csv" || format == "both") {
    std::ofstream out(base.string() + "_criteria.csv");
    if (!out)
      throw std::runtime_error("cannot write report under " + out_dir);
    out << "name,pass,worst,threshold,detail\n";
    char buf[64];
    for (const auto& c : report.criteria) {
      std::snprintf(buf, sizeof buf, "%.17g", c.worst);
      out << c.name << "," << (c.pass ? 1 : 0) << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.17g", c.threshold);
      out << buf << ",\"" << c.detail << "\"\n";
    }
  }
}

void print_report(const RunReport& report) {
  std::printf("[%s] %s\n", report.command.c_str(), report.scenario.c_str());
  for (const auto& c : report.criteria) {
    std::printf("  %-28s %s  worst %.3e  (bound %.3e)%s%s\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.worst, c.threshold,
                c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  if (!report.criteria.empty())
    std::printf("  overall: %s\n", report.all_pass() ? "PASS" : "FAIL");
}

}  // namespace meanret::cli
