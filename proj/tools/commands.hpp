#pragma once

#include "pfcalc/geometry.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pfcalc::cli {

/// Bad config or arguments (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  GeometryOptions geometry;
  std::uint64_t seed = 1;
};

/// A command result: header fields plus one table. Columns listed in
/// csv_only carry run-dependent data (timings) and are left out of text and
/// JSON output.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::set<std::string> csv_only;
};

const std::vector<std::string>& command_names();

Report run_command(const std::string& command, const nlohmann::json& config, const RunOptions& opts);

std::string render(const Report& r, const std::string& format);

}  // namespace pfcalc::cli
