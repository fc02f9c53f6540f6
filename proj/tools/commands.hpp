#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace fractrace::cli {

using Json = nlohmann::ordered_json;

/// What a command produced, before formatting.
struct CommandResult {
  bool passed = false;
  Json summary = Json::object();       // command-specific result object
  std::vector<std::string> columns;     // tabular view, one row per record
  std::vector<std::vector<Json>> rows;
  std::vector<std::pair<std::string, std::string>> side_files;  // (path, content)
};

CommandResult run_constants(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg);
CommandResult run_optimize(const RunConfig& cfg);
CommandResult run_riesz_check(const RunConfig& cfg);
CommandResult run_hls_check(const RunConfig& cfg);

CommandResult run_command(const RunConfig& cfg);

}  // namespace fractrace::cli
