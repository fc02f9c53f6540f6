#pragma once

#include <string>

#include "commands.hpp"
#include "run_config.hpp"

namespace fractrace::cli {

const char* version_string();

/// Renders a finished run in cfg's format.  Every format carries the tool
/// version and the effective config.
std::string render(const RunConfig& cfg, const CommandResult& result, int exit_code);

/// Renders a run that stopped on an error (always JSON).
std::string render_error(const RunConfig& cfg, const std::string& message, int exit_code);

/// Writes content to path via a temporary file in the same directory and a
/// rename, so readers never see a partial file.  "-" means stdout.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace fractrace::cli
