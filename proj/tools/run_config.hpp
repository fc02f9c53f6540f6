#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractrace::cli {

/// Bad flags, bad config-file lines or inadmissible parameters; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat string map of every setting of one run.  Keys use underscores.
/// After merge() every key the command understands is present, so the map
/// is the effective configuration that gets echoed into outputs.
class RunConfig {
 public:
  RunConfig() = default;
  explicit RunConfig(std::string command) : command_(std::move(command)) {}

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;   // "1,2.5"
  std::vector<long> int_range(const std::string& key) const;  // "3..8" or "3,5"
  std::vector<double> real_grid(const std::string& key) const;  // "0.5,1" or "lo:hi:count"

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

/// Keys each command accepts, in flag order.
const std::vector<std::string>& known_keys(const std::string& command);

/// Normalises "max-iters" and "max_iters" to "max_iters".
std::string normalise_key(std::string key);

/// Reads `key = value` lines; '#' starts a comment; blank lines are skipped.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Flags override file values override defaults.  Defaults that depend on
/// other settings (grid size per kind, gamma per family) are resolved here,
/// so the result is fully explicit.  Throws UsageError on unknown keys.
RunConfig merge(const std::string& command, const std::map<std::string, std::string>& file,
                const std::map<std::string, std::string>& flags);

}  // namespace fractrace::cli
