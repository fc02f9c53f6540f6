#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace fractrace::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("setting '" + key + "': expected a number, got '" + text + "'");
  }
}

long parse_int(const std::string& key, const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("setting '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

const std::vector<std::string> kCommon = {"output", "format"};

}  // namespace

std::string normalise_key(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string RunConfig::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("missing setting '" + key + "'");
  return it->second;
}

double RunConfig::real(const std::string& key) const { return parse_real(key, str(key)); }

long RunConfig::integer(const std::string& key) const { return parse_int(key, str(key)); }

std::uint64_t RunConfig::u64(const std::string& key) const {
  const std::string text = str(key);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("setting '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split(str(key), ',')) out.push_back(parse_real(key, part));
  if (out.empty()) throw UsageError("setting '" + key + "' is empty");
  return out;
}

std::vector<long> RunConfig::int_range(const std::string& key) const {
  std::vector<long> out;
  for (const auto& part : split(str(key), ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(key, part));
      continue;
    }
    const long lo = parse_int(key, trim(part.substr(0, dots)));
    const long hi = parse_int(key, trim(part.substr(dots + 2)));
    if (hi < lo) throw UsageError("setting '" + key + "': empty range '" + part + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw UsageError("setting '" + key + "' is empty");
  return out;
}

std::vector<double> RunConfig::real_grid(const std::string& key) const {
  const std::string text = str(key);
  const auto parts = split(text, ':');
  if (parts.size() == 1) return reals(key);
  if (parts.size() != 3) throw UsageError("setting '" + key + "': use lo:hi:count");
  const double lo = parse_real(key, parts[0]);
  const double hi = parse_real(key, parts[1]);
  const long count = parse_int(key, parts[2]);
  if (count < 1) throw UsageError("setting '" + key + "': count must be >= 1");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  }
  return out;
}

const std::vector<std::string>& known_keys(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"constants", {"n", "m", "alpha", "residual_tol"}},
      {"verify",
       {"kind", "n", "m", "alpha", "family", "gamma", "L", "N", "seed", "attainment_tol",
        "truncation_radius", "quad_tol", "band_fraction"}},
      {"optimize",
       {"objective", "n", "m", "alpha", "L", "N", "seed", "max_iters", "step", "step_decay",
        "grad_tol", "stall_tol", "stall_window", "band_fraction", "target_fraction",
        "fit_window", "trace_output"}},
      {"riesz-check", {"n", "alpha", "L", "N", "tolerance"}},
      {"hls-check", {"n", "alpha", "gamma", "points", "tolerance", "quad_tol"}},
  };
  static std::map<std::string, std::vector<std::string>> with_common;
  if (with_common.empty()) {
    for (const auto& [cmd, keys] : table) {
      auto all = keys;
      all.insert(all.end(), kCommon.begin(), kCommon.end());
      with_common[cmd] = all;
    }
  }
  const auto it = with_common.find(command);
  if (it == with_common.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = normalise_key(trim(line.substr(0, eq)));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

void apply(RunConfig& cfg, const std::map<std::string, std::string>& src, const char* origin) {
  const auto& keys = known_keys(cfg.command());
  for (const auto& [k, v] : src) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw UsageError(std::string("unknown setting '") + k + "' in " + origin + " for command '" +
                       cfg.command() + "'");
    }
    cfg.set(k, v);
  }
}

void fill(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (!cfg.has(key)) cfg.set(key, value);
}

std::string verify_kind_key(const RunConfig& cfg) {
  std::string k = cfg.str("kind");
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

}  // namespace

RunConfig merge(const std::string& command, const std::map<std::string, std::string>& file,
                const std::map<std::string, std::string>& flags) {
  RunConfig cfg(command);
  (void)known_keys(command);
  apply(cfg, file, "config file");
  apply(cfg, flags, "flags");

  fill(cfg, "output", "-");
  if (command == "constants") {
    fill(cfg, "format", "table");
    fill(cfg, "n", "3..8");
    fill(cfg, "m", "1");
    fill(cfg, "alpha", "1");
    fill(cfg, "residual_tol", "1e-12");
  } else if (command == "verify") {
    fill(cfg, "format", "json");
    fill(cfg, "kind", "sobolev");
    const std::string kind = verify_kind_key(cfg);
    cfg.set("kind", kind);
    const bool trace = kind == "trace-norm" || kind == "trace-sobolev";
    fill(cfg, "n", trace ? "2" : "1");
    fill(cfg, "m", trace ? "1" : "0");
    fill(cfg, "alpha", trace ? "0.75" : "0.25");
    fill(cfg, "family", "extremizer");
    fill(cfg, "seed", "7");
    fill(cfg, "band_fraction", "0.25");
    fill(cfg, "quad_tol", "1e-7");
    fill(cfg, "truncation_radius", "0.25");
    if (kind == "sobolev") {
      fill(cfg, "L", "400");
      fill(cfg, "N", "8192");
      fill(cfg, "gamma", "0.1");
      fill(cfg, "attainment_tol", "0.03");
    } else if (kind == "hls") {
      fill(cfg, "L", "400");
      fill(cfg, "N", "4096");
      fill(cfg, "gamma", "1");
      fill(cfg, "attainment_tol", "0.03");
    } else if (kind == "trace-norm") {
      fill(cfg, "L", "50");
      fill(cfg, "N", "1024");
      fill(cfg, "gamma", "2");
      fill(cfg, "attainment_tol", "0.05");
    } else {
      fill(cfg, "L", "200");
      fill(cfg, "N", "1024");
      fill(cfg, "gamma", "1");
      fill(cfg, "attainment_tol", "0.07");
    }
  } else if (command == "optimize") {
    fill(cfg, "format", "json");
    fill(cfg, "objective", "sobolev");
    const bool trace = cfg.str("objective") != "sobolev";
    fill(cfg, "n", trace ? "2" : "1");
    fill(cfg, "m", trace ? "1" : "0");
    fill(cfg, "alpha", trace ? "0.75" : "0.25");
    const bool one_d = cfg.str("n") == "1";
    fill(cfg, "L", one_d ? "200" : "50");
    fill(cfg, "N", one_d ? "32768" : "256");
    fill(cfg, "seed", "42");
    fill(cfg, "max_iters", "2000");
    fill(cfg, "step", "1");
    fill(cfg, "step_decay", "0.5");
    fill(cfg, "grad_tol", "1e-9");
    fill(cfg, "stall_tol", "1e-12");
    fill(cfg, "stall_window", "20");
    fill(cfg, "band_fraction", "0.25");
    fill(cfg, "target_fraction", "0.99");
    fill(cfg, "fit_window", "0.25");
    fill(cfg, "trace_output", "");
  } else if (command == "riesz-check") {
    fill(cfg, "format", "json");
    fill(cfg, "n", "1");
    const bool one_d = cfg.str("n") == "1";
    fill(cfg, "alpha", one_d ? "0.25" : "0.5");
    fill(cfg, "L", "40");
    fill(cfg, "N", one_d ? "2048" : "256");
    fill(cfg, "tolerance", one_d ? "1e-2" : "2e-2");
  } else if (command == "hls-check") {
    fill(cfg, "format", "json");
    fill(cfg, "n", "1");
    fill(cfg, "alpha", "0.25");
    fill(cfg, "gamma", "1");
    fill(cfg, "points", "0,0.5,1,3,10");
    fill(cfg, "tolerance", "0.05");
    fill(cfg, "quad_tol", "1e-10");
  }
  const std::string fmt = cfg.str("format");
  static const std::set<std::string> formats = {"json", "csv", "table"};
  if (!formats.count(fmt)) throw UsageError("format must be json, csv or table");
  return cfg;
}

}  // namespace fractrace::cli
