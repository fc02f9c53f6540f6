#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace fractrace::cli {

namespace {

Json config_json(const RunConfig& cfg) {
  Json c = Json::object();
  c["command"] = cfg.command();
  for (const auto& [k, v] : cfg.values()) c[k] = v;
  return c;
}

std::string cell(const Json& v, bool exact) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return exact ? "" : "n/a";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, exact ? "%.17g" : "%.12g", v.get<double>());
    return buf;
  }
  return v.dump();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

const char* version_string() { return FRACTRACE_VERSION; }

std::string render(const RunConfig& cfg, const CommandResult& r, int exit_code) {
  const std::string fmt = cfg.str("format");
  const std::string status = r.passed ? "pass" : "fail";
  if (fmt == "json") {
    Json doc = Json::object();
    doc["tool"] = "fractrace";
    doc["version"] = version_string();
    doc["command"] = cfg.command();
    doc["status"] = status;
    doc["exit_code"] = exit_code;
    doc["config"] = config_json(cfg);
    doc["result"] = r.summary;
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  if (fmt == "csv") {
    // config and version ride along as leading comment lines
    os << "# fractrace " << version_string() << "\n";
    os << "# command=" << cfg.command() << " status=" << status << "\n";
    for (const auto& [k, v] : cfg.values()) os << "# " << k << "=" << v << "\n";
    for (std::size_t j = 0; j < r.columns.size(); ++j) os << (j ? "," : "") << r.columns[j];
    os << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_quote(cell(row[j], true));
      os << "\n";
    }
    return os.str();
  }

  // text table
  std::vector<std::size_t> width(r.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t j = 0; j < r.columns.size(); ++j) width[j] = r.columns[j].size();
  for (const auto& row : r.rows) {
    std::vector<std::string> line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      line.push_back(cell(row[j], false));
      width[j] = std::max(width[j], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  os << "fractrace " << version_string() << "  " << cfg.command() << "  status=" << status << "\n";
  os << "config:";
  for (const auto& [k, v] : cfg.values()) os << " " << k << "=" << v;
  os << "\n";
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      os << (j ? "  " : "") << std::setw(static_cast<int>(width[j])) << line[j];
    }
    os << "\n";
  };
  emit(r.columns);
  for (const auto& line : cells) emit(line);
  return os.str();
}

std::string render_error(const RunConfig& cfg, const std::string& message, int exit_code) {
  Json doc = Json::object();
  doc["tool"] = "fractrace";
  doc["version"] = version_string();
  doc["command"] = cfg.command();
  doc["status"] = "error";
  doc["exit_code"] = exit_code;
  doc["config"] = config_json(cfg);
  doc["error"] = message;
  return doc.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto '" + path + "'");
  }
}

}  // namespace fractrace::cli
