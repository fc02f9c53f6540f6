#include <algorithm>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fractrace/errors.hpp"
#include "report.hpp"
#include "run_config.hpp"

using namespace fractrace::cli;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

const std::map<std::string, std::string>& help_text() {
  static const std::map<std::string, std::string> h = {
      {"n", "dimension (constants: list or range such as 3..8)"},
      {"m", "number of traced coordinates (constants: list or range)"},
      {"alpha", "order alpha (constants: list or lo:hi:count)"},
      {"residual_tol", "pass threshold on identity residuals"},
      {"kind", "sobolev | hls | trace-norm | trace-sobolev"},
      {"family", "extremizer | gaussian | random"},
      {"gamma", "extremizer scale"},
      {"L", "box length, one value or one per axis (comma separated)"},
      {"N", "points per axis, one value or one per axis"},
      {"seed", "random seed"},
      {"attainment_tol", "extremizer inputs pass when ratio >= 1 - tol"},
      {"truncation_radius", "level-set truncation radius as a fraction of L"},
      {"quad_tol", "relative tolerance of the quadrature"},
      {"band_fraction", "random fields keep |k| below this fraction of Nyquist"},
      {"objective", "sobolev | trace-sobolev"},
      {"max_iters", "iteration cap"},
      {"step", "largest trial step"},
      {"step_decay", "backtracking factor"},
      {"grad_tol", "stop when the relative gradient norm drops below this"},
      {"stall_tol", "relative gain counted as no progress"},
      {"stall_window", "consecutive stalled iterations that stop the run"},
      {"target_fraction", "pass when final quotient >= fraction x sharp constant"},
      {"fit_window", "fit within this fraction of L around the peak (0: whole box)"},
      {"trace_output", "also write the per-iteration trace CSV here"},
      {"tolerance", "pass threshold"},
      {"points", "radii (comma separated) where the relation is tested"},
      {"output", "output path, '-' for stdout"},
      {"format", "json | csv | table"},
  };
  return h;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp constants and extremizer checks for fractional trace inequalities", "fractrace"};
  app.set_version_flag("--version", std::string("fractrace ") + version_string());
  app.require_subcommand(1);

  const std::map<std::string, std::string> about = {
      {"constants", "tabulate sharp constants and identity residuals"},
      {"verify", "evaluate a Rayleigh quotient against its sharp constant"},
      {"optimize", "maximise a quotient by gradient ascent and fit the result"},
      {"riesz-check", "compare the Fourier and physical forms of the Riesz energy"},
      {"hls-check", "test the Euler-Lagrange relation of the HLS optimizer"},
  };
  std::map<std::string, Subcommand> subs;
  for (const auto& [name, desc] : about) {
    auto& s = subs[name];
    s.app = app.add_subcommand(name, desc);
    s.app->add_option("--config", s.config_path, "key=value config file (flags override it)");
    for (const auto& key : known_keys(name)) {
      const auto it = help_text().find(key);
      s.options[key] = s.app->add_option(flag_name(key), s.storage[key],
                                         it == help_text().end() ? "" : it->second);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  std::string command;
  for (const auto& [name, s] : subs) {
    if (s.app->parsed()) command = name;
  }
  const auto& sub = subs.at(command);

  RunConfig cfg(command);
  try {
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : sub.options) {
      if (opt->count() > 0) flags[key] = sub.storage.at(key);
    }
    const auto file = sub.config_path.empty() ? std::map<std::string, std::string>{}
                                              : read_config_file(sub.config_path);
    cfg = merge(command, file, flags);
  } catch (const std::exception& e) {
    std::cerr << "fractrace: usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string output = cfg.str("output");
  try {
    const auto result = run_command(cfg);
    const int code = result.passed ? kExitPass : kExitNumerical;
    for (const auto& [path, content] : result.side_files) write_atomic(path, content);
    write_atomic(output, render(cfg, result, code));
    if (!result.passed) std::cerr << "fractrace: " << command << ": check failed\n";
    return code;
  } catch (const UsageError& e) {
    std::cerr << "fractrace: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fractrace::DomainError& e) {
    std::cerr << "fractrace: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "fractrace: numerical error: " << e.what() << "\n";
    try {
      write_atomic(output, render_error(cfg, e.what(), kExitNumerical));
    } catch (const std::exception& w) {
      std::cerr << "fractrace: " << w.what() << "\n";
    }
    return kExitNumerical;
  }
}
