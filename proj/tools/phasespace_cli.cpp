// phasespace_cli: run, sweep and self-check the phase-space scenarios.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasespace/config.hpp"
#include "phasespace/suite.hpp"

namespace {

using namespace phasespace;

int finish(const RunReport& r, bool quiet_summary = false) {
  if (r.exit_code == kExitOk || r.exit_code == kExitChecksFailed) {
    if (!quiet_summary) std::cout << r.summary.dump(2) << "\n";
  }
  if (!r.message.empty()) std::cerr << "error: " << r.message << "\n";
  return r.exit_code;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read configuration file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int do_run(const std::string& path, const std::string& out, long stride) {
  try {
    RunConfig c = load_config(path);
    if (stride >= 0) c.sampling.frame_stride = static_cast<std::size_t>(stride);
    return finish(run(c, out.empty() ? c.out_dir : out));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
}

int do_sweep(const std::string& path, const std::string& param, const std::vector<double>& values, const std::string& out) {
  try {
    const std::string text = read_text(path);
    const std::string dir = out.empty() ? parse_config(text).out_dir : out;
    return finish(sweep(text, param, values, dir));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
}

int do_suite(std::uint64_t seed) {
  std::size_t failed = 0;
  for (const SuiteCheck& c : run_property_suite(seed)) {
    std::printf("%s  %-14s %-46s value=%.3e tol=%.1e\n", c.passed ? "PASS" : "FAIL", c.module.c_str(), c.name.c_str(),
                c.value, c.tolerance);
    if (!c.passed) ++failed;
  }
  std::printf("%zu failed\n", failed);
  return failed == 0 ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space Aharonov-Bohm scenarios in the Wigner and Segal-Bargmann pictures"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long stride = -1;
  auto* run_cmd = app.add_subcommand("run", "run one configuration");
  run_cmd->add_option("config", config_path, "JSON configuration")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides the config)");
  run_cmd->add_option("--stride", stride, "keep every N-th frame (0 keeps none)")->check(CLI::NonNegativeNumber);

  std::uint64_t seed = 1;
  auto* suite_cmd = app.add_subcommand("suite", "run the invariant batteries of every module");
  suite_cmd->add_option("--seed", seed, "random seed");

  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a configuration for several values of one field");
  sweep_cmd->add_option("config", config_path, "JSON configuration")->required();
  sweep_cmd->add_option("--param", param, "field to vary")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*run_cmd) return do_run(config_path, out_dir, stride);
  if (*suite_cmd) return do_suite(seed);
  return do_sweep(config_path, param, values, out_dir);
}
