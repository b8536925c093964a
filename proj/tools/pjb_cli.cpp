#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pjb/errors.hpp>
#include <pjb/scenario.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Model spaces, Jordan blocks and their submodules, driven by scenario files"};
  std::string scenario;
  std::string out_path;
  std::uint64_t seed = 0;
  std::vector<std::string> tols;
  bool quiet = false;
  int jobs = 1;
  app.add_option("--scenario", scenario, "Scenario file (JSON)")->required();
  app.add_option("--out", out_path, "Also write the report to this file");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized verification batches");
  app.add_option("--tol", tols, "Tolerance override name=value (repeatable)");
  app.add_flag("--quiet", quiet, "Suppress the summary on standard error");
  app.add_option("--jobs", jobs, "Actions evaluated concurrently")->check(CLI::Range(1, 256));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  pjb::RunOptions opts;
  opts.jobs = jobs;
  if (*seed_opt) opts.seed = seed;
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "ParseError: --tol " << t << ": expected name=value\n";
      return 2;
    }
    try {
      std::size_t used = 0;
      const std::string value = t.substr(eq + 1);
      opts.tolerances[t.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      std::cerr << "ParseError: --tol " << t << ": value is not a number\n";
      return 2;
    }
  }

  pjb::RunResult result;
  try {
    result = pjb::run_scenario_file(scenario, opts);
  } catch (const pjb::error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  std::cout << result.report;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << result.report;
  }
  if (!quiet) std::cerr << result.summary;
  return result.exit_code;
}
