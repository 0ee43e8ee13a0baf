#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mifit/io/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal invariant subspace fitting"};
  std::string problem;
  std::string out = "-";
  mifit::io::RunOptions opts;
  std::size_t probe = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;

  app.add_option("--problem", problem, "Problem document (JSON)")->required();
  app.add_option("--out", out, "Report destination, '-' for standard output");
  auto* probe_opt = app.add_option("--probe-samples", probe, "Random candidates for the optimality probe (0 disables)");
  auto* seed_opt = app.add_option("--seed", seed, "Probe seed");
  auto* eps_opt = app.add_option("--epsilon", epsilon, "Relative rank threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (*probe_opt) opts.probe_samples = probe;
  if (*seed_opt) opts.seed = seed;
  if (*eps_opt) opts.epsilon = epsilon;

  const mifit::io::RunResult r = mifit::io::run_file(problem, opts);
  if (r.status != 0) {
    std::cerr << "mifit: " << r.diagnostic << "\n";
    return r.status;
  }
  if (out == "-") {
    std::cout << r.report;
    return std::cout ? 0 : 1;
  }
  std::ofstream file(out, std::ios::binary);
  file << r.report;
  if (!file) {
    std::cerr << "mifit: cannot write '" << out << "'\n";
    return 1;
  }
  return 0;
}
