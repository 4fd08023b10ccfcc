#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "txlaw/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  txlaw::AcceptanceOptions opts;
  opts.threads = int(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--criterion", ids, "criterion numbers (default: all)")->check(CLI::Range(1, txlaw::kCriterionCount));
  app.add_option("--threads", opts.threads);
  app.add_option("--N", opts.N);
  app.add_option("--runs", opts.runs);
  app.add_option("--seed", opts.seed);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "print every sub-check");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int k = 1; k <= txlaw::kCriterionCount; ++k) ids.push_back(k);
  bool all = true;
  for (const int id : ids) {
    const auto r = txlaw::run_criterion(id, opts);
    std::cout << txlaw::summary_line(r) << std::endl;
    if (verbose)
      for (const auto& c : r.checks)
        std::cout << "    " << (c.pass ? "ok   " : "FAIL ") << c.name << " = " << c.value << " (limit " << c.limit << ")\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
