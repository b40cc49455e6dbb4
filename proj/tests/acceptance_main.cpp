#include <iostream>

#include <CLI11.hpp>

#include "traceiso/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria and prints one line per criterion"};
  traceiso::AcceptanceOptions options;
  app.add_option("--seed", options.seed, "base seed");
  app.add_option("--jobs", options.jobs, "criteria run in parallel");
  app.add_option("--only", options.only, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& r : traceiso::run_acceptance(options)) {
    std::cout << traceiso::format_result(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << failed << " criteria failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
