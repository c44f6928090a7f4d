#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "acceptance.hpp"

int main() {
  cfdim::verify::VerifyOptions options;
  if (const char* w = std::getenv("CFDIM_WORKERS")) options.workers = static_cast<unsigned>(std::atoi(w));
  if (options.workers == 0) options.workers = 1;
  bool all = true;
  cfdim::verify::run_criteria(options, [&](const cfdim::verify::Criterion& c) {
    std::cout << cfdim::verify::report_line(c) << std::endl;
    std::fprintf(stderr, "  C%d: %.2f s\n", c.id, c.seconds);
    all = all && c.pass;
  });
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
