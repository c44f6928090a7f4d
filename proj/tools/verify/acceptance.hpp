#pragma once

// The acceptance criteria as runnable checks. Each check returns a
// deterministic one-line detail; wall-clock time is kept separately so the
// report text can be compared byte for byte across worker counts.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cfdim::verify {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  unsigned workers = 1;
  unsigned alternate_workers = 8;  // determinism rerun
  std::uint64_t seed = 20240611;
  bool determinism = true;         // run criterion 11
};

using Progress = std::function<void(const Criterion&)>;

// Runs criteria 1..10 and, when enabled, criterion 11 (a full rerun of 1..10
// at the alternate worker count compared line by line).
std::vector<Criterion> run_criteria(const VerifyOptions& options, const Progress& progress = {});

// "PASS C1 conformality anchor: ..." without timing.
std::string report_line(const Criterion& c);

}  // namespace cfdim::verify
