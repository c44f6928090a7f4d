#pragma once

// Cantor-type sets: points whose digits at positions n, ..., n + r - 1 lie in
// windows [ceil(c_i A_i^n), ceil(2 c_i A_i^n)) for generations n, with filler
// digits in [1, M] elsewhere. Dimension is estimated from cover sums.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cfdim/cf.hpp"

namespace cfdim {

struct Occurrence {
  std::uint64_t start = 1;  // n = start + j * step
  std::uint64_t step = 1;
  bool contains(std::uint64_t n) const noexcept { return n >= start && (n - start) % step == 0; }
};

struct CantorSpec {
  int r = 1;
  std::vector<double> bases;   // A_0 .. A_{r-1}, each > 1
  std::vector<double> scales;  // c_0 .. c_{r-1}, each > 0
  Occurrence occurrence{};
  cf::Digit filler_cap = 50;   // M

  static CantorSpec uniform(int r, double B, cf::Digit M);
};

struct DigitWindow {
  cf::Digit first = 0;
  cf::Digit last = 0;  // inclusive
  double size() const noexcept { return static_cast<double>(last - first) + 1.0; }
};

// Integer windows at offsets 0..r-1 for generation n.
std::vector<DigitWindow> windows(const CantorSpec& spec, std::uint64_t n);

// Depth n + r - 1 cylinders of generation n, in lexicographic order.
std::vector<cf::Cylinder> generate_cover(const CantorSpec& spec, std::uint64_t n, std::uint64_t budget = 10000000,
                                         unsigned workers = 1);

// Root t of sum_i lengths_i^t = 1 (0 for a single interval).
double cover_exponent(std::span<const double> lengths, double tol = 1e-12);

// sum over cover elements |J|^t where J groups, inside each cylinder of the
// prefix up to offset `group` - 1, every completion through the remaining
// windows (group = r: the individual cylinders).
double cover_sum(const CantorSpec& spec, std::uint64_t n, double t, int group, std::size_t grid_size = 32);

struct GenerationRow {
  std::uint64_t n = 0;
  double count = 0.0;         // cylinders
  double total_length = 0.0;  // sum of their lengths
  double t_n = 0.0;           // min over groupings of the cover exponent
  int group = 0;              // grouping attaining it
  double box_ratio = 0.0;     // log(count) / -mean log length of the grouped cover
};

struct FractalEstimate {
  std::vector<GenerationRow> rows;
  double extrapolated = 0.0;  // t_n = t + c/n fitted on the last two generations
  double box_slope = 0.0;     // naive slope over the last two generations
  bool low_confidence = false;
};

FractalEstimate cover_dimension_estimate(const CantorSpec& spec, std::span<const std::uint64_t> generations,
                                         std::size_t grid_size = 32);

}  // namespace cfdim
