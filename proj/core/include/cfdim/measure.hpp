#pragma once

// Events A^k = {a_k >= t}, the counting statistic L_n(x, t), exact and
// operator-based measures of intersections of such events, the separated
// position tuples of a dyadic block, and the Monte Carlo dichotomy study.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "cfdim/cf.hpp"
#include "cfdim/digit_stream.hpp"
#include "cfdim/thresholds.hpp"

namespace cfdim {

// #{k <= n : a_k >= t}
std::uint64_t count_large(std::span<const cf::Digit> digits, std::uint64_t n, double t);

// All n <= N with L_n(x, psi(n)) >= r, increasing.
std::vector<std::uint64_t> hit_levels(std::span<const cf::Digit> digits, int r, const ThresholdFn& psi,
                                      std::uint64_t horizon);

struct EventSpec {
  std::vector<std::uint64_t> positions;  // k_1 < ... < k_r, all >= 1
  double threshold = 1.0;                // t >= 1
};

enum class MeasureMethod { enumeration, operator_iteration };

struct MeasureBracket {
  double lower = 0.0;
  double upper = 0.0;
  SamplingMeasure measure = SamplingMeasure::lebesgue;
  cf::Digit cap = 0;
  MeasureMethod method = MeasureMethod::enumeration;
  std::uint64_t words = 0;  // prefixes enumerated

  double mid() const noexcept { return 0.5 * (lower + upper); }
  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

// Enumerates prefixes of length k_r - 1 with digits up to the cap; the last
// constrained position is summed exactly as one interval per prefix. Digits
// above the cap at earlier positions only widen the upper bound.
MeasureBracket event_measure_exact(const EventSpec& spec, cf::Digit cap = 1000000,
                                   SamplingMeasure measure = SamplingMeasure::lebesgue,
                                   std::uint64_t word_budget = 100000000);

// The same measure as the integral of L_{D_{k_r}} ... L_{D_1} h over [0, 1],
// h the initial density, D_k = [ceil t, inf) at constrained positions; the
// bracket half-width is the change between two grid sizes.
MeasureBracket event_measure_operator(const EventSpec& spec, SamplingMeasure measure = SamplingMeasure::gauss,
                                      std::size_t grid_size = 48, unsigned workers = 1);

struct RatioBracket {
  double lower = 0.0;
  double upper = 0.0;
  MeasureBracket joint;
  double single = 0.0;  // mu(a_1 >= t)
};

// mu(intersection) / mu(a_1 >= t)^r; exact enumeration when affordable.
RatioBracket quasi_independence_ratio(const EventSpec& spec, cf::Digit cap = 1000000,
                                      SamplingMeasure measure = SamplingMeasure::gauss);

struct TupleCount {
  mpz_class count;        // dynamic programming
  mpz_class closed_form;  // C(L - (r-1) g, r)
  std::uint64_t gap = 0;  // g
  std::int64_t length = 0;  // L = 2^(m-1) - m^2
  bool valid = false;     // m >= 10
};

// r-tuples 2^(m-1) + m^2 < k_1 < ... < k_r <= 2^m with k_{j+1} - k_j - 1 >= g,
// g = ceil((m ln 2)^2) unless overridden (0: default).
TupleCount count_separated_tuples(int m, int r, std::uint64_t gap_override = 0);
std::uint64_t default_gap(int m);

struct DichotomyOptions {
  SamplingMeasure measure = SamplingMeasure::gauss;
  bool iid_digits = false;  // Gauss-Kuzmin surrogate instead of exact streams
  std::uint64_t digit_budget = std::uint64_t{1} << 20;
  unsigned workers = 1;
};

struct DichotomyRow {
  int m = 0;
  std::uint64_t n = 0;                 // 2^m
  std::uint64_t threshold = 0;         // ceil psi(2^m); 0 when beyond 2^62
  std::uint64_t block_hits = 0;        // samples with L_n >= r
  std::uint64_t cumulative_hits = 0;   // samples with a hit at some block <= m
  double block_freq = 0.0;
  double cum_freq = 0.0;
  double stderr_block = 0.0;
};

struct DichotomyReport {
  int r = 1;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<DichotomyRow> rows;
};

DichotomyReport dichotomy_experiment(int r, const ThresholdFn& psi, std::uint64_t samples, int m_lo, int m_hi,
                                     std::uint64_t seed, const DichotomyOptions& options = {});

}  // namespace cfdim
