#pragma once

// Threshold functions psi : N -> (0, inf), their monotone envelopes
// psi~(n) = min_{m >= n} psi(m), the series criterion
//   sum_n n^(r-1) psi~(n)^(-r)
// and the growth exponents
//   log B = liminf log psi~(n) / n,   log b = liminf log log psi~(n) / n.
// Everything is evaluated in log space; psi(n) itself is never formed.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cfdim {

class ThresholdFn;

namespace psi {

// n^alpha (log n)^c, with log n read as log max(n, 2) so psi(1) stays positive.
struct PolyLog {
  double alpha;
  double c;
};
// base^n
struct Geometric {
  double base;
};
// delta^n * inner(n)
struct ScaledGeometric {
  double delta;
  std::shared_ptr<const ThresholdFn> inner;
};
// c^(b^n)
struct DoubleExp {
  double c;
  double b;
};
// explicit values psi(1..size)
struct Table {
  std::vector<double> values;
  std::string source;
};
// the monotone envelope of another threshold function
struct Enveloped {
  std::shared_ptr<const ThresholdFn> inner;
};

}  // namespace psi

struct MonotoneHint {
  enum class Kind { nondecreasing, eventually_nondecreasing, unknown };
  Kind kind = Kind::unknown;
  std::uint64_t from = 1;  // N0 for eventually_nondecreasing
};

class ThresholdFn {
 public:
  using Kind = std::variant<psi::PolyLog, psi::Geometric, psi::ScaledGeometric, psi::DoubleExp,
                            psi::Table, psi::Enveloped>;

  static ThresholdFn poly_log(double alpha, double c);
  static ThresholdFn geometric(double base);
  static ThresholdFn scaled_geometric(double delta, ThresholdFn inner);
  static ThresholdFn double_exp(double c, double b);
  static ThresholdFn table(std::vector<double> values, MonotoneHint hint = {}, std::string source = {});

  const Kind& kind() const noexcept { return kind_; }
  const MonotoneHint& hint() const noexcept { return hint_; }
  bool is_table() const noexcept;
  // Largest n at which psi is defined (tables only).
  std::optional<std::uint64_t> domain_limit() const;

  // ln psi(n); +inf when psi(n) overflows (double_exp).
  double log_value(std::uint64_t n) const;
  // ln ln psi(n); NaN when psi(n) <= 1.
  double log_log_value(std::uint64_t n) const;
  // Smallest integer k with k >= psi(n), or nullopt when it exceeds 2^62.
  // Values within 1e-12 relative of an integer are snapped to it.
  std::optional<std::uint64_t> ceil_value(std::uint64_t n) const;

  // Grammar string, e.g. "poly_log(1,0.4)".
  std::string describe() const;

 private:
  ThresholdFn(Kind kind, MonotoneHint hint) : kind_(std::move(kind)), hint_(hint) {}
  friend ThresholdFn monotone_envelope(const ThresholdFn& fn);

  Kind kind_;
  MonotoneHint hint_;
};

// psi parser for the CLI grammar:
//   poly_log(a,c) | geometric(B) | scaled_geometric(d, <psi>) | double_exp(c,b) | table:FILE
ThresholdFn parse_psi(std::string_view text);

// psi~ as a threshold function in its own right.
ThresholdFn monotone_envelope(const ThresholdFn& fn);

struct EnvelopeTable {
  std::vector<double> log_values;  // ln psi~(1..N)
  bool upper_bound_only = false;   // suffix minimum beyond the horizon unknown
};

EnvelopeTable envelope(const ThresholdFn& fn, std::uint64_t horizon);

enum class Verdict { convergent, divergent, undetermined };
enum class VerdictMethod { analytic, numeric };

std::string_view to_string(Verdict v);
std::string_view to_string(VerdictMethod m);

struct SeriesVerdict {
  Verdict verdict = Verdict::undetermined;
  VerdictMethod method = VerdictMethod::analytic;
  std::vector<std::pair<std::uint64_t, double>> partial_sums;  // (N, sum_{n<=N})
  std::uint64_t horizon = 0;
  std::string rule;
};

SeriesVerdict series_classify(int r, const ThresholdFn& fn, std::uint64_t horizon = 1u << 16);

struct DyadicBlock {
  int j = 0;
  double block_sum = 0.0;    // sum_{2^j <= n < 2^{j+1}} n^(r-1) psi(n)^(-r)
  double reference = 0.0;    // (2^j / psi(2^j))^r
  double lower_slack = 0.0;  // block_sum / (2^-r * reference_{j+1})
  double upper_slack = 0.0;  // 2^r * reference_j / block_sum
};

struct DyadicReport {
  std::vector<DyadicBlock> blocks;
  double worst_constant = 0.0;
  bool sandwich_holds = false;   // every slack >= 1
  bool within_constant = false;  // worst_constant <= 2^(2r)
};

DyadicReport dyadic_equivalence_check(int r, const ThresholdFn& fn, int max_j);

struct GrowthExponents {
  double log_B = 0.0;  // +inf allowed
  double log_b = 0.0;  // +inf allowed
  bool estimate = false;
  std::uint64_t argmin_B = 0;
  std::uint64_t argmin_b = 0;
  bool skipped_points = false;  // psi~(n) <= 1 points dropped from log log
};

GrowthExponents growth_exponents(const ThresholdFn& fn, std::uint64_t horizon = 4096);

}  // namespace cfdim
