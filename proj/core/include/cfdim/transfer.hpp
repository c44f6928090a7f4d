#pragma once

// The weighted transfer operator of the Gauss map
//   (L f)(x) = sum_{a in D} (a + x)^(-2s) f(1 / (a + x))
// discretized on a Chebyshev grid. Digits up to the cap are summed directly;
// the remaining digits are either dropped, enclosed by integrals, or summed
// in closed form through a Taylor expansion of f at 0 and Hurwitz-type
// power sums.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cfdim/cf.hpp"
#include "cfdim/chebyshev.hpp"

namespace cfdim {

enum class TailMode { none, integral_bound, zeta };

struct DigitRange {
  cf::Digit first = 1;
  cf::Digit last = 0;  // 0: unbounded
  bool bounded() const noexcept { return last != 0; }
};

struct TransferOptions {
  DigitRange digits{};
  cf::Digit cap = 10000;  // digits summed term by term, counted from digits.first
  TailMode tail = TailMode::zeta;
  unsigned workers = 1;
};

// sum_{k=0}^{count-1} (q + k)^(-sigma); count may be +inf when sigma > 1.
double power_sum(double sigma, double q, double count);
// integral of p^(-sigma) over [p0, p1]; p1 may be +inf when sigma > 1.
double power_integral(double sigma, double p0, double p1);

struct BracketedValues {
  std::vector<double> value;
  std::vector<double> lower;
  std::vector<double> upper;
};

class TransferOperator {
 public:
  TransferOperator(const ChebyshevGrid& grid, double s, TransferOptions options = {});

  const ChebyshevGrid& grid() const noexcept { return grid_; }
  double s() const noexcept { return s_; }
  const TransferOptions& options() const noexcept { return options_; }

  // Row-major size x size matrix of the linear point operator. Integral-bound
  // tails enter it through their midpoint times f(0).
  const std::vector<double>& matrix() const noexcept { return matrix_; }

  std::vector<double> apply(std::span<const double> f) const;
  BracketedValues apply_bracketed(std::span<const double> f) const;

  // Upper bound on |error| of apply(f) relative to sum_j |f_j| per row, from
  // rounding and tail truncation; used to widen eigenvalue brackets.
  double relative_error_bound() const noexcept { return relative_error_; }

 private:
  void build_row(std::size_t i, const std::vector<std::vector<double>>& taylor);

  ChebyshevGrid grid_;
  double s_;
  TransferOptions options_;
  std::size_t taylor_order_ = 0;
  bool has_tail_ = false;
  std::uint64_t direct_count_ = 0;
  double tail_first_ = 0.0;
  double tail_count_ = 0.0;
  std::vector<double> matrix_;
  std::vector<double> abs_row_sum_;
  // zeta tail: next Taylor functional and its power sums per node
  std::vector<double> next_taylor_row_;
  std::vector<double> next_power_sum_;
  // integral tail: enclosure integrals and interpolation rows at 1/(first+x)
  std::vector<double> tail_low_;
  std::vector<double> tail_high_;
  std::vector<double> far_row_;
  double relative_error_ = 0.0;
};

}  // namespace cfdim
