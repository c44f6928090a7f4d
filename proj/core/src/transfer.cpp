#include "cfdim/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfdim/errors.hpp"
#include "cfdim/parallel.hpp"

namespace cfdim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// (1 - exp(-z)) / z with the removable singularity at 0 filled in.
double one_minus_exp_over(double z) {
  if (std::abs(z) < 1e-300) return 1.0;
  return -std::expm1(-z) / z;
}

// p^(1-sigma)/(sigma-1) - P^(1-sigma)/(sigma-1), P = +inf allowed.
double leading_difference(double sigma, double p, double big_p) {
  const double log_p = std::log(p);
  if (std::isinf(big_p)) {
    if (sigma <= 1.0) throw DomainError("power sum diverges for exponent <= 1");
    return std::exp((1.0 - sigma) * log_p) / (sigma - 1.0);
  }
  const double span = std::log(big_p) - log_p;
  return std::exp((1.0 - sigma) * log_p) * span * one_minus_exp_over((sigma - 1.0) * span);
}

// Euler-Maclaurin corrections q^-sigma/2 + sum B_2j/(2j)! (sigma)_{2j-1} q^(-sigma-2j+1).
double em_correction(double sigma, double q) {
  static constexpr double bernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const double base = std::exp(-sigma * std::log(q));
  double sum = 0.5 * base;
  double rising = sigma;  // (sigma)_{2j-1}
  double factorial = 2.0;
  double power = base / q;  // q^(-sigma-1)
  for (int j = 1; j <= 7; ++j) {
    const double term = bernoulli[j - 1] / factorial * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (sigma + 2 * j - 1) * (sigma + 2 * j);
    factorial *= (2.0 * j + 1) * (2.0 * j + 2);
    power /= q * q;
  }
  return sum;
}

}  // namespace

double power_sum(double sigma, double q, double count) {
  if (!(q > 0.0)) throw DomainError("power_sum needs q > 0");
  if (count <= 0.0) return 0.0;
  if (std::isinf(count) && sigma <= 1.0) throw DomainError("power sum diverges for exponent <= 1");
  constexpr double kShift = 16.0;
  double direct = 0.0;
  if (count <= 64.0) {
    for (double k = count - 1; k >= 0.0; k -= 1.0) direct += std::exp(-sigma * std::log(q + k));
    return direct;
  }
  const double head = std::max(0.0, std::ceil(kShift - q));
  for (double k = head - 1; k >= 0.0; k -= 1.0) direct += std::exp(-sigma * std::log(q + k));
  const double q0 = q + head;
  const double rest = count - head;
  const double q1 = q0 + rest;  // inf when unbounded
  double tail = leading_difference(sigma, q0, q1) + em_correction(sigma, q0);
  if (!std::isinf(q1)) tail -= em_correction(sigma, q1);
  return direct + tail;
}

double power_integral(double sigma, double p0, double p1) {
  if (!(p0 > 0.0) || !(p1 >= p0)) throw DomainError("power_integral needs 0 < p0 <= p1");
  return leading_difference(sigma, p0, p1);
}

TransferOperator::TransferOperator(const ChebyshevGrid& grid, double s, TransferOptions options)
    : grid_(grid), s_(s), options_(options) {
  const DigitRange& d = options_.digits;
  if (d.first < 1 || (d.bounded() && d.last < d.first)) throw DomainError("empty digit range");
  if (options_.cap < 1) throw DomainError("digit cap must be >= 1");
  const bool unbounded_tail = !d.bounded();
  if (unbounded_tail && options_.tail != TailMode::none && !(s > 0.5)) {
    throw DomainError("the transfer operator diverges for s <= 1/2");
  }
  const double first = static_cast<double>(d.first);
  direct_count_ = d.bounded() ? std::min<std::uint64_t>(d.last - d.first + 1, options_.cap) : options_.cap;
  tail_first_ = first + static_cast<double>(direct_count_);
  tail_count_ = d.bounded() ? static_cast<double>(d.last - d.first + 1 - direct_count_) : kInf;
  has_tail_ = options_.tail != TailMode::none && tail_count_ > 0.0;

  const std::size_t n = grid_.size();
  std::vector<std::vector<double>> taylor;
  if (has_tail_ && options_.tail == TailMode::zeta) {
    // Pick the order balancing truncation q^-(K+1) against the growth of
    // the derivative functionals, roughly (2 n^2 / q)^K / K!.
    const double q = tail_first_;
    const double growth = 2.0 * static_cast<double>(n) * static_cast<double>(n) / q;
    double best = kInf;
    double amplification = 1.0;
    for (std::size_t k = 1; k <= 12; ++k) {
      amplification *= growth / static_cast<double>(k);
      const double err = std::max(std::pow(q, -static_cast<double>(k + 1)), kEps * amplification);
      if (err < best) {
        best = err;
        taylor_order_ = k;
      }
    }
    taylor = grid_.taylor_rows(taylor_order_ + 1);
    next_taylor_row_ = taylor.back();
    next_power_sum_.assign(n, 0.0);
  }
  if (has_tail_ && options_.tail == TailMode::integral_bound) {
    tail_low_.assign(n, 0.0);
    tail_high_.assign(n, 0.0);
    far_row_.assign(n * n, 0.0);
  }
  matrix_.assign(n * n, 0.0);
  abs_row_sum_.assign(n, 0.0);
  parallel_for(n, options_.workers, [&](std::size_t i) { build_row(i, taylor); });

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, abs_row_sum_[i]);
  relative_error_ = 4.0 * kEps * (std::log2(static_cast<double>(direct_count_) + 1.0) + static_cast<double>(n)) * worst;
}

void TransferOperator::build_row(std::size_t i, const std::vector<std::vector<double>>& taylor) {
  const std::size_t n = grid_.size();
  const double x = grid_.nodes()[i];
  const double two_s = 2.0 * s_;
  std::span<double> row(matrix_.data() + i * n, n);
  std::vector<double> basis(n);
  const double first = static_cast<double>(options_.digits.first);
  // Descending digits: small terms are accumulated first.
  for (std::uint64_t k = direct_count_; k-- > 0;) {
    const double p = first + static_cast<double>(k) + x;
    const double weight = std::exp(-two_s * std::log(p));
    grid_.interpolation_row(1.0 / p, basis);
    for (std::size_t j = 0; j < n; ++j) row[j] += weight * basis[j];
  }
  if (has_tail_) {
    const double q = tail_first_ + x;
    if (options_.tail == TailMode::zeta) {
      for (std::size_t k = 0; k <= taylor_order_; ++k) {
        const double z = power_sum(two_s + static_cast<double>(k), q, tail_count_);
        for (std::size_t j = 0; j < n; ++j) row[j] += z * taylor[k][j];
      }
      next_power_sum_[i] = power_sum(two_s + static_cast<double>(taylor_order_ + 1), q, tail_count_);
    } else {
      const double q_end = tail_count_ + q;  // inf when unbounded
      tail_low_[i] = power_integral(two_s, q, q_end);
      tail_high_[i] = power_integral(two_s, q - 1.0, q_end - 1.0);
      grid_.interpolation_row(1.0 / q, std::span<double>(far_row_.data() + i * n, n));
      row[0] += 0.5 * (tail_low_[i] + tail_high_[i]);  // node 0 is x = 0
    }
  }
  double abs_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) abs_sum += std::abs(row[j]);
  abs_row_sum_[i] = abs_sum;
}

std::vector<double> TransferOperator::apply(std::span<const double> f) const {
  const std::size_t n = grid_.size();
  if (f.size() != n) throw DomainError("function values do not match the grid");
  std::vector<double> out(n, 0.0);
  parallel_for(n, options_.workers, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += matrix_[i * n + j] * f[j];
    out[i] = acc;
  });
  return out;
}

BracketedValues TransferOperator::apply_bracketed(std::span<const double> f) const {
  const std::size_t n = grid_.size();
  BracketedValues out;
  out.value = apply(f);
  out.lower = out.value;
  out.upper = out.value;
  double f_abs = 0.0;
  for (double v : f) f_abs = std::max(f_abs, std::abs(v));
  double next_coeff = 0.0;
  if (!next_taylor_row_.empty()) {
    for (std::size_t j = 0; j < n; ++j) next_coeff += next_taylor_row_[j] * f[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    double rounding = 4.0 * kEps * abs_row_sum_[i] * f_abs * (std::log2(static_cast<double>(n)) + 8.0);
    if (has_tail_ && options_.tail == TailMode::zeta) {
      // truncation estimated by the first omitted Taylor term, doubled
      rounding += 2.0 * std::abs(next_coeff) * next_power_sum_[i];
    }
    out.lower[i] -= rounding;
    out.upper[i] += rounding;
    if (has_tail_ && options_.tail == TailMode::integral_bound) {
      // f on [0, 1/q] is taken between its endpoint values
      const double at_zero = f[0];
      double at_far = 0.0;
      for (std::size_t j = 0; j < n; ++j) at_far += far_row_[i * n + j] * f[j];
      const double lo = std::min(at_zero, at_far), hi = std::max(at_zero, at_far);
      const double mid = 0.5 * (tail_low_[i] + tail_high_[i]) * at_zero;
      const double lo_tail = lo >= 0 ? lo * tail_low_[i] : lo * tail_high_[i];
      const double hi_tail = hi >= 0 ? hi * tail_high_[i] : hi * tail_low_[i];
      out.lower[i] += lo_tail - mid;
      out.upper[i] += hi_tail - mid;
    }
  }
  return out;
}

}  // namespace cfdim
