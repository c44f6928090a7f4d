#pragma once

// The pressure P(s) = P(T, -s log|T'|) of the Gauss map, in natural-log
// units, from the leading eigenvalue of the transfer operator or from
// cylinder sums Z_n(s) = sum_{a in N^n} q_n(a)^(-2s).

#include <cstddef>
#include <memory>
#include <vector>

#include "cfdim/cf.hpp"
#include "cfdim/transfer.hpp"

namespace cfdim {

enum class PressureMethod { eigen, cylinder };

struct PressureEstimate {
  double s = 0.0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  PressureMethod method = PressureMethod::eigen;
  std::size_t grid_size = 0;
  std::size_t depth = 0;       // cylinder depth n
  cf::Digit cap = 0;           // 0: every digit
  std::size_t iterations = 0;  // power iterations
  double ratio_estimate = 0.0; // cylinder only: ln(Z_n / Z_{n-1})
};

struct EigenOptions {
  std::size_t grid_size = 128;
  cf::Digit cap = 10000;
  TailMode tail = TailMode::zeta;
  double tol = 1e-12;  // relative spread of the Collatz-Wielandt ratios
  std::size_t max_iterations = 10000;
  unsigned workers = 1;
};

PressureEstimate pressure_eigen(double s, const EigenOptions& options = {});

struct CylinderOptions {
  std::size_t grid_size = 64;
  cf::Digit cap = 0;  // 0: all digits, the tail summed in closed form
  unsigned workers = 1;
};

// Z_1(s) .. Z_n(s), each the capped cylinder sum.
std::vector<double> cylinder_sums(double s, std::size_t depth, const CylinderOptions& options = {});

// value = ln(Z_n)/n with the sub/super-multiplicativity bracket
// [value - s ln 4 / n, value].
PressureEstimate pressure_cylinder(double s, std::size_t depth, const CylinderOptions& options = {});

struct CurveOptions {
  double s_max = 1.05;
  std::size_t nodes = 48;
  EigenOptions eigen{64, 2000, TailMode::zeta, 1e-13, 10000, 1};
};

// P(s) on (1/2, s_max] through a Chebyshev interpolant of the analytic
// function P(s) + ln(2s - 1).
class PressureCurve {
 public:
  explicit PressureCurve(const CurveOptions& options = {});

  double s_max() const noexcept { return s_max_; }
  double operator()(double s) const;
  double derivative(double s) const;
  // Interpolation error bound from the coefficient tail plus eigenvalue accuracy.
  double error_estimate() const noexcept { return error_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  // Process-wide curve built on first use; safe under concurrent callers.
  static std::shared_ptr<const PressureCurve> shared();
  static void clear_shared();
  // Options for the next shared curve; drops the current one.
  static void configure_shared(const CurveOptions& options);

 private:
  double q_value(double s) const;
  double t_of(double s) const { return (2.0 * s - 1.0 - s_max_ + 0.5) / (s_max_ - 0.5); }

  double s_max_;
  std::vector<double> coeffs_;
  double error_ = 0.0;
};

}  // namespace cfdim
