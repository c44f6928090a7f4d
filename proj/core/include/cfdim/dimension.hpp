#pragma once

// The dimension number s(r, B): the root of
//   g(s) = P(s) - (s + (2s - 1)(r - 1)) ln B,
// and the regime dispatcher over the growth exponents of psi:
//   1 when B = 1, s(r, B) when 1 < B < inf, 1/(1 + b) when B = inf.

#include <cstddef>
#include <memory>
#include <vector>

#include "cfdim/pressure.hpp"
#include "cfdim/thresholds.hpp"

namespace cfdim {

enum class Regime { b_equals_one, finite_b, b_infinite };

std::string_view to_string(Regime regime);

struct SolverStep {
  double lo = 0.0;
  double hi = 0.0;
  double mid = 0.0;
  double g_mid = 0.0;
};

struct DimensionResult {
  Regime regime = Regime::finite_b;
  double value = 1.0;
  int r = 1;
  double log_B = 0.0;  // may be +inf
  double log_b = 0.0;  // may be +inf
  bool estimate = false;
  double lower_endpoint = 0.0;  // 1/2 + eps actually used
  double achievable = 0.0;      // accuracy in s implied by the pressure error
  std::vector<SolverStep> trace;
};

// Root of g on [1/2 + eps, 1] by bisection down to `tol`, using the cached
// pressure curve (or `curve` when given).
DimensionResult solve_dimension(int r, double B, double tol = 1e-4,
                                std::shared_ptr<const PressureCurve> curve = nullptr);
DimensionResult solve_dimension_log(int r, double log_B, double tol = 1e-4,
                                    std::shared_ptr<const PressureCurve> curve = nullptr);

DimensionResult dimension_dispatch(int r, const ThresholdFn& psi, double tol = 1e-4);

struct ExponentResult {
  double value = 0.0;
  int argmin = 0;
  std::vector<double> d;  // d_0 .. d_{r-1}
};

// min_i d_i where d_i is the root of
//   P(s) - s ln beta_i + (1 - s) ln beta_{i-1},  beta_i = B^(i+1),
// each pressure value computed afresh from the eigenvalue problem.
ExponentResult hussain_shulga_exponent(int r, double B, double tol = 1e-7,
                                       const EigenOptions& eigen = {56, 1500, TailMode::zeta, 1e-13, 10000, 1});

}  // namespace cfdim
