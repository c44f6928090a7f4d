#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfdim/errors.hpp"
#include "cfdim/pressure.hpp"

using namespace cfdim;

TEST_CASE("pressure vanishes at s = 1") {
  const auto p = pressure_eigen(1.0, {64, 10000, TailMode::zeta, 1e-12, 10000, 1});
  CHECK(std::abs(p.value) < 1e-8);
  CHECK(p.lower <= 0.0);
  CHECK(p.upper >= 0.0);
}

TEST_CASE("pressure is decreasing and convex") {
  const EigenOptions o{48, 2000, TailMode::zeta, 1e-12, 10000, 1};
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(pressure_eigen(0.55 + 0.045 * i, o).value);
  for (int i = 0; i < 10; ++i) CHECK(v[i] > v[i + 1]);
  for (int i = 1; i < 10; ++i) CHECK(v[i - 1] - 2 * v[i] + v[i + 1] > 0);
}

TEST_CASE("cylinder sums") {
  const auto z1 = cylinder_sums(1.0, 1);
  CHECK(z1[0] == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-12));
  const auto p1 = pressure_cylinder(1.0, 1);
  CHECK(p1.value == doctest::Approx(std::log(std::numbers::pi * std::numbers::pi / 6)));

  double brute = 0;
  for (int a = 1; a <= 10; ++a)
    for (int b = 1; b <= 10; ++b) brute += std::pow(double(a * b + 1), -2.0);
  const auto z2 = cylinder_sums(1.0, 2, {32, 10, 1});
  CHECK(z2[1] == doctest::Approx(brute).epsilon(1e-12));

  double previous = -INFINITY;
  for (cf::Digit cap : {5, 20, 100, 1000}) {
    const double v = pressure_cylinder(0.8, 3, {32, cap, 1}).value;
    CHECK(v >= previous);
    previous = v;
  }
  CHECK(previous <= pressure_cylinder(0.8, 3, {32, 0, 1}).value);
}

TEST_CASE("eigenvalue and cylinder routes agree") {
  for (double s : {0.6, 0.75, 0.9, 1.0}) {
    const auto e = pressure_eigen(s, {64, 4000, TailMode::zeta, 1e-12, 10000, 1});
    const auto c = pressure_cylinder(s, 12);
    CHECK(e.value >= c.lower - 1e-9);
    CHECK(e.value <= c.upper + 1e-9);
    CHECK(std::abs(e.value - c.ratio_estimate) < 2e-3);
  }
}

TEST_CASE("pressure curve") {
  const auto curve = PressureCurve::shared();
  CHECK(curve->error_estimate() < 1e-6);
  for (double s : {0.52, 0.6, 0.8, 1.0}) {
    const double direct = pressure_eigen(s, {64, 2000, TailMode::zeta, 1e-13, 10000, 1}).value;
    CHECK((*curve)(s) == doctest::Approx(direct).epsilon(1e-8));
  }
  // P'(1) is minus the Lyapunov exponent of the Gauss map
  CHECK(curve->derivative(1.0) == doctest::Approx(-std::numbers::pi * std::numbers::pi / (6 * std::log(2.0))).epsilon(1e-6));
  CHECK_THROWS_AS((*curve)(0.5), DomainError);
  CHECK_THROWS_AS(pressure_eigen(0.4), DomainError);
}
