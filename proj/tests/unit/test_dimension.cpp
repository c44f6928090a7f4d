#include <doctest.h>

#include <cmath>

#include "cfdim/dimension.hpp"
#include "cfdim/errors.hpp"

using namespace cfdim;

TEST_CASE("limits in B") {
  CHECK(solve_dimension(1, 1.001).value > 0.95);
  CHECK(solve_dimension(1, 1e6).value < 0.55);
}

TEST_CASE("ordering in r") {
  const double s1 = solve_dimension(1, 2, 1e-6).value;
  const double s2 = solve_dimension(2, 2, 1e-6).value;
  const double s3 = solve_dimension(3, 2, 1e-6).value;
  CHECK(s1 > s2);
  CHECK(s2 > s3);
}

TEST_CASE("root satisfies the defining equation") {
  const auto curve = PressureCurve::shared();
  for (double B : {2.0, 10.0}) {
    const auto d = solve_dimension(1, B, 1e-8);
    CHECK((*curve)(d.value) == doctest::Approx(d.value * std::log(B)).epsilon(1e-6));
    CHECK(!d.trace.empty());
    CHECK(d.regime == Regime::finite_b);
  }
  const auto d = solve_dimension(3, 5, 1e-8);
  CHECK((*curve)(d.value) == doctest::Approx((d.value + 2 * (2 * d.value - 1)) * std::log(5.0)).epsilon(1e-6));
}

TEST_CASE("monotone and continuous in B") {
  for (int r = 1; r <= 3; ++r) {
    double previous = solve_dimension(r, 1.1, 1e-6).value;
    for (double logB = std::log(1.1) + 0.05; logB <= std::log(64.0); logB += 0.05) {
      const double s = solve_dimension(r, std::exp(logB), 1e-6).value;
      CHECK(s < previous);
      CHECK(previous - s <= 0.05);
      CHECK(s > 0.5);
      CHECK(s < 1.0);
      previous = s;
    }
  }
}

TEST_CASE("dispatch") {
  const auto one = dimension_dispatch(2, ThresholdFn::poly_log(3, 0));
  CHECK(one.regime == Regime::b_equals_one);
  CHECK(one.value == 1.0);
  const auto de = dimension_dispatch(1, ThresholdFn::double_exp(std::exp(1.0), 3));
  CHECK(de.regime == Regime::b_infinite);
  CHECK(de.value == doctest::Approx(0.25));
  for (double B : {1.5, 2.0, 7.0}) {
    CHECK(dimension_dispatch(2, ThresholdFn::geometric(B)).value == doctest::Approx(solve_dimension(2, B).value));
    CHECK(dimension_dispatch(1, ThresholdFn::geometric(B)).value == doctest::Approx(solve_dimension(1, B).value));
  }
  CHECK_THROWS_AS(solve_dimension(1, 2, 1e-15), DomainError);
  CHECK_THROWS_AS(solve_dimension(1, 1.0), DomainError);
}

TEST_CASE("independent exponent route") {
  const auto hs = hussain_shulga_exponent(3, 2.0);
  CHECK(hs.argmin == 2);
  CHECK(hs.d.size() == 3);
  CHECK(hs.d[0] > hs.d[1]);
  CHECK(hs.d[1] > hs.d[2]);
  for (int r = 1; r <= 3; ++r) {
    const double a = hussain_shulga_exponent(r, 10.0).value;
    const double b = solve_dimension(r, 10.0, 1e-7).value;
    CHECK(std::abs(a - b) <= 2e-7);
  }
}
