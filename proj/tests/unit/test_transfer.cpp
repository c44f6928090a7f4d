#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfdim/chebyshev.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/transfer.hpp"

using namespace cfdim;

namespace {

std::vector<double> sample(const ChebyshevGrid& g, auto f) {
  std::vector<double> v;
  for (double x : g.nodes()) v.push_back(f(x));
  return v;
}

}  // namespace

TEST_CASE("chebyshev grid") {
  const ChebyshevGrid g(17);
  CHECK(g.nodes().front() == 0.0);
  CHECK(g.nodes().back() == 1.0);
  const auto cubic = sample(g, [](double x) { return 1 - 2 * x + 3 * x * x * x; });
  for (double y : {0.0, 0.1, 0.37, 0.999}) CHECK(g.interpolate(cubic, y) == doctest::Approx(1 - 2 * y + 3 * y * y * y));
  for (int k = 0; k <= 15; ++k)
    CHECK(g.integrate(sample(g, [k](double x) { return std::pow(x, k); })) == doctest::Approx(1.0 / (k + 1)));
  const auto ex = sample(g, [](double x) { return std::exp(x); });
  // derivative functionals amplify rounding roughly like size^(2k)
  const auto rows = g.taylor_rows(5);
  double fact = 1;
  for (std::size_t k = 0; k <= 5; ++k) {
    if (k) fact *= double(k);
    double c = 0;
    for (std::size_t j = 0; j < g.size(); ++j) c += rows[k][j] * ex[j];
    CHECK(c == doctest::Approx(1.0 / fact).epsilon(1e-5));
  }
}

TEST_CASE("power sums") {
  double direct = 0;
  for (int k = 0; k < 1000; ++k) direct += std::pow(3.5 + k, -1.3);
  CHECK(power_sum(1.3, 3.5, 1000) == doctest::Approx(direct).epsilon(1e-12));
  // zeta(2) - 1 - 1/4
  CHECK(power_sum(2.0, 3.0, INFINITY) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1.25).epsilon(1e-13));
  double near_one = 0;
  for (int k = 0; k < 5000; ++k) near_one += std::pow(10.0 + k, -1.0000001);
  CHECK(power_sum(1.0000001, 10.0, 5000) == doctest::Approx(near_one).epsilon(1e-12));
  CHECK(power_integral(2.0, 1.0, INFINITY) == doctest::Approx(1.0));
  CHECK(power_integral(1.0, 1.0, std::exp(1.0)) == doctest::Approx(1.0));
}

TEST_CASE("gauss density is invariant at s = 1") {
  const ChebyshevGrid g(64);
  const auto h = sample(g, [](double x) { return 1.0 / (1.0 + x); });
  for (TailMode tail : {TailMode::zeta, TailMode::integral_bound}) {
    const TransferOperator L(g, 1.0, {{}, 10000, tail, 1});
    const auto out = L.apply_bracketed(h);
    // the integral enclosure is about 1/A^2 wide; the closed-form tail is exact to rounding
    const double tol = tail == TailMode::zeta ? 1e-10 : 1e-8;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(out.value[i] - h[i]) <= tol);
      CHECK(out.lower[i] <= h[i] + 1e-12);
      CHECK(out.upper[i] >= h[i] - 1e-12);
    }
  }
}

TEST_CASE("constant function at s = 1 gives zeta(2) at 0") {
  const ChebyshevGrid g(32);
  const TransferOperator L(g, 1.0);
  const std::vector<double> one(g.size(), 1.0);
  const auto out = L.apply_bracketed(one);
  const double z2 = std::numbers::pi * std::numbers::pi / 6;
  CHECK(out.value[0] == doctest::Approx(z2).epsilon(1e-13));
  CHECK(out.lower[0] <= z2 + 1e-13);
  CHECK(out.upper[0] >= z2 - 1e-13);
  // L1(1) = sum 1/(a+1)^2 = zeta(2) - 1
  CHECK(out.value.back() == doctest::Approx(z2 - 1).epsilon(1e-12));
}

TEST_CASE("three-fold capped apply equals word enumeration") {
  const ChebyshevGrid g(40);
  const TransferOperator L(g, 0.8, {{1, 20}, 20, TailMode::none, 1});
  std::vector<double> f(g.size(), 1.0);
  for (int k = 0; k < 3; ++k) f = L.apply(f);
  double brute = 0;
  for (int a = 1; a <= 20; ++a)
    for (int b = 1; b <= 20; ++b)
      for (int c = 1; c <= 20; ++c) brute += std::pow(double(a * b * c + a + c), -1.6);
  CHECK(f[0] == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("restricted digit ranges") {
  const ChebyshevGrid g(24);
  const TransferOperator L(g, 1.0, {{3, 0}, 100, TailMode::zeta, 1});
  const std::vector<double> one(g.size(), 1.0);
  double z = std::numbers::pi * std::numbers::pi / 6 - 1 - 0.25;
  CHECK(L.apply(one)[0] == doctest::Approx(z).epsilon(1e-12));
  CHECK_THROWS_AS(TransferOperator(g, 0.5), DomainError);
}

TEST_CASE("parallel build is identical") {
  const ChebyshevGrid g(48);
  const TransferOperator a(g, 0.7, {{}, 3000, TailMode::zeta, 1});
  const TransferOperator b(g, 0.7, {{}, 3000, TailMode::zeta, 4});
  CHECK(a.matrix() == b.matrix());
}
