#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "cfdim/errors.hpp"
#include "cfdim/thresholds.hpp"

using namespace cfdim;

namespace {

std::vector<double> squares_of(int n) {
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(double(i) * i);
  return v;
}

}  // namespace

TEST_CASE("log values") {
  const auto p = ThresholdFn::poly_log(1.0, 1.0);
  CHECK(p.log_value(10) == doctest::Approx(std::log(10 * std::log(10.0))));
  CHECK(p.log_value(1) == doctest::Approx(std::log(std::log(2.0))));
  const auto g = ThresholdFn::geometric(2.0);
  CHECK(g.log_value(40) == doctest::Approx(40 * std::log(2.0)));
  CHECK(*g.ceil_value(10) == 1024);
  const auto d = ThresholdFn::double_exp(std::exp(1.0), 3.0);
  CHECK(d.log_log_value(5) == doctest::Approx(5 * std::log(3.0)));
  CHECK_FALSE(d.ceil_value(10).has_value());
  const auto sg = ThresholdFn::scaled_geometric(1.5, ThresholdFn::geometric(4.0));
  CHECK(sg.log_value(3) == doctest::Approx(3 * std::log(6.0)));
  CHECK_THROWS_AS(ThresholdFn::scaled_geometric(0.5, ThresholdFn::geometric(4.0)), DomainError);
  CHECK_THROWS_AS(ThresholdFn::geometric(0.0), DomainError);
  CHECK_THROWS_AS(ThresholdFn::double_exp(1.0, 2.0), DomainError);
}

TEST_CASE("monotone envelope") {
  const auto t = ThresholdFn::table({5, 3, 4, 4});
  const auto env = envelope(t, 4);
  const double expect[] = {3, 3, 4, 4};
  for (int i = 0; i < 4; ++i) CHECK(std::exp(env.log_values[i]) == doctest::Approx(expect[i]));

  const auto e = monotone_envelope(t);
  for (std::uint64_t n = 1; n <= 4; ++n) CHECK(std::exp(e.log_value(n)) == doctest::Approx(expect[n - 1]));
  const auto ee = monotone_envelope(e);
  for (std::uint64_t n = 1; n <= 4; ++n) CHECK(ee.log_value(n) == e.log_value(n));

  const auto nl = ThresholdFn::poly_log(1.0, 1.0);
  const auto nle = envelope(nl, 1000);
  CHECK_FALSE(nle.upper_bound_only);
  for (std::uint64_t n = 2; n <= 1000; ++n) CHECK(nle.log_values[n - 1] == doctest::Approx(nl.log_value(n)));

  // n / log(n)^2 dips before it grows; the envelope is the suffix minimum
  const auto dip = ThresholdFn::poly_log(1.0, -2.0);
  const auto de = envelope(dip, 200);
  for (std::uint64_t n = 1; n <= 200; ++n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = n; k <= 5000; ++k) m = std::min(m, dip.log_value(k));
    CHECK(de.log_values[n - 1] == doctest::Approx(m));
    CHECK(de.log_values[n - 1] <= dip.log_value(n));
  }

  std::vector<double> wiggle;
  for (int i = 1; i <= 50; ++i) wiggle.push_back(i % 2 ? i : i / 2.0);
  // without a hint the table may continue below its last value
  CHECK(envelope(ThresholdFn::table(wiggle), 50).upper_bound_only);
  CHECK_FALSE(envelope(ThresholdFn::table(squares_of(50), {MonotoneHint::Kind::nondecreasing, 1}), 50).upper_bound_only);
}

TEST_CASE("series verdicts") {
  auto verdict = [](int r, const ThresholdFn& f) { return series_classify(r, f).verdict; };
  CHECK(verdict(1, ThresholdFn::poly_log(2, 0)) == Verdict::convergent);
  CHECK(verdict(1, ThresholdFn::poly_log(1, 0)) == Verdict::divergent);
  CHECK(verdict(1, ThresholdFn::poly_log(1, 1)) == Verdict::divergent);
  CHECK(verdict(1, ThresholdFn::poly_log(1, 1.1)) == Verdict::convergent);
  for (double c : {0.3, 0.5, 0.51, 0.6, 1.0}) {
    CHECK(verdict(2, ThresholdFn::poly_log(1, c)) == (c > 0.5 ? Verdict::convergent : Verdict::divergent));
    CHECK(verdict(3, ThresholdFn::poly_log(1, c)) == (c > 1.0 / 3 ? Verdict::convergent : Verdict::divergent));
  }
  for (int r = 1; r <= 4; ++r) {
    CHECK(verdict(r, ThresholdFn::geometric(1.01)) == Verdict::convergent);
    CHECK(verdict(r, ThresholdFn::double_exp(2, 2)) == Verdict::convergent);
    CHECK(verdict(r, monotone_envelope(ThresholdFn::poly_log(1, 0.4))) ==
          verdict(r, ThresholdFn::poly_log(1, 0.4)));
  }
  CHECK_THROWS_AS(ThresholdFn::geometric(0.9), DomainError);

  // partial sums are the running sum of n^(r-1) psi(n)^(-r)
  const auto v = series_classify(2, ThresholdFn::poly_log(1, 0.6), 1024);
  double s = 0;
  for (std::uint64_t n = 1; n <= 1024; ++n) s += n / std::pow(n * std::pow(std::log(std::max<double>(n, 2)), 0.6), 2);
  CHECK(v.partial_sums.back().first == 1024);
  CHECK(v.partial_sums.back().second == doctest::Approx(s).epsilon(1e-10));

  std::vector<double> squares;
  for (int n = 1; n <= 1 << 14; ++n) squares.push_back(double(n) * n);
  const auto tv = series_classify(1, ThresholdFn::table(squares, {MonotoneHint::Kind::nondecreasing, 1}));
  CHECK(tv.method == VerdictMethod::numeric);
  CHECK(tv.verdict == Verdict::convergent);
  std::vector<double> lin;
  for (int n = 1; n <= 1 << 14; ++n) lin.push_back(n);
  CHECK(series_classify(1, ThresholdFn::table(lin, {MonotoneHint::Kind::nondecreasing, 1})).verdict !=
        Verdict::convergent);
}

TEST_CASE("dyadic equivalence") {
  const auto lin = dyadic_equivalence_check(1, ThresholdFn::poly_log(1, 0), 10);
  CHECK(lin.sandwich_holds);
  CHECK(lin.within_constant);
  CHECK(lin.worst_constant <= 4.0);
  // independent block sums for psi(n) = n, r = 1
  for (const auto& b : lin.blocks) {
    double sum = 0;
    for (std::uint64_t n = std::uint64_t{1} << b.j; n < std::uint64_t{2} << b.j; ++n) sum += 1.0 / n;
    CHECK(b.block_sum == doctest::Approx(sum));
    CHECK(b.reference == doctest::Approx(1.0));
  }
  // B^n is only dyadically regular while B^(2^J) stays bounded
  const auto geo = dyadic_equivalence_check(2, ThresholdFn::geometric(1.001), 8);
  CHECK(geo.sandwich_holds);
  CHECK(geo.worst_constant <= 16.0);
  const auto flat = dyadic_equivalence_check(2, ThresholdFn::poly_log(0, 0), 8);
  CHECK(flat.sandwich_holds);
  CHECK(std::isfinite(flat.worst_constant));
}

TEST_CASE("growth exponents") {
  const auto g = growth_exponents(ThresholdFn::geometric(2));
  CHECK(g.log_B == doctest::Approx(std::log(2.0)));
  CHECK(g.log_b == 0.0);
  CHECK_FALSE(g.estimate);
  const auto p = growth_exponents(ThresholdFn::poly_log(2, 0));
  CHECK(p.log_B == 0.0);
  CHECK(p.log_b == 0.0);
  const auto d = growth_exponents(ThresholdFn::double_exp(std::exp(1.0), 3));
  CHECK(std::isinf(d.log_B));
  CHECK(d.log_b == doctest::Approx(std::log(3.0)));
  const auto env = growth_exponents(monotone_envelope(ThresholdFn::geometric(2)));
  CHECK(env.log_B == doctest::Approx(g.log_B));

  std::vector<double> table;
  for (int n = 1; n <= 400; ++n) table.push_back(std::pow(3.0, n));
  const auto t = growth_exponents(ThresholdFn::table(table, {MonotoneHint::Kind::nondecreasing, 1}), 400);
  CHECK(t.estimate);
  CHECK(t.log_B == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}
