#include <doctest.h>

#include <cmath>

#include "cfdim/errors.hpp"
#include "cfdim/measure.hpp"

using namespace cfdim;

TEST_CASE("counting statistic") {
  const std::vector<cf::Digit> d{5, 1, 7, 2};
  CHECK(count_large(d, 4, 5) == 2);
  const std::vector<cf::Digit> ones{1, 1, 1};
  CHECK(count_large(ones, 3, 2) == 0);
  CHECK_THROWS_AS(count_large(ones, 4, 2), DomainError);
}

TEST_CASE("hit levels") {
  std::vector<cf::Digit> d{1, 3, 1, 1, 1, 1, 1, 1};
  const auto h = hit_levels(d, 1, ThresholdFn::poly_log(0, 0) /* psi = 1 */, 8);
  CHECK(h.size() == 8);
  std::vector<double> two(8, 2.0);
  const auto h2 = hit_levels(d, 1, ThresholdFn::table(two, {MonotoneHint::Kind::nondecreasing, 1}), 8);
  CHECK(h2 == std::vector<std::uint64_t>{2, 3, 4, 5, 6, 7, 8});
  std::vector<cf::Digit> e{5, 5, 1, 1, 1, 1, 1, 1};
  CHECK(hit_levels(e, 2, ThresholdFn::poly_log(1, 0), 8) == std::vector<std::uint64_t>{2, 3, 4, 5});

  // brute force against the definition
  std::vector<cf::Digit> w{3, 9, 1, 12, 2, 40, 1, 1, 7, 100, 2, 2};
  const auto psi = ThresholdFn::poly_log(1, 0);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 1; n <= w.size(); ++n) {
    int c = 0;
    for (std::uint64_t k = 0; k < n; ++k) c += w[k] >= n;
    if (c >= 2) expect.push_back(n);
  }
  CHECK(hit_levels(w, 2, psi, w.size()) == expect);
}

TEST_CASE("exact event measures") {
  const auto half = event_measure_exact({{1}, 2.0});
  CHECK(half.contains(0.5));
  CHECK(half.upper - half.lower < 1e-12);

  // sum over a >= 2 of |{a_1 = a, a_2 >= 2}| = 1/a - 1/(a + 1/2)
  double oracle = 0;
  for (int a = 2; a <= 2000000; ++a) oracle += 1.0 / (a * (2.0 * a + 1.0));
  oracle += 1.0 / (2.0 * 2000000.5);
  const auto pair = event_measure_exact({{1, 2}, 2.0});
  CHECK(pair.lower <= oracle + 1e-9);
  CHECK(pair.upper >= oracle - 1e-9);
  CHECK(std::abs(pair.mid() - oracle) < 1e-6);

  const auto g = event_measure_exact({{1}, 3.0}, 1000000, SamplingMeasure::gauss);
  CHECK(g.contains(std::log2(4.0 / 3.0)));
  const auto g5 = event_measure_exact({{5}, 3.0}, 100, SamplingMeasure::gauss);
  CHECK(g5.contains(std::log2(4.0 / 3.0)));

  CHECK_THROWS_AS(event_measure_exact({{1, 2, 3, 4, 5}, 1.0}, 1000000, SamplingMeasure::lebesgue, 1000), BudgetError);
  CHECK_THROWS_AS(event_measure_exact({{2, 1}, 2.0}), DomainError);
}

TEST_CASE("operator route matches enumeration") {
  for (auto m : {SamplingMeasure::gauss, SamplingMeasure::lebesgue}) {
    const EventSpec adjacent{{1, 2}, 4.0};
    const auto ex = event_measure_exact(adjacent, 1000000, m);
    const auto op = event_measure_operator(adjacent, m);
    CHECK(ex.upper - ex.lower < 2e-6);
    CHECK(op.mid() >= ex.lower - 1e-9);
    CHECK(op.mid() <= ex.upper + 1e-9);

    // a free position in between; the capped enumeration only brackets
    const EventSpec gapped{{1, 3}, 4.0};
    const auto loose = event_measure_exact(gapped, 2000, m);
    const auto op3 = event_measure_operator(gapped, m);
    CHECK(loose.upper - loose.lower < 1e-3);
    CHECK(op3.mid() >= loose.lower - 1e-9);
    CHECK(op3.mid() <= loose.upper + 1e-9);
  }
}

TEST_CASE("quasi-independence") {
  const auto far = quasi_independence_ratio({{1, 51}, 100.0});
  CHECK(far.lower >= 0.9);
  CHECK(far.upper <= 1.1);
  const auto near = quasi_independence_ratio({{1, 2}, 100.0});
  CHECK(near.upper <= 10.0);
  const auto single = quasi_independence_ratio({{1}, 7.0});
  CHECK(single.lower == doctest::Approx(1.0));
  CHECK(single.upper == doctest::Approx(1.0));
}

TEST_CASE("separated tuples") {
  for (int m = 10; m <= 14; ++m) {
    const auto c = count_separated_tuples(m, 1);
    CHECK(c.count == (mpz_class(1) << (m - 1)) - m * m);
    CHECK(c.valid);
  }
  CHECK(default_gap(12) == static_cast<std::uint64_t>(std::ceil(std::pow(12 * std::log(2.0), 2))));
  for (int m = 2; m <= 14; ++m) {
    const auto c = count_separated_tuples(m, 2);
    const std::int64_t lo = (std::int64_t{1} << (m - 1)) + m * m + 1, hi = std::int64_t{1} << m;
    const auto g = static_cast<std::int64_t>(c.gap);
    std::int64_t brute = 0;
    for (std::int64_t a = lo; a <= hi; ++a)
      for (std::int64_t b = a + 1; b <= hi; ++b) brute += b - a - 1 >= g;
    CHECK(c.count == brute);
    CHECK(c.count == c.closed_form);
  }
  for (int m = 4; m <= 9; ++m) {
    const auto c = count_separated_tuples(m, 3, 2);
    const std::int64_t lo = (std::int64_t{1} << (m - 1)) + m * m + 1, hi = std::int64_t{1} << m;
    std::int64_t brute = 0;
    for (std::int64_t a = lo; a <= hi; ++a)
      for (std::int64_t b = a + 3; b <= hi; ++b)
        for (std::int64_t d = b + 3; d <= hi; ++d) ++brute;
    CHECK(c.count == brute);
    CHECK_FALSE(c.valid);
  }
  for (int r = 1; r <= 3; ++r) {
    double previous = 0;
    for (int m = 10; m <= 22; ++m) {
      const auto c = count_separated_tuples(m, r);
      mpz_class fact = 1;
      for (int i = 2; i <= r; ++i) fact *= i;
      const double ratio = mpq_class(c.count * fact, mpz_class(1) << (r * (m - 1))).get_d();
      CHECK(ratio > previous);
      CHECK(ratio < 1.0);
      previous = ratio;
    }
    CHECK(previous > 0.95);
  }
}

TEST_CASE("dichotomy experiment") {
  const auto psi = ThresholdFn::poly_log(1, 0);
  DichotomyOptions o;
  const auto a = dichotomy_experiment(1, psi, 200, 4, 9, 77, o);
  o.workers = 3;
  const auto b = dichotomy_experiment(1, psi, 200, 4, 9, 77, o);
  REQUIRE(a.rows.size() == 6);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].block_hits == b.rows[i].block_hits);
    CHECK(a.rows[i].cumulative_hits == b.rows[i].cumulative_hits);
    CHECK(a.rows[i].n == (std::uint64_t{1} << a.rows[i].m));
    if (i) CHECK(a.rows[i].cumulative_hits >= a.rows[i - 1].cumulative_hits);
  }
  // psi(n) = n, r = 1: P(max_{k<=n} a_k >= n) tends to 1 - exp(-1/ln 2)
  const double limit = 1 - std::exp(-1.0 / std::log(2.0));
  const auto& last = a.rows.back();
  CHECK(std::abs(last.block_freq - limit) < 4 * std::sqrt(limit * (1 - limit) / 200) + 0.02);
  CHECK_THROWS_AS(dichotomy_experiment(1, psi, 10, 4, 9, 1), DomainError);
}
