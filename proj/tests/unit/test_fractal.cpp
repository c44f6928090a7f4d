#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cfdim/dimension.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/fractal.hpp"

using namespace cfdim;

TEST_CASE("windows") {
  const auto spec = CantorSpec::uniform(2, 10, 5);
  const auto w = windows(spec, 2);
  REQUIRE(w.size() == 2);
  CHECK(w[0].first == 100);
  CHECK(w[0].last == 199);
  CHECK(w[1].first == 100);
}

TEST_CASE("cover generation") {
  const auto spec = CantorSpec::uniform(1, 10, 2);
  const auto cover = generate_cover(spec, 2);
  CHECK(cover.size() == 200);
  for (const auto& c : cover) {
    CHECK(c.word.size() == 2);
    CHECK(c.word[0] <= 2);
    CHECK(c.word[1] >= 100);
    CHECK(c.word[1] < 200);
  }
  auto sorted = cover;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.left < b.left; });
  for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i - 1].right <= sorted[i].left);

  const auto r2 = CantorSpec::uniform(2, 3, 3);
  const auto c2 = generate_cover(r2, 2, 10000000, 1);
  const auto c2p = generate_cover(r2, 2, 10000000, 3);
  CHECK(c2.size() == 3 * 9 * 9);
  REQUIRE(c2.size() == c2p.size());
  for (std::size_t i = 0; i < c2.size(); ++i) CHECK(c2[i].word == c2p[i].word);
  CHECK_THROWS_AS(generate_cover(spec, 6, 1000), BudgetError);
}

TEST_CASE("cover exponent") {
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3};
  CHECK(cover_exponent(thirds) == doctest::Approx(std::log(2.0) / std::log(3.0)));
  const std::vector<double> four{0.25, 0.25, 0.25, 0.25};
  CHECK(cover_exponent(four) == doctest::Approx(1.0));

  std::vector<double> mixed{0.1, 0.02, 0.3, 0.004, 0.05, 0.2};
  const double t = cover_exponent(mixed);
  std::reverse(mixed.begin(), mixed.end());
  CHECK(cover_exponent(mixed) == t);
  std::rotate(mixed.begin(), mixed.begin() + 2, mixed.end());
  CHECK(cover_exponent(mixed) == t);
}

TEST_CASE("operator cover sums equal explicit enumeration") {
  for (int r : {1, 2}) {
    const auto spec = CantorSpec::uniform(r, 4, 6);
    const std::uint64_t n = 2;
    const auto cover = generate_cover(spec, n);
    for (double t : {0.4, 0.6}) {
      double explicit_sum = 0;
      for (const auto& c : cover) explicit_sum += std::pow(c.length().get_d(), t);
      CHECK(cover_sum(spec, n, t, r, 48) == doctest::Approx(explicit_sum).epsilon(1e-9));
    }
  }
}

TEST_CASE("dimension estimates") {
  const std::vector<std::uint64_t> gens{3, 4, 5, 6};
  const auto est = cover_dimension_estimate(CantorSpec::uniform(1, 10, 50), gens);
  REQUIRE(est.rows.size() == 4);
  for (std::size_t i = 1; i < est.rows.size(); ++i) CHECK(est.rows[i].t_n > est.rows[i - 1].t_n);
  CHECK(std::abs(est.extrapolated - solve_dimension(1, 10).value) < 0.1);
  CHECK_FALSE(est.low_confidence);

  const auto big = cover_dimension_estimate(CantorSpec::uniform(1, 1000, 50), gens);
  CHECK(big.extrapolated < est.extrapolated);
  const auto r2 = cover_dimension_estimate(CantorSpec::uniform(2, 10, 50), gens);
  CHECK(r2.extrapolated < est.extrapolated);

  const std::vector<std::uint64_t> two{3, 4};
  CHECK_THROWS_AS(cover_dimension_estimate(CantorSpec::uniform(1, 10, 50), two), DomainError);
}
