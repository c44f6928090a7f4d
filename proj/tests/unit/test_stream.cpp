#include <doctest.h>

#include <cmath>

#include "cfdim/digit_stream.hpp"
#include "cfdim/parallel.hpp"

using namespace cfdim;

namespace {

// |observed - expected| within k binomial standard deviations
bool within_sigma(std::uint64_t hits, std::uint64_t n, double p, double k = 3.0) {
  const double sd = std::sqrt(n * p * (1 - p));
  return std::abs(static_cast<double>(hits) - n * p) <= k * sd;
}

}  // namespace

TEST_CASE("exact stream digit marginals follow Gauss-Kuzmin") {
  // 1000 points, 1000 digits each
  std::vector<std::uint64_t> counts(9, 0);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    GaussDigitStream s(2024, i);
    for (int k = 0; k < 1000; ++k) {
      const auto a = s.next();
      if (a <= 8) ++counts[a];
      ++total;
    }
  }
  for (cf::Digit k = 1; k <= 8; ++k) {
    const double p = std::log2(1.0 + 1.0 / double(k * (k + 2)));
    INFO("digit " << k << " count " << counts[k]);
    CHECK(within_sigma(counts[k], total, p));
  }
}

TEST_CASE("lebesgue stream first digit") {
  std::uint64_t ones = 0, twos = 0;
  const std::uint64_t n = 50000;
  for (std::uint64_t i = 0; i < n; ++i) {
    StreamOptions o;
    o.measure = SamplingMeasure::lebesgue;
    GaussDigitStream s(7, i, o);
    const auto a = s.next();
    ones += a == 1;
    twos += a == 2;
  }
  CHECK(within_sigma(ones, n, 0.5));
  CHECK(within_sigma(twos, n, 1.0 / 6.0));
}

TEST_CASE("enclosure matches the emitted digits") {
  GaussDigitStream s(99, 3);
  for (int k = 0; k < 40; ++k) s.next();
  const auto cyl = s.enclosure();
  CHECK(cyl.word.size() == 40);
  CHECK(std::vector<cf::Digit>(cyl.word.digits().begin(), cyl.word.digits().end()) == s.history());
  CHECK(cyl.length() > 0);
}

TEST_CASE("multiprecision path agrees with the fast path") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    StreamOptions exact;
    exact.force_exact = true;
    GaussDigitStream fast(5, i), slow(5, i, exact);
    for (int k = 0; k < 200; ++k) REQUIRE(fast.next() == slow.next());
  }
}

TEST_CASE("streams are reproducible across thread counts") {
  auto run = [](unsigned workers) {
    std::vector<std::uint64_t> sums(64);
    parallel_for(sums.size(), workers, [&](std::size_t i) {
      GaussDigitStream s(17, i);
      std::uint64_t acc = 0;
      for (int k = 0; k < 300; ++k) acc = acc * 31 + s.next();
      sums[i] = acc;
    });
    return sums;
  };
  CHECK(run(1) == run(4));
}

TEST_CASE("iid surrogate marginals") {
  IidGaussKuzminStream s(1, 0);
  const std::uint64_t n = 200000;
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < n; ++i) ones += s.next() == 1;
  CHECK(within_sigma(ones, n, std::log2(4.0 / 3.0)));
}
