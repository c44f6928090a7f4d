#include <doctest.h>

#include <cmath>
#include <set>

#include "cfdim/rng.hpp"

using cfdim::CounterBits;
using cfdim::Philox4x32;

// Known-answer vectors published with the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter bits are reproducible and streams differ") {
  CounterBits a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
    CHECK(x != d.next());
    seen.insert(x);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("counter bits look uniform") {
  CounterBits bits(1, 0);
  const int n = 200000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += static_cast<int>(bits.next() >> 63);
  // 5 sigma on a fair coin
  CHECK(std::abs(ones - n / 2) < 5 * std::sqrt(n / 4.0));
}
