#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "rpsemi/rng.hpp"

using rpsemi::RngStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using Block = RngStream::Block;
  using Key = RngStream::Key;

  const Block zero = RngStream::philox4x32(Block{0, 0, 0, 0}, Key{0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  const Block ones = RngStream::philox4x32(
      Block{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
      Key{0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  const Block pi = RngStream::philox4x32(
      Block{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
      Key{0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams replay exactly and separate by id") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 4096; ++i) {
    const std::uint64_t x = a.next_u64();
    if (x != b.next_u64()) all_equal = false;
    if (x != c.next_u64()) any_diff = true;
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(a.master_seed() == 42);
  CHECK(a.stream_id() == 7);
}

TEST_CASE("uniform draws live strictly inside (0,1)") {
  RngStream rng(1, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("exponential draws have the requested rate") {
  RngStream rng(9, 3);
  double sum = 0.0;
  bool positive = true;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double e = rng.next_exponential(2.0);
    positive = positive && e > 0.0;
    sum += e;
  }
  CHECK(positive);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(6e-3));
}
