#pragma once

#include <array>
#include <cstdint>

namespace rpsemi {

// Philox4x32-10 counter-based stream. A stream is identified by
// (master seed, stream id); the key holds the seed and the 128-bit counter
// holds (block index, stream id), so distinct streams never overlap and any
// block can be generated without sequencing through its predecessors. That
// is what makes parallel runs bit-identical regardless of worker count.
class RngStream {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : seed_(master_seed), stream_(stream_id) {}

  std::uint64_t next_u64() noexcept {
    if (pos_ >= 2) refill();
    return out_[pos_++];
  }

  // Uniform on the open interval (0,1): 53-bit grid shifted by half a step,
  // so 0 and 1 are unreachable and -log(u) is always finite.
  double next_uniform01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double next_exponential(double rate) noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  // One keyed 10-round bijection; exposed for known-answer tests.
  static Block philox4x32(Block counter, Key key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> out_{};
  unsigned pos_ = 2;
};

}  // namespace rpsemi
