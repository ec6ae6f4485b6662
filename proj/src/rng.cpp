#include "rpsemi/rng.hpp"

#include <cmath>

namespace rpsemi {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWey0 = 0x9E3779B9u;
constexpr std::uint32_t kWey1 = 0xBB67AE85u;

inline void philox_round(RngStream::Block& c, const RngStream::Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
       static_cast<std::uint32_t>(p1),
       static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
       static_cast<std::uint32_t>(p0)};
}

}  // namespace

RngStream::Block RngStream::philox4x32(Block counter, Key key) noexcept {
  philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWey0;
    key[1] += kWey1;
    philox_round(counter, key);
  }
  return counter;
}

void RngStream::refill() noexcept {
  const Block ctr = {static_cast<std::uint32_t>(block_),
                     static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(stream_),
                     static_cast<std::uint32_t>(stream_ >> 32)};
  const Key key = {static_cast<std::uint32_t>(seed_),
                   static_cast<std::uint32_t>(seed_ >> 32)};
  const Block o = philox4x32(ctr, key);
  out_[0] = o[0] | (static_cast<std::uint64_t>(o[1]) << 32);
  out_[1] = o[2] | (static_cast<std::uint64_t>(o[3]) << 32);
  ++block_;
  pos_ = 0;
}

double RngStream::next_exponential(double rate) noexcept {
  return -std::log(next_uniform01()) / rate;
}

}  // namespace rpsemi
