#include "infoloss/rng.hpp"

namespace infoloss {

namespace {

inline void mulhilo32(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  uint64_t p = static_cast<uint64_t>(a) * static_cast<uint64_t>(b);
  *hi = static_cast<uint32_t>(p >> 32);
  *lo = static_cast<uint32_t>(p);
}

inline Philox4x32::Block philox_round(const Philox4x32::Block& ctr, uint32_t k0,
                                      uint32_t k1) {
  uint32_t hi0, lo0, hi1, lo1;
  mulhilo32(Philox4x32::kM4x32A, ctr[0], &hi0, &lo0);
  mulhilo32(Philox4x32::kM4x32B, ctr[2], &hi1, &lo1);
  return {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

}  // namespace

Philox4x32::Philox4x32(uint64_t seed, uint64_t stream)
    : key0_(static_cast<uint32_t>(seed)),
      key1_(static_cast<uint32_t>(seed >> 32)) {
  // Fold the stream id into the key so distinct streams decorrelate fully.
  key0_ ^= static_cast<uint32_t>(stream * 0x85EBCA6Bu);
  key1_ ^= static_cast<uint32_t>((stream >> 32) * 0xC2B2AE35u + stream);
}

Philox4x32::Block Philox4x32::block(uint64_t counter_hi, uint64_t counter_lo) const {
  Block ctr = {static_cast<uint32_t>(counter_lo),
               static_cast<uint32_t>(counter_lo >> 32),
               static_cast<uint32_t>(counter_hi),
               static_cast<uint32_t>(counter_hi >> 32)};
  uint32_t k0 = key0_, k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    ctr = philox_round(ctr, k0, k1);
    if (round < 9) {
      k0 += kW32A;
      k1 += kW32B;
    }
  }
  return ctr;
}

double Philox4x32::u01(uint64_t index) const {
  Block blk = block(0, index >> 1);
  int lane = static_cast<int>(index & 1u) * 2;
  uint64_t bits = (static_cast<uint64_t>(blk[lane]) << 32) | blk[lane + 1];
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace infoloss
