#pragma once

#include <array>
#include <cstdint>

namespace infoloss {

// Philox4x32-10 counter-based generator. Output for a given (key, counter)
// pair is a pure function, so independent sample indices can be drawn in any
// order, on any number of threads, with identical results.
class Philox4x32 {
 public:
  using Block = std::array<uint32_t, 4>;

  explicit Philox4x32(uint64_t seed, uint64_t stream = 0);

  // Raw 128-bit block for a 128-bit counter value.
  Block block(uint64_t counter_hi, uint64_t counter_lo) const;

  // Uniform double in (0, 1), indexed by a global sample number.
  // Lane selects one of the four 32-bit outputs per block; two lanes are
  // fused per double.
  double u01(uint64_t index) const;

  static constexpr uint32_t kW32A = 0x9E3779B9u;
  static constexpr uint32_t kW32B = 0xBB67AE85u;
  static constexpr uint32_t kM4x32A = 0xD2511F53u;
  static constexpr uint32_t kM4x32B = 0xCD9E8D57u;

 private:
  uint32_t key0_, key1_;
};

// Sequential view over a Philox generator: next_u01() walks consecutive
// sample indices. Copyable; copies continue from the same position.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t stream = 0, uint64_t start_index = 0)
      : gen_(seed, stream), index_(start_index) {}

  double next_u01() { return gen_.u01(index_++); }
  uint64_t index() const { return index_; }
  const Philox4x32& generator() const { return gen_; }

 private:
  Philox4x32 gen_;
  uint64_t index_;
};

}  // namespace infoloss
