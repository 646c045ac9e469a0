#ifndef ENTROFLOW_PHILOX_HPP_
#define ENTROFLOW_PHILOX_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace entroflow {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The 64-bit key
// selects the experiment, the upper 64 counter bits select the stream and the
// lower 64 bits count blocks within it, so stream i of seed s is reproducible
// regardless of which thread draws it.
//
// Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 2) {
      buffer_ = bijection(counter_, key_);
      increment();
      used_ = 0;
    }
    const std::size_t i = 2 * used_++;
    return static_cast<result_type>(buffer_[i]) |
           (static_cast<result_type>(buffer_[i + 1]) << 32);
  }

  // Ten rounds of the Philox S-P network applied to one counter block.
  static Block bijection(Block ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  void increment() {
    if (++counter_[0] == 0) ++counter_[1];
  }

  Key key_;
  Block counter_;
  Block buffer_{};
  std::size_t used_ = 2;
};

}  // namespace entroflow

#endif  // ENTROFLOW_PHILOX_HPP_
