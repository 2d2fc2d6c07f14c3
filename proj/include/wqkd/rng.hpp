#pragma once

#include <array>
#include <cstdint>

namespace wqkd::rng {

// Counter-based generator (Philox4x64-10). Every draw is a pure function of
// (seed, stream, index, slot), so results never depend on evaluation order or
// on how work is split across threads.

struct Philox4x64Key {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

struct Philox4x64Counter {
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;
  std::uint64_t c2 = 0;
  std::uint64_t c3 = 0;
};

std::array<std::uint64_t, 4> philox4x64(Philox4x64Counter counter, Philox4x64Key key);

// Maps a 64-bit word to [0, 1) with 53-bit resolution.
inline double to_unit_double(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  std::uint64_t raw(std::uint64_t index, std::uint32_t slot) const {
    const auto block = philox4x64({index, slot, 0, 0}, key_);
    return block[0];
  }

  double uniform(std::uint64_t index, std::uint32_t slot) const {
    return to_unit_double(raw(index, slot));
  }

 private:
  Philox4x64Key key_;
};

}  // namespace wqkd::rng
