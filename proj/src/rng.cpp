#include "wqkd/rng.hpp"

namespace wqkd::rng {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const auto prod = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(prod >> 64);
  lo = static_cast<std::uint64_t>(prod);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(Philox4x64Counter counter, Philox4x64Key key) {
  std::uint64_t c0 = counter.c0, c1 = counter.c1, c2 = counter.c2, c3 = counter.c3;
  std::uint64_t k0 = key.k0, k1 = key.k1;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c0, hi0, lo0);
    mulhilo(kMult1, c2, hi1, lo1);
    const std::uint64_t n0 = hi1 ^ c1 ^ k0;
    const std::uint64_t n1 = lo1;
    const std::uint64_t n2 = hi0 ^ c3 ^ k1;
    const std::uint64_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {c0, c1, c2, c3};
}

}  // namespace wqkd::rng
