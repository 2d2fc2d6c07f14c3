#pragma once

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace wqkd {

// Splits [0, n) into at most `threads` contiguous chunks, runs `work(lo, hi)`
// on each, and returns the per-chunk results in chunk order. Callers must keep
// `work` free of shared mutable state; reductions over the returned vector
// stay deterministic for any thread count.
template <class Fn>
auto parallel_chunks(std::uint64_t n, int threads, Fn&& work)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  if (threads < 1) {
    throw std::invalid_argument("thread count must be at least one");
  }
  if (n == 0) {
    return {};
  }
  const std::uint64_t chunks = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n);
  const std::uint64_t base = n / chunks;
  const std::uint64_t rem = n % chunks;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  ranges.reserve(chunks);
  std::uint64_t lo = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t hi = lo + base + (c < rem ? 1 : 0);
    ranges.emplace_back(lo, hi);
    lo = hi;
  }

  std::vector<Result> results(chunks);
  if (chunks == 1) {
    results[0] = work(ranges[0].first, ranges[0].second);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] { results[c] = work(ranges[c].first, ranges[c].second); });
  }
  for (auto& t : pool) {
    t.join();
  }
  return results;
}

}  // namespace wqkd
