#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace matron {

// Worker count: explicit request, else MATRON_MATCH_THREADS, else hardware
// concurrency. Always >= 1.
unsigned thread_budget(unsigned requested = 0);

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
// Chunks are independent; callers merge per-chunk results in chunk order.
void parallel_chunks(std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t)>& body);

// Stateless 64-bit mixer; used to derive per-sample random streams so that
// sampling does not depend on the thread schedule.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace matron
