// Chunked parallel evaluation with deterministic, thread-count independent results.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace steerlab {

/// Worker cap: STEERLAB_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STEERLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return hw;
}

/// Runs fn(chunk) for chunk in [0, chunks) and returns the results in chunk order.
/// The caller reduces them, so the outcome never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> map_chunks(std::size_t chunks, Fn&& fn) {
  std::vector<Result> out(chunks);
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          out[c] = fn(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// [begin, end) of chunk c when n items are split into `chunks` near-equal parts.
inline std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t n, std::size_t chunks,
                                                           std::size_t c) {
  const std::uint64_t base = n / chunks, extra = n % chunks;
  const std::uint64_t begin = c * base + std::min<std::uint64_t>(c, extra);
  return {begin, begin + base + (c < extra ? 1 : 0)};
}

/// Fixed chunk count so RNG streams do not depend on the worker count.
inline constexpr std::size_t kSampleChunks = 64;

}  // namespace steerlab
