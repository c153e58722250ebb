#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace haarfisher {

/// Work is split into blocks of this many items regardless of the worker
/// count, so block boundaries (and thus floating-point reduction order) never
/// depend on scheduling.
inline constexpr std::uint64_t kBlockSize = 64;

/// Resolves a requested worker count; 0 means all hardware threads.
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Calls fn(i) for every i in [0, count) on up to `workers` threads.
/// The first exception thrown by any call is rethrown on the caller.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  const unsigned threads = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Map-reduce over [0, count): make_block(begin, end) builds the accumulator
/// of one block, merge(into, from) combines two. Blocks are reduced by a
/// pairwise tree in index order, so the result is bit-identical for any
/// worker count.
template <class Acc, class MakeBlock, class Merge>
Acc parallel_block_reduce(std::uint64_t count, unsigned workers,
                          MakeBlock&& make_block, Merge&& merge) {
  const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> partial(blocks);
  parallel_for(blocks, workers, [&](std::uint64_t b) {
    const std::uint64_t begin = b * kBlockSize;
    partial[b] = make_block(begin, std::min(count, begin + kBlockSize));
  });
  if (partial.empty()) return make_block(0, 0);
  for (std::size_t stride = 1; stride < partial.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < partial.size(); i += 2 * stride) {
      merge(partial[i], partial[i + stride]);
    }
  }
  return std::move(partial.front());
}

}  // namespace haarfisher
