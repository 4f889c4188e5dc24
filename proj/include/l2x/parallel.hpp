#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace l2x::par {

// Work is always split into fixed-size blocks that do not depend on the
// thread count. Each block is accumulated serially, and the per-block
// partials are reduced in ascending block order on one thread, so results
// are bit-identical for any --jobs value.
inline constexpr std::size_t kBlockSize = 8192;

int jobs();
void set_jobs(int k);

template <class Partial, class BlockFn, class ReduceFn>
Partial block_reduce(std::size_t count, std::size_t block_size, Partial init,
                     BlockFn&& block, ReduceFn&& reduce) {
  if (count == 0) return init;
  const std::size_t nblocks = (count + block_size - 1) / block_size;
  std::vector<Partial> parts(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs())
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block_size;
    const std::size_t hi = std::min(count, lo + block_size);
    parts[static_cast<std::size_t>(b)] = block(static_cast<std::size_t>(b), lo, hi);
  }
  Partial acc = std::move(init);
  for (std::size_t b = 0; b < nblocks; ++b) reduce(acc, std::move(parts[b]));
  return acc;
}

// Serial twin of block_reduce with the identical block decomposition and
// reduction order; kept as the reference implementation for tests.
template <class Partial, class BlockFn, class ReduceFn>
Partial block_reduce_serial(std::size_t count, std::size_t block_size, Partial init,
                            BlockFn&& block, ReduceFn&& reduce) {
  if (count == 0) return init;
  const std::size_t nblocks = (count + block_size - 1) / block_size;
  Partial acc = std::move(init);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(count, lo + block_size);
    reduce(acc, block(b, lo, hi));
  }
  return acc;
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs())
#endif
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    fn(static_cast<std::size_t>(i));
  }
}

}  // namespace l2x::par
