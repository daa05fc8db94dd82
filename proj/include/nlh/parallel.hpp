#pragma once

#include <cstddef>
#include <functional>

namespace nlh {

/// Worker count: NLH_THREADS if set and positive, else hardware concurrency.
int thread_count();

/**
 * Split [0, n) into contiguous chunks and run body(begin, end, chunk) on a
 * pool of at most thread_count() threads.  Chunk boundaries depend only on n
 * and `chunks`, never on the thread count, so callers that merge per-chunk
 * results in chunk order get identical output for any NLH_THREADS.
 */
void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Fixed chunk count used by the library for a range of length n.
std::size_t default_chunks(std::size_t n);

}  // namespace nlh
