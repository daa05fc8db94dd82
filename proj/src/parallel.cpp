#include "nlh/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace nlh {

int thread_count() {
  if (const char* env = std::getenv("NLH_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::size_t default_chunks(std::size_t n) {
  // independent of the thread count on purpose
  return std::max<std::size_t>(1, std::min<std::size_t>(64, n / 256 + 1));
}

void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  auto bounds = [&](std::size_t c) { return c * n / chunks; };
  std::size_t workers = std::min<std::size_t>(chunks, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(bounds(c), bounds(c + 1), c);
    return;
  }
  std::atomic<std::size_t> next{0};
  // one slot per chunk so the reported error does not depend on scheduling
  std::vector<std::exception_ptr> errors(chunks);
  auto run = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(bounds(c), bounds(c + 1), c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nlh
